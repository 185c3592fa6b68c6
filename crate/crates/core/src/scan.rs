//! Boundary-pattern DC prediction and the corner-to-corner scan shared by
//! both recovery methods.
//!
//! A scan starts at a corner block with an assumed DC and walks the grid
//! row by row away from that corner. Each later block gets its DC predicted
//! from the one or two neighbours already visited (the horizontal neighbour
//! and the vertical neighbour on the corner side), and the predictions are
//! averaged. With bounding enabled every estimate is projected onto the
//! block's valid DC interval and the projection is counted.

use crate::blockdct::{BlockGrid, DcBounds, DcFreePlane};
use crate::error::{Error, Result};

/// Starting corner of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::TopLeft, Corner::TopRight, Corner::BottomLeft, Corner::BottomRight];

    pub fn label(self) -> &'static str {
        match self {
            Corner::TopLeft => "tl",
            Corner::TopRight => "tr",
            Corner::BottomLeft => "bl",
            Corner::BottomRight => "br",
        }
    }

    fn starts_top(self) -> bool {
        matches!(self, Corner::TopLeft | Corner::TopRight)
    }

    fn starts_left(self) -> bool {
        matches!(self, Corner::TopLeft | Corner::BottomLeft)
    }

    /// Block coordinate `(row, col)` of the corner block.
    pub fn origin(self, grid: BlockGrid) -> (usize, usize) {
        let row = if self.starts_top() { 0 } else { grid.rows - 1 };
        let col = if self.starts_left() { 0 } else { grid.cols - 1 };
        (row, col)
    }

    // Maps the k-th row/column of the scan onto grid coordinates.
    fn row_at(self, grid: BlockGrid, k: usize) -> usize {
        if self.starts_top() {
            k
        } else {
            grid.rows - 1 - k
        }
    }

    fn col_at(self, grid: BlockGrid, k: usize) -> usize {
        if self.starts_left() {
            k
        } else {
            grid.cols - 1 - k
        }
    }
}

/// Cross-boundary pixel pairing geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `r[i]` against `q[i]`.
    Straight,
    /// `r[i]` against `q[i + 1]`.
    DiagonalDown,
    /// `r[i + 1]` against `q[i]`.
    DiagonalUp,
}

impl Pattern {
    /// Tie-break order: earlier wins.
    pub const ALL: [Pattern; 3] = [Pattern::Straight, Pattern::DiagonalDown, Pattern::DiagonalUp];
}

/// Position of the reference block relative to the target block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
    Left,
    Right,
}

/// How the paired boundary differences are reduced to a DC offset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PredictionRule {
    /// Least-squares shift.
    #[default]
    Mean,
    /// Least-absolute-deviation shift.
    Median,
}

/// Per-block DC values on a [`BlockGrid`], row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DcPlane {
    grid: BlockGrid,
    values: Vec<f64>,
}

impl DcPlane {
    pub fn new(grid: BlockGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.block_count() {
            return Err(Error::Dimension(format!(
                "DC plane needs {} values, got {}",
                grid.block_count(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn filled(grid: BlockGrid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.block_count()] }
    }

    pub fn grid(&self) -> BlockGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[self.grid.index(row, col)]
    }

    /// Copy with `delta` added to every block.
    pub fn shifted(&self, delta: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v + delta).collect() }
    }
}

/// Under/over-flow statistics of one bounded scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowStats {
    /// Blocks whose estimate had to be projected (`M_FR`).
    pub clamped_blocks: usize,
    /// All blocks (`M_B`).
    pub total_blocks: usize,
    pub rate: f64,
}

impl FlowStats {
    pub fn new(clamped_blocks: usize, total_blocks: usize) -> Self {
        let rate = if total_blocks == 0 { 0.0 } else { clamped_blocks as f64 / total_blocks as f64 };
        Self { clamped_blocks, total_blocks, rate }
    }
}

/// One block of a scan together with the already-visited neighbours its DC
/// is predicted from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanStep {
    pub block: (usize, usize),
    pub predecessors: Vec<(usize, usize)>,
}

/// Visiting order for a scan starting at `corner`.
pub fn scan_order(corner: Corner, grid: BlockGrid) -> Vec<ScanStep> {
    let mut steps = Vec::with_capacity(grid.block_count());
    for i in 0..grid.rows {
        let row = corner.row_at(grid, i);
        for j in 0..grid.cols {
            let col = corner.col_at(grid, j);
            let mut predecessors = Vec::with_capacity(2);
            if j > 0 {
                predecessors.push((row, corner.col_at(grid, j - 1)));
            }
            if i > 0 {
                predecessors.push((corner.row_at(grid, i - 1), col));
            }
            steps.push(ScanStep { block: (row, col), predecessors });
        }
    }
    steps
}

/// Outcome of [`predict_dc_detailed`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub pattern: Pattern,
    /// Variance of the paired differences, indexed like [`Pattern::ALL`].
    pub scores: [f64; 3],
    pub estimate: f64,
}

/// Predicts the DC of `target` (DC-free, row-major `n x n`) from the
/// reconstructed neighbour `reference` lying on `side` of it.
pub fn predict_dc(reference: &[f64], target: &[f64], side: Side, n: usize) -> f64 {
    predict_dc_detailed(reference, target, side, n, PredictionRule::Mean).estimate
}

pub fn predict_dc_detailed(
    reference: &[f64],
    target: &[f64],
    side: Side,
    n: usize,
    rule: PredictionRule,
) -> Prediction {
    assert!(reference.len() == n * n && target.len() == n * n, "blocks must be n x n");
    let (r, q) = boundaries(reference, target, side, n);
    let mut diffs = Vec::with_capacity(n);
    let mut best: Option<(Pattern, f64, f64)> = None;
    let mut scores = [0.0; 3];
    for (slot, &pattern) in Pattern::ALL.iter().enumerate() {
        paired_differences(&r, &q, pattern, &mut diffs);
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let score = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / diffs.len() as f64;
        scores[slot] = score;
        if best.is_none_or(|(_, s, _)| score < s) {
            let centre = match rule {
                PredictionRule::Mean => mean,
                PredictionRule::Median => median(&mut diffs),
            };
            best = Some((pattern, score, centre));
        }
    }
    let (pattern, _, centre) = best.expect("three patterns scored");
    Prediction { pattern, scores, estimate: n as f64 * centre }
}

// Reference line `r` and target line `q` along the shared edge, both indexed
// along the edge.
fn boundaries(reference: &[f64], target: &[f64], side: Side, n: usize) -> (Vec<f64>, Vec<f64>) {
    let row = |b: &[f64], y: usize| b[y * n..(y + 1) * n].to_vec();
    let col = |b: &[f64], x: usize| (0..n).map(|y| b[y * n + x]).collect::<Vec<_>>();
    match side {
        Side::Above => (row(reference, n - 1), row(target, 0)),
        Side::Below => (row(reference, 0), row(target, n - 1)),
        Side::Left => (col(reference, n - 1), col(target, 0)),
        Side::Right => (col(reference, 0), col(target, n - 1)),
    }
}

fn paired_differences(r: &[f64], q: &[f64], pattern: Pattern, out: &mut Vec<f64>) {
    out.clear();
    let n = r.len();
    match pattern {
        Pattern::Straight => out.extend((0..n).map(|i| r[i] - q[i])),
        Pattern::DiagonalDown => out.extend((0..n - 1).map(|i| r[i] - q[i + 1])),
        Pattern::DiagonalUp => out.extend((0..n - 1).map(|i| r[i + 1] - q[i])),
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Projects `estimate` onto `[lo, hi]`; returns the value and whether it moved.
/// An inverted interval (only possible for a plane that no valid image
/// produces) maps to its midpoint.
pub(crate) fn project(estimate: f64, lo: f64, hi: f64) -> (f64, bool) {
    if lo > hi {
        (0.5 * (lo + hi), true)
    } else if estimate < lo {
        (lo, true)
    } else if estimate > hi {
        (hi, true)
    } else {
        (estimate, false)
    }
}

/// Scan engine over one DC-free plane.
///
/// Pattern selection only looks at variances of boundary differences, which
/// do not depend on the reference block's DC, so the prediction from a
/// neighbour is always `DC(reference) + offset` with an offset fixed by the
/// AC content alone. Those offsets are computed once here, which makes each
/// scan `O(M_B)` and repeated scans (the FRM search) cheap.
#[derive(Clone, Debug)]
pub struct Scanner<'a> {
    plane: &'a DcFreePlane,
    rule: PredictionRule,
    // Offset for predicting block b from its neighbour on the given side;
    // NaN where that neighbour does not exist.
    from_above: Vec<f64>,
    from_below: Vec<f64>,
    starts_left: Vec<f64>,
    from_right: Vec<f64>,
}

impl<'a> Scanner<'a> {
    pub fn new(plane: &'a DcFreePlane) -> Self {
        Self::with_rule(plane, PredictionRule::default())
    }

    pub fn with_rule(plane: &'a DcFreePlane, rule: PredictionRule) -> Self {
        let grid = plane.grid();
        let n = grid.n;
        let blocks: Vec<Vec<f64>> = (0..grid.rows)
            .flat_map(|row| (0..grid.cols).map(move |col| (row, col)))
            .map(|(row, col)| plane.block(row, col))
            .collect();
        let m = grid.block_count();
        let mut from_above = vec![f64::NAN; m];
        let mut from_below = vec![f64::NAN; m];
        let mut starts_left = vec![f64::NAN; m];
        let mut from_right = vec![f64::NAN; m];
        let offset = |reference: usize, target: usize, side: Side| {
            predict_dc_detailed(&blocks[reference], &blocks[target], side, n, rule).estimate
        };
        for row in 0..grid.rows {
            for col in 0..grid.cols {
                let b = grid.index(row, col);
                if row > 0 {
                    from_above[b] = offset(grid.index(row - 1, col), b, Side::Above);
                }
                if row + 1 < grid.rows {
                    from_below[b] = offset(grid.index(row + 1, col), b, Side::Below);
                }
                if col > 0 {
                    starts_left[b] = offset(grid.index(row, col - 1), b, Side::Left);
                }
                if col + 1 < grid.cols {
                    from_right[b] = offset(grid.index(row, col + 1), b, Side::Right);
                }
            }
        }
        Self { plane, rule, from_above, from_below, starts_left, from_right }
    }

    pub fn plane(&self) -> &DcFreePlane {
        self.plane
    }

    pub fn rule(&self) -> PredictionRule {
        self.rule
    }

    /// Runs one scan from `corner` with the corner block's DC set to `dc0`.
    /// With `bounds` present every estimate (the corner's included) is
    /// projected onto its valid interval.
    pub fn estimate(&self, corner: Corner, dc0: f64, bounds: Option<&DcBounds>) -> Result<(DcPlane, FlowStats)> {
        let grid = self.plane.grid();
        if let Some(b) = bounds {
            if b.grid() != grid {
                return Err(Error::Dimension(format!(
                    "bounds grid {:?} does not match plane grid {:?}",
                    b.grid(),
                    grid
                )));
            }
        }
        let (horizontal, vertical) = match corner {
            Corner::TopLeft => (&self.starts_left, &self.from_above),
            Corner::TopRight => (&self.from_right, &self.from_above),
            Corner::BottomLeft => (&self.starts_left, &self.from_below),
            Corner::BottomRight => (&self.from_right, &self.from_below),
        };
        let mut values = vec![0.0; grid.block_count()];
        let mut clamped = 0;
        for i in 0..grid.rows {
            let row = corner.row_at(grid, i);
            for j in 0..grid.cols {
                let col = corner.col_at(grid, j);
                let b = grid.index(row, col);
                let mut estimate = if i == 0 && j == 0 {
                    dc0
                } else {
                    let mut sum = 0.0;
                    let mut count = 0.0;
                    if j > 0 {
                        sum += values[grid.index(row, corner.col_at(grid, j - 1))] + horizontal[b];
                        count += 1.0;
                    }
                    if i > 0 {
                        sum += values[grid.index(corner.row_at(grid, i - 1), col)] + vertical[b];
                        count += 1.0;
                    }
                    sum / count
                };
                if let Some(bounds) = bounds {
                    let (lo, hi) = bounds.interval(b);
                    let (projected, moved) = project(estimate, lo, hi);
                    estimate = projected;
                    clamped += usize::from(moved);
                }
                values[b] = estimate;
            }
        }
        Ok((DcPlane { grid, values }, FlowStats::new(clamped, grid.block_count())))
    }
}

/// One scan of `plane` from `corner` (see [`Scanner::estimate`]).
pub fn estimate_plane(
    plane: &DcFreePlane,
    corner: Corner,
    dc0: f64,
    bounds: Option<&DcBounds>,
) -> Result<(DcPlane, FlowStats)> {
    Scanner::new(plane).estimate(corner, dc0, bounds)
}
