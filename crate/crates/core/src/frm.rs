//! Under/over-flow rate minimization.
//!
//! Each scan runs with in-scan bounding, so its reconstruction never leaves
//! the pixel range; what remains unknown is the corner block's DC. The
//! fraction of blocks that needed projection during the scan (the flow
//! rate) tends to be smallest when that DC is close to the truth, so the
//! corner DC is chosen by minimizing the flow rate over the corner block's
//! valid interval, either on a full grid of step `delta` or with a
//! three-point bracket that halves the interval each round.
//!
//! When several evaluated points share the minimal rate, the chosen value
//! is the midpoint between the leftmost and rightmost of them.

use rayon::prelude::*;

use crate::blockdct::{apply_dc, dc_bounds, finalize, DcBounds, DcFreePlane, PixelImage, RealImage};
use crate::error::{Error, Result};
use crate::scan::{Corner, DcPlane, FlowStats, PredictionRule, Scanner};
use crate::uso::average_images;

/// Default grid step, in DC units.
pub const DEFAULT_DELTA: f64 = 1.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    #[default]
    Exhaustive,
    Bracket,
}

impl SearchMode {
    pub fn label(self) -> &'static str {
        match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Bracket => "bracket",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Step size in DC units; must be positive.
    pub delta: f64,
    pub mode: SearchMode,
    /// Corners whose scans are searched and averaged.
    pub corners: Vec<Corner>,
    pub rule: PredictionRule,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, delta: f64) -> Self {
        Self { delta, mode, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidValue(format!("delta must be positive, got {}", self.delta)));
        }
        if self.corners.is_empty() {
            return Err(Error::InvalidValue("at least one corner must be enabled".into()));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            delta: DEFAULT_DELTA,
            mode: SearchMode::Exhaustive,
            corners: Corner::ALL.to_vec(),
            rule: PredictionRule::Mean,
        }
    }
}

/// Record of one corner-DC search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    /// Searched interval.
    pub interval: (f64, f64),
    /// `(dc0, rate)` in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
    /// Leftmost and rightmost evaluated minimizers.
    pub tie: (f64, f64),
    /// Minimal evaluated rate.
    pub min_rate: f64,
    /// Midpoint of `tie`.
    pub chosen: f64,
    /// Rate at `chosen` (re-evaluated, not counted in `evaluations`).
    pub chosen_rate: f64,
}

impl SearchTrace {
    fn from_evaluations(
        interval: (f64, f64),
        evaluations: Vec<(f64, f64)>,
        mut objective: impl FnMut(f64) -> f64,
    ) -> Self {
        let min_rate = evaluations.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
        let (left, right) = evaluations
            .iter()
            .filter(|e| e.1 == min_rate)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, r), e| (l.min(e.0), r.max(e.0)));
        let chosen = 0.5 * (left + right);
        let chosen_rate = evaluations.iter().find(|e| e.0 == chosen).map_or_else(|| objective(chosen), |e| e.1);
        Self { interval, evaluations, tie: (left, right), min_rate, chosen, chosen_rate }
    }
}

/// Grid `{lo, lo + delta, ...} ∪ {hi}` over `[lo, hi]`.
pub fn grid_candidates(lo: f64, hi: f64, delta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = lo + k as f64 * delta;
        if v >= hi {
            break;
        }
        out.push(v);
        k += 1;
    }
    out.push(hi);
    out
}

/// Evaluates `objective` on every grid point of `[lo, hi]`.
pub fn minimize_grid<F>(lo: f64, hi: f64, delta: f64, objective: F) -> Result<SearchTrace>
where
    F: Fn(f64) -> f64 + Sync,
{
    check_interval(lo, hi, delta)?;
    let evaluations: Vec<(f64, f64)> =
        grid_candidates(lo, hi, delta).into_par_iter().map(|x| (x, objective(x))).collect();
    Ok(SearchTrace::from_evaluations((lo, hi), evaluations, &objective))
}

/// Three-point bracketing: evaluate both ends and the midpoint, keep the
/// half on the side of the smaller end value (left on ties), and repeat
/// until the bracket is no wider than `delta`.
pub fn minimize_bracket<F>(lo: f64, hi: f64, delta: f64, mut objective: F) -> Result<SearchTrace>
where
    F: FnMut(f64) -> f64,
{
    check_interval(lo, hi, delta)?;
    let mut evaluations = Vec::new();
    let mut eval = |x: f64, evaluations: &mut Vec<(f64, f64)>| {
        let y = objective(x);
        evaluations.push((x, y));
        y
    };
    let (mut a, mut b) = (lo, hi);
    let mut fa = eval(a, &mut evaluations);
    if b > a {
        let mut fb = eval(b, &mut evaluations);
        loop {
            let m = 0.5 * (a + b);
            let fm = eval(m, &mut evaluations);
            if fb < fa {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            if b - a <= delta {
                break;
            }
        }
    }
    Ok(SearchTrace::from_evaluations((lo, hi), evaluations, objective))
}

/// Upper bound on bracket evaluations for an interval of `width`.
pub fn bracket_budget(width: f64, delta: f64) -> usize {
    let steps = (width / delta).log2().ceil().max(0.0) as usize;
    2 * steps + 3
}

fn check_interval(lo: f64, hi: f64, delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidValue(format!("delta must be positive, got {delta}")));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    Ok(())
}

/// Flow-rate objective for one plane: precomputed scan offsets plus bounds.
#[derive(Clone, Debug)]
pub struct FlowObjective<'a> {
    scanner: Scanner<'a>,
    bounds: DcBounds,
}

impl<'a> FlowObjective<'a> {
    pub fn new(plane: &'a DcFreePlane) -> Self {
        Self::with_rule(plane, PredictionRule::default())
    }

    pub fn with_rule(plane: &'a DcFreePlane, rule: PredictionRule) -> Self {
        Self { scanner: Scanner::with_rule(plane, rule), bounds: dc_bounds(plane) }
    }

    pub fn bounds(&self) -> &DcBounds {
        &self.bounds
    }

    pub fn plane(&self) -> &DcFreePlane {
        self.scanner.plane()
    }

    /// Valid DC interval of the corner block.
    pub fn corner_interval(&self, corner: Corner) -> (f64, f64) {
        let (row, col) = corner.origin(self.plane().grid());
        self.bounds.get(row, col)
    }

    pub fn scan(&self, corner: Corner, dc0: f64) -> (DcPlane, FlowStats) {
        self.scanner.estimate(corner, dc0, Some(&self.bounds)).expect("bounds built from the same plane")
    }

    pub fn rate(&self, corner: Corner, dc0: f64) -> f64 {
        self.scan(corner, dc0).1.rate
    }

    pub fn search_exhaustive(&self, corner: Corner, delta: f64) -> Result<SearchTrace> {
        let (lo, hi) = self.corner_interval(corner);
        minimize_grid(lo, hi, delta, |x| self.rate(corner, x))
    }

    pub fn search_bracket(&self, corner: Corner, delta: f64) -> Result<SearchTrace> {
        let (lo, hi) = self.corner_interval(corner);
        minimize_bracket(lo, hi, delta, |x| self.rate(corner, x))
    }

    pub fn search(&self, corner: Corner, mode: SearchMode, delta: f64) -> Result<SearchTrace> {
        match mode {
            SearchMode::Exhaustive => self.search_exhaustive(corner, delta),
            SearchMode::Bracket => self.search_bracket(corner, delta),
        }
    }
}

/// Flow rate of one bounded scan.
pub fn flow_rate(plane: &DcFreePlane, corner: Corner, dc0: f64, bounds: &DcBounds) -> Result<f64> {
    Ok(Scanner::new(plane).estimate(corner, dc0, Some(bounds))?.1.rate)
}

pub fn search_exhaustive(plane: &DcFreePlane, corner: Corner, delta: f64) -> Result<SearchTrace> {
    FlowObjective::new(plane).search_exhaustive(corner, delta)
}

pub fn search_bracket(plane: &DcFreePlane, corner: Corner, delta: f64) -> Result<SearchTrace> {
    FlowObjective::new(plane).search_bracket(corner, delta)
}

/// One corner's contribution to the FRM result.
#[derive(Clone, Debug)]
pub struct FrmScan {
    pub corner: Corner,
    pub trace: SearchTrace,
    pub dcs: DcPlane,
    pub flow: FlowStats,
    /// Reconstruction before averaging; within the pixel range.
    pub image: RealImage,
}

#[derive(Clone, Debug)]
pub struct FrmReport {
    pub scans: Vec<FrmScan>,
    pub averaged: RealImage,
    pub output: PixelImage,
}

pub fn recover_frm_detailed(plane: &DcFreePlane, cfg: &SearchConfig) -> Result<FrmReport> {
    cfg.validate()?;
    let objective = FlowObjective::with_rule(plane, cfg.rule);
    let scans = cfg
        .corners
        .par_iter()
        .map(|&corner| {
            let trace = objective.search(corner, cfg.mode, cfg.delta)?;
            let (dcs, flow) = objective.scan(corner, trace.chosen);
            let image = apply_dc(plane, &dcs)?;
            Ok(FrmScan { corner, trace, dcs, flow, image })
        })
        .collect::<Result<Vec<_>>>()?;
    let averaged = average_images(&scans.iter().map(|s| &s.image).collect::<Vec<_>>())?;
    let output = finalize(&averaged, plane.range());
    Ok(FrmReport { scans, averaged, output })
}

/// Recovers an image from its DC-free plane by flow-rate minimization.
pub fn recover_frm(plane: &DcFreePlane, cfg: &SearchConfig) -> Result<PixelImage> {
    Ok(recover_frm_detailed(plane, cfg)?.output)
}
