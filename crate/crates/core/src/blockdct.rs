//! Orthonormal block DCT, DC stripping and re-application, and the per-block
//! valid DC interval.
//!
//! With the orthonormal DCT-II the (0,0) coefficient of an `N x N` block is
//! `N * mean(block)`, so setting the DC of block `B` to `d` is the same as
//! `B - mean(B) + d / N` in the pixel domain. Every operation here works in
//! `f64`; the only place values are rounded is [`finalize`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scan::DcPlane;

/// Default block side length.
pub const DEFAULT_BLOCK_SIZE: usize = 8;

/// Valid pixel interval `[t_min, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelRange {
    pub t_min: i32,
    pub t_max: i32,
}

impl PixelRange {
    pub fn new(t_min: i32, t_max: i32) -> Result<Self> {
        if t_min >= t_max {
            return Err(Error::InvalidValue(format!("pixel range requires t_min < t_max, got [{t_min}, {t_max}]")));
        }
        Ok(Self { t_min, t_max })
    }

    /// `t_max - t_min`, the peak value used by PSNR and SSIM.
    pub fn span(&self) -> f64 {
        f64::from(self.t_max) - f64::from(self.t_min)
    }

    pub fn lo(&self) -> f64 {
        f64::from(self.t_min)
    }

    pub fn hi(&self) -> f64 {
        f64::from(self.t_max)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo() + self.hi())
    }
}

impl Default for PixelRange {
    fn default() -> Self {
        Self { t_min: 0, t_max: 255 }
    }
}

/// Integer grayscale raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PixelImage {
    width: usize,
    height: usize,
    data: Vec<i32>,
    range: PixelRange,
}

impl PixelImage {
    pub fn new(width: usize, height: usize, data: Vec<i32>, range: PixelRange) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{}x{} image needs {} samples, got {}",
                width,
                height,
                width * height,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v < range.t_min || v > range.t_max) {
            return Err(Error::InvalidValue(format!("pixel value {v} outside [{}, {}]", range.t_min, range.t_max)));
        }
        Ok(Self { width, height, data, range })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: i32, range: PixelRange) -> Result<Self> {
        Self::new(width, height, vec![value; width * height], range)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn range(&self) -> PixelRange {
        self.range
    }

    pub fn data(&self) -> &[i32] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> i32 {
        self.data[y * self.width + x]
    }

    pub fn to_real(&self) -> RealImage {
        RealImage { width: self.width, height: self.height, data: self.data.iter().map(|&v| f64::from(v)).collect() }
    }
}

/// Real-valued raster, row-major. Used for unclamped reconstructions.
#[derive(Clone, Debug, PartialEq)]
pub struct RealImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl RealImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{}x{} image needs {} samples, got {}",
                width,
                height,
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![0.0; width * height] }
    }

    /// `(min, max)` over all samples.
    pub fn value_range(&self) -> (f64, f64) {
        self.data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Number of samples outside `[lo - tol, hi + tol]`.
    pub fn count_outside(&self, range: PixelRange, tol: f64) -> usize {
        let (lo, hi) = (range.lo() - tol, range.hi() + tol);
        self.data.iter().filter(|&&v| v < lo || v > hi).count()
    }
}

/// Partition of an image into `rows x cols` blocks of side `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    pub n: usize,
    pub cols: usize,
    pub rows: usize,
}

impl BlockGrid {
    /// Grid covering a `width x height` image. Both dimensions must be
    /// non-zero multiples of `n`.
    pub fn for_image(width: usize, height: usize, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidValue(format!("block size must be >= 2, got {n}")));
        }
        if width == 0 || height == 0 || !width.is_multiple_of(n) || !height.is_multiple_of(n) {
            return Err(Error::Dimension(format!(
                "{width}x{height} is not a non-empty multiple of the {n}x{n} block size"
            )));
        }
        Ok(Self { n, cols: width / n, rows: height / n })
    }

    /// Total number of blocks `M_B`.
    pub fn block_count(&self) -> usize {
        self.cols * self.rows
    }

    pub fn width(&self) -> usize {
        self.cols * self.n
    }

    pub fn height(&self) -> usize {
        self.rows * self.n
    }

    /// Row-major block index.
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }
}

/// Orthonormal `N x N` DCT-II computed by separable multiplication with a
/// precomputed basis matrix.
#[derive(Clone, Debug)]
pub struct BlockDct {
    n: usize,
    // basis[k * n + i] = alpha(k) * cos(pi * (2i + 1) * k / 2n)
    basis: Vec<f64>,
}

impl BlockDct {
    pub fn new(n: usize) -> Self {
        let mut basis = vec![0.0; n * n];
        let nf = n as f64;
        for k in 0..n {
            let alpha = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
            for i in 0..n {
                basis[k * n + i] = alpha * (PI * (2 * i + 1) as f64 * k as f64 / (2.0 * nf)).cos();
            }
        }
        Self { n, basis }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Forward transform of a row-major block: `C * B * C^T`.
    pub fn forward(&self, block: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(block.len(), n * n, "block must have N*N samples");
        let c = &self.basis;
        let mut tmp = vec![0.0; n * n];
        for k in 0..n {
            for j in 0..n {
                tmp[k * n + j] = (0..n).map(|i| c[k * n + i] * block[i * n + j]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                out[k * n + l] = (0..n).map(|j| tmp[k * n + j] * c[l * n + j]).sum();
            }
        }
        out
    }

    /// Inverse transform: `C^T * X * C`.
    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(coeffs.len(), n * n, "block must have N*N coefficients");
        let c = &self.basis;
        let mut tmp = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                tmp[i * n + l] = (0..n).map(|k| c[k * n + i] * coeffs[k * n + l]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|l| tmp[i * n + l] * c[l * n + j]).sum();
            }
        }
        out
    }
}

/// Forward DCT of a single `n x n` block.
pub fn forward_block(block: &[f64], n: usize) -> Vec<f64> {
    BlockDct::new(n).forward(block)
}

/// Inverse DCT of a single `n x n` coefficient block.
pub fn inverse_block(coeffs: &[f64], n: usize) -> Vec<f64> {
    BlockDct::new(n).inverse(coeffs)
}

/// Per-block DCT coefficients. Blocks are stored row-major, and each block's
/// `N^2` coefficients are contiguous and row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientPlane {
    pub grid: BlockGrid,
    pub coeffs: Vec<f64>,
}

impl CoefficientPlane {
    pub fn new(grid: BlockGrid, coeffs: Vec<f64>) -> Result<Self> {
        let expected = grid.block_count() * grid.n * grid.n;
        if coeffs.len() != expected {
            return Err(Error::Dimension(format!("coefficient plane needs {expected} values, got {}", coeffs.len())));
        }
        Ok(Self { grid, coeffs })
    }

    /// Forward-transforms every block of `image`.
    pub fn from_image(image: &PixelImage, n: usize) -> Result<Self> {
        let grid = BlockGrid::for_image(image.width(), image.height(), n)?;
        let real = image.to_real();
        let dct = BlockDct::new(n);
        let mut coeffs = Vec::with_capacity(real.data.len());
        for row in 0..grid.rows {
            for col in 0..grid.cols {
                coeffs.extend(dct.forward(&read_block(&real.data, grid, row, col)));
            }
        }
        Ok(Self { grid, coeffs })
    }

    pub fn block(&self, index: usize) -> &[f64] {
        let nn = self.grid.n * self.grid.n;
        &self.coeffs[index * nn..(index + 1) * nn]
    }

    pub fn dc(&self, index: usize) -> f64 {
        self.coeffs[index * self.grid.n * self.grid.n]
    }

    /// The DC coefficient of every block.
    pub fn dc_plane(&self) -> DcPlane {
        let values = (0..self.grid.block_count()).map(|b| self.dc(b)).collect();
        DcPlane::new(self.grid, values).expect("grid-sized")
    }

    /// Copy with every DC coefficient set to exactly `0.0`.
    pub fn without_dc(&self) -> Self {
        let mut out = self.clone();
        let nn = self.grid.n * self.grid.n;
        for b in 0..self.grid.block_count() {
            out.coeffs[b * nn] = 0.0;
        }
        out
    }

    pub fn is_dc_free(&self) -> bool {
        (0..self.grid.block_count()).all(|b| self.dc(b) == 0.0)
    }
}

/// Spatial-domain image whose every block has zero mean: the AC content only.
#[derive(Clone, Debug, PartialEq)]
pub struct DcFreePlane {
    grid: BlockGrid,
    range: PixelRange,
    data: Vec<f64>,
}

impl DcFreePlane {
    /// Wraps raw samples, checking that every block mean is zero within
    /// `1e-9` (scaled by the sample magnitude).
    pub fn new(grid: BlockGrid, range: PixelRange, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.width() * grid.height() {
            return Err(Error::Dimension(format!(
                "plane needs {} samples, got {}",
                grid.width() * grid.height(),
                data.len()
            )));
        }
        let plane = Self { grid, range, data };
        for row in 0..grid.rows {
            for col in 0..grid.cols {
                let block = plane.block(row, col);
                let scale = block.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                let mean = block.iter().sum::<f64>() / block.len() as f64;
                if mean.abs() > 1e-9 * scale {
                    return Err(Error::InvalidValue(format!("block ({row}, {col}) has mean {mean}, expected 0")));
                }
            }
        }
        Ok(plane)
    }

    /// Inverse-transforms a plane whose DC coefficients are all zero.
    pub fn from_coefficients(coeffs: &CoefficientPlane, range: PixelRange) -> Result<Self> {
        if !coeffs.is_dc_free() {
            return Err(Error::InvalidValue("coefficient plane has non-zero DC terms".into()));
        }
        let grid = coeffs.grid;
        let dct = BlockDct::new(grid.n);
        let mut data = vec![0.0; grid.width() * grid.height()];
        for row in 0..grid.rows {
            for col in 0..grid.cols {
                let block = dct.inverse(coeffs.block(grid.index(row, col)));
                write_block(&mut data, grid, row, col, &block);
            }
        }
        Self::new(grid, range, data)
    }

    /// Forward transform of every block, DC terms forced to exactly zero.
    pub fn to_coefficients(&self) -> CoefficientPlane {
        let dct = BlockDct::new(self.grid.n);
        let mut coeffs = Vec::with_capacity(self.data.len());
        for row in 0..self.grid.rows {
            for col in 0..self.grid.cols {
                let mut block = dct.forward(&self.block(row, col));
                block[0] = 0.0;
                coeffs.extend(block);
            }
        }
        CoefficientPlane { grid: self.grid, coeffs }
    }

    pub fn grid(&self) -> BlockGrid {
        self.grid
    }

    pub fn range(&self) -> PixelRange {
        self.range
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    /// Row-major copy of block `(row, col)`.
    pub fn block(&self, row: usize, col: usize) -> Vec<f64> {
        read_block(&self.data, self.grid, row, col)
    }

    /// `(min, max)` of block `(row, col)`.
    pub fn block_extent(&self, row: usize, col: usize) -> (f64, f64) {
        let n = self.grid.n;
        let w = self.width();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for y in row * n..(row + 1) * n {
            for &v in &self.data[y * w + col * n..y * w + (col + 1) * n] {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }
}

fn read_block(data: &[f64], grid: BlockGrid, row: usize, col: usize) -> Vec<f64> {
    let n = grid.n;
    let w = grid.width();
    let mut out = Vec::with_capacity(n * n);
    for y in row * n..(row + 1) * n {
        out.extend_from_slice(&data[y * w + col * n..y * w + (col + 1) * n]);
    }
    out
}

fn write_block(data: &mut [f64], grid: BlockGrid, row: usize, col: usize, block: &[f64]) {
    let n = grid.n;
    let w = grid.width();
    for (dy, y) in (row * n..(row + 1) * n).enumerate() {
        data[y * w + col * n..y * w + (col + 1) * n].copy_from_slice(&block[dy * n..(dy + 1) * n]);
    }
}

/// Removes the mean of every block of `image`.
pub fn strip_dc(image: &PixelImage, n: usize) -> Result<DcFreePlane> {
    let grid = BlockGrid::for_image(image.width(), image.height(), n)?;
    let mut data = image.to_real().data;
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let mut block = read_block(&data, grid, row, col);
            let mean = block.iter().sum::<f64>() / block.len() as f64;
            block.iter_mut().for_each(|v| *v -= mean);
            write_block(&mut data, grid, row, col, &block);
        }
    }
    Ok(DcFreePlane { grid, range: image.range(), data })
}

/// True DC coefficient (`N * mean`) of every block of `image`.
pub fn true_dcs(image: &PixelImage, n: usize) -> Result<DcPlane> {
    let grid = BlockGrid::for_image(image.width(), image.height(), n)?;
    let real = image.to_real();
    let values = (0..grid.rows)
        .flat_map(|row| (0..grid.cols).map(move |col| (row, col)))
        .map(|(row, col)| {
            let block = read_block(&real.data, grid, row, col);
            n as f64 * block.iter().sum::<f64>() / block.len() as f64
        })
        .collect();
    DcPlane::new(grid, values)
}

/// Adds `d / N` to every pixel of each block. No clamping.
pub fn apply_dc(plane: &DcFreePlane, dcs: &DcPlane) -> Result<RealImage> {
    let grid = plane.grid;
    if dcs.grid() != grid {
        return Err(Error::Dimension(format!("DC grid {:?} does not match plane grid {:?}", dcs.grid(), grid)));
    }
    let n = grid.n;
    let w = grid.width();
    let mut data = plane.data.clone();
    for (y, line) in data.chunks_mut(w).enumerate() {
        let row = y / n;
        for (x, v) in line.iter_mut().enumerate() {
            *v += dcs.get(row, x / n) / n as f64;
        }
    }
    RealImage::new(w, grid.height(), data)
}

/// Per-block interval of DC values that keep every pixel inside the range.
#[derive(Clone, Debug, PartialEq)]
pub struct DcBounds {
    grid: BlockGrid,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl DcBounds {
    pub fn from_intervals(grid: BlockGrid, intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.len() != grid.block_count() {
            return Err(Error::Dimension(format!(
                "bounds need {} intervals, got {}",
                grid.block_count(),
                intervals.len()
            )));
        }
        let (lo, hi) = intervals.into_iter().unzip();
        Ok(Self { grid, lo, hi })
    }

    pub fn grid(&self) -> BlockGrid {
        self.grid
    }

    /// `[d_min, d_max]` of block `index` (row-major).
    pub fn interval(&self, index: usize) -> (f64, f64) {
        (self.lo[index], self.hi[index])
    }

    pub fn get(&self, row: usize, col: usize) -> (f64, f64) {
        self.interval(self.grid.index(row, col))
    }
}

/// `d_min = N (t_min - min B0)`, `d_max = N (t_max - max B0)` for every block.
pub fn dc_bounds(plane: &DcFreePlane) -> DcBounds {
    let grid = plane.grid;
    let nf = grid.n as f64;
    let range = plane.range;
    let mut lo = Vec::with_capacity(grid.block_count());
    let mut hi = Vec::with_capacity(grid.block_count());
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let (bmin, bmax) = plane.block_extent(row, col);
            lo.push(nf * (range.lo() - bmin));
            hi.push(nf * (range.hi() - bmax));
        }
    }
    DcBounds { grid, lo, hi }
}

/// Rounds half away from zero, then clamps into `range`.
pub fn finalize(image: &RealImage, range: PixelRange) -> PixelImage {
    let (lo, hi) = (range.lo(), range.hi());
    let data = image.data.iter().map(|&v| v.round().clamp(lo, hi) as i32).collect();
    PixelImage { width: image.width, height: image.height, data, range }
}
