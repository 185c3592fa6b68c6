//! Baseline recovery: unbounded relative scans, a global brightness
//! adjustment per scan, four-corner averaging and a final range fix-up.

use rayon::prelude::*;

use crate::blockdct::{apply_dc, dc_bounds, finalize, DcBounds, DcFreePlane, PixelImage, PixelRange, RealImage};
use crate::error::{Error, Result};
use crate::scan::{Corner, DcPlane, Scanner};

/// Per-block and global brightness-adjustment intervals, in intensity units.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjustRange {
    /// `[(d_min - DC*) / N, (d_max - DC*) / N]` for every block.
    pub per_block: Vec<(f64, f64)>,
    /// Largest lower end.
    pub lo: f64,
    /// Smallest upper end. May be below `lo`.
    pub hi: f64,
}

impl AdjustRange {
    pub fn compute(dcs: &DcPlane, bounds: &DcBounds) -> Result<Self> {
        let grid = dcs.grid();
        if bounds.grid() != grid {
            return Err(Error::Dimension(format!("bounds grid {:?} does not match DC grid {:?}", bounds.grid(), grid)));
        }
        let nf = grid.n as f64;
        let per_block: Vec<(f64, f64)> = dcs
            .values()
            .iter()
            .enumerate()
            .map(|(b, &dc)| {
                let (lo, hi) = bounds.interval(b);
                ((lo - dc) / nf, (hi - dc) / nf)
            })
            .collect();
        let lo = per_block.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let hi = per_block.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        Ok(Self { per_block, lo, hi })
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Midpoint of the global interval, used even when it is empty.
    pub fn shift(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Brightness shift (intensity units) applied to a relative scan.
pub fn global_adjustment(dcs: &DcPlane, bounds: &DcBounds) -> Result<f64> {
    Ok(AdjustRange::compute(dcs, bounds)?.shift())
}

/// Rescales when the dynamic range is too wide, otherwise shifts by the
/// smallest amount that brings every value into `range`.
pub fn postprocess(image: &RealImage, range: PixelRange) -> RealImage {
    let (min, max) = image.value_range();
    let (t_min, t_max) = (range.lo(), range.hi());
    let data = if max - min > range.span() {
        let scale = range.span() / (max - min);
        image.data.iter().map(|v| t_min + (v - min) * scale).collect()
    } else {
        let shift = if min < t_min {
            t_min - min
        } else if max > t_max {
            t_max - max
        } else {
            0.0
        };
        if shift == 0.0 {
            image.data.clone()
        } else {
            image.data.iter().map(|v| v + shift).collect()
        }
    };
    RealImage { width: image.width, height: image.height, data }
}

/// Pixel-wise mean of equally sized images, summed in the given order.
pub fn average_images(images: &[&RealImage]) -> Result<RealImage> {
    let first = images.first().ok_or_else(|| Error::InvalidValue("nothing to average".into()))?;
    let mut acc = RealImage::zeros(first.width, first.height);
    for img in images {
        if img.width != first.width || img.height != first.height {
            return Err(Error::Dimension("averaged images differ in size".into()));
        }
        acc.data.iter_mut().zip(&img.data).for_each(|(a, v)| *a += v);
    }
    let k = images.len() as f64;
    acc.data.iter_mut().for_each(|a| *a /= k);
    Ok(acc)
}

/// One corner's contribution to the USO result.
#[derive(Clone, Debug)]
pub struct UsoScan {
    pub corner: Corner,
    /// Relative DCs from the unbounded scan (corner block at 0).
    pub relative: DcPlane,
    pub adjust: AdjustRange,
    /// Relative DCs after the global shift.
    pub adjusted: DcPlane,
    /// Reconstruction after the shift; may leave the pixel range.
    pub image: RealImage,
}

impl UsoScan {
    pub fn raw_range(&self) -> (f64, f64) {
        self.image.value_range()
    }

    /// Fraction of blocks whose adjusted DC lies outside its valid interval.
    pub fn out_of_bounds_rate(&self, bounds: &DcBounds) -> f64 {
        let values = self.adjusted.values();
        let outside = values
            .iter()
            .enumerate()
            .filter(|&(b, &d)| {
                let (lo, hi) = bounds.interval(b);
                d < lo || d > hi
            })
            .count();
        outside as f64 / values.len() as f64
    }
}

/// Everything produced along the way by [`recover_uso_detailed`].
#[derive(Clone, Debug)]
pub struct UsoReport {
    pub scans: Vec<UsoScan>,
    pub bounds: DcBounds,
    pub averaged: RealImage,
    pub postprocessed: RealImage,
    pub output: PixelImage,
}

/// Runs the four scans and returns the intermediate images with the result.
pub fn recover_uso_detailed(plane: &DcFreePlane) -> Result<UsoReport> {
    let scanner = Scanner::new(plane);
    let bounds = dc_bounds(plane);
    let nf = plane.grid().n as f64;
    let scans = Corner::ALL
        .par_iter()
        .map(|&corner| {
            let (relative, _) = scanner.estimate(corner, 0.0, None)?;
            let adjust = AdjustRange::compute(&relative, &bounds)?;
            let adjusted = relative.shifted(adjust.shift() * nf);
            let image = apply_dc(plane, &adjusted)?;
            Ok(UsoScan { corner, relative, adjust, adjusted, image })
        })
        .collect::<Result<Vec<_>>>()?;
    let averaged = average_images(&scans.iter().map(|s| &s.image).collect::<Vec<_>>())?;
    let postprocessed = postprocess(&averaged, plane.range());
    let output = finalize(&postprocessed, plane.range());
    Ok(UsoReport { scans, bounds, averaged, postprocessed, output })
}

/// Recovers an image from its DC-free plane with the baseline method.
pub fn recover_uso(plane: &DcFreePlane) -> Result<PixelImage> {
    Ok(recover_uso_detailed(plane)?.output)
}
