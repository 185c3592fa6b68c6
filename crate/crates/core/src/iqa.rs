//! Full-reference image quality metrics: PSNR, SSIM and MS-SSIM.
//!
//! SSIM follows the usual construction: an 11x11 Gaussian window with
//! sigma 1.5, `K1 = 0.01`, `K2 = 0.03`, dynamic range `L = t_max - t_min`,
//! evaluated at valid window positions only and averaged. MS-SSIM uses five
//! scales with the standard exponents, 2x2 averaging before each dyadic
//! subsampling, contrast-structure terms at the four finer scales and the
//! full SSIM term at the coarsest one.

use crate::blockdct::PixelImage;
use crate::error::{Error, Result};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
/// Smallest side MS-SSIM accepts: one window at the coarsest scale.
pub const MS_SSIM_MIN_SIZE: usize = SSIM_WINDOW << 4;

fn check_pair(a: &PixelImage, b: &PixelImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::Dimension(format!(
            "images differ in size: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB; `+inf` for identical images.
pub fn psnr(reference: &PixelImage, test: &PixelImage) -> Result<f64> {
    check_pair(reference, test)?;
    let sse: f64 = reference
        .data()
        .iter()
        .zip(test.data())
        .map(|(&a, &b)| {
            let d = f64::from(a - b);
            d * d
        })
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / reference.data().len() as f64;
    let peak = reference.range().span();
    Ok(10.0 * (peak * peak / mse).log10())
}

/// Mean SSIM over all valid 11x11 window positions.
pub fn ssim(reference: &PixelImage, test: &PixelImage) -> Result<f64> {
    check_pair(reference, test)?;
    let (w, h) = (reference.width(), reference.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmall { width: w, height: h, min: SSIM_WINDOW });
    }
    let a = Plane::from_image(reference);
    let b = Plane::from_image(test);
    Ok(ssim_terms(&a, &b, reference.range().span()).0)
}

/// Five-scale MS-SSIM.
pub fn ms_ssim(reference: &PixelImage, test: &PixelImage) -> Result<f64> {
    check_pair(reference, test)?;
    let (w, h) = (reference.width(), reference.height());
    if w < MS_SSIM_MIN_SIZE || h < MS_SSIM_MIN_SIZE {
        return Err(Error::TooSmall { width: w, height: h, min: MS_SSIM_MIN_SIZE });
    }
    let peak = reference.range().span();
    let mut a = Plane::from_image(reference);
    let mut b = Plane::from_image(test);
    let mut score = 1.0;
    for (level, &weight) in MS_SSIM_WEIGHTS.iter().enumerate() {
        let (s, cs) = ssim_terms(&a, &b, peak);
        if level + 1 == MS_SSIM_WEIGHTS.len() {
            score *= s.max(0.0).powf(weight);
        } else {
            score *= cs.max(0.0).powf(weight);
            a = a.downsample();
            b = b.downsample();
        }
    }
    Ok(score)
}

#[derive(Clone, Debug)]
struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    fn from_image(img: &PixelImage) -> Self {
        Self { width: img.width(), height: img.height(), data: img.data().iter().map(|&v| f64::from(v)).collect() }
    }

    fn map2(&self, other: &Plane, f: impl Fn(f64, f64) -> f64) -> Plane {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().zip(&other.data).map(|(&x, &y)| f(x, y)).collect(),
        }
    }

    // 2x2 mean then keep every other sample; the last row/column is
    // replicated when a dimension is odd.
    fn downsample(&self) -> Plane {
        let (w, h) = (self.width.div_ceil(2), self.height.div_ceil(2));
        let at = |x: usize, y: usize| self.data[y.min(self.height - 1) * self.width + x.min(self.width - 1)];
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let (x0, y0) = (2 * x, 2 * y);
                data.push(0.25 * (at(x0, y0) + at(x0 + 1, y0) + at(x0, y0 + 1) + at(x0 + 1, y0 + 1)));
            }
        }
        Plane { width: w, height: h, data }
    }

    // Separable Gaussian filter, valid positions only.
    fn filter_valid(&self, kernel: &[f64]) -> Plane {
        let k = kernel.len();
        let ow = self.width + 1 - k;
        let oh = self.height + 1 - k;
        let mut horiz = vec![0.0; ow * self.height];
        for y in 0..self.height {
            let line = &self.data[y * self.width..(y + 1) * self.width];
            for x in 0..ow {
                horiz[y * ow + x] = kernel.iter().zip(&line[x..x + k]).map(|(w, v)| w * v).sum();
            }
        }
        let mut data = vec![0.0; ow * oh];
        for y in 0..oh {
            for x in 0..ow {
                data[y * ow + x] = kernel.iter().enumerate().map(|(i, w)| w * horiz[(y + i) * ow + x]).sum();
            }
        }
        Plane { width: ow, height: oh, data }
    }
}

/// Normalized 1-D Gaussian of length [`SSIM_WINDOW`].
pub fn gaussian_kernel() -> Vec<f64> {
    let c = (SSIM_WINDOW / 2) as f64;
    let raw: Vec<f64> =
        (0..SSIM_WINDOW).map(|i| (-((i as f64 - c).powi(2)) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

// (mean SSIM, mean contrast-structure) over valid windows.
fn ssim_terms(a: &Plane, b: &Plane, peak: f64) -> (f64, f64) {
    let kernel = gaussian_kernel();
    let c1 = (SSIM_K1 * peak).powi(2);
    let c2 = (SSIM_K2 * peak).powi(2);
    let mu_a = a.filter_valid(&kernel);
    let mu_b = b.filter_valid(&kernel);
    let aa = a.map2(a, |x, _| x * x).filter_valid(&kernel);
    let bb = b.map2(b, |x, _| x * x).filter_valid(&kernel);
    let ab = a.map2(b, |x, y| x * y).filter_valid(&kernel);
    let count = mu_a.data.len() as f64;
    let mut ssim_sum = 0.0;
    let mut cs_sum = 0.0;
    for i in 0..mu_a.data.len() {
        let (ma, mb) = (mu_a.data[i], mu_b.data[i]);
        let var_a = aa.data[i] - ma * ma;
        let var_b = bb.data[i] - mb * mb;
        let cov = ab.data[i] - ma * mb;
        let cs = (2.0 * cov + c2) / (var_a + var_b + c2);
        let lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        ssim_sum += lum * cs;
        cs_sum += cs;
    }
    (ssim_sum / count, cs_sum / count)
}

/// The three scores reported for a recovered image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityReport {
    pub psnr: f64,
    pub ssim: f64,
    pub ms_ssim: f64,
}

impl QualityReport {
    pub fn compute(reference: &PixelImage, test: &PixelImage) -> Result<Self> {
        Ok(Self { psnr: psnr(reference, test)?, ssim: ssim(reference, test)?, ms_ssim: ms_ssim(reference, test)? })
    }

    /// `psnr,ssim,ms_ssim` with six decimals; infinite PSNR prints as `inf`.
    pub fn to_csv_line(&self) -> String {
        format!("{},{},{}", format_score(self.psnr), format_score(self.ssim), format_score(self.ms_ssim))
    }
}

/// Fixed six-decimal formatting with `inf`/`-inf`/`nan` tokens.
pub fn format_score(v: f64) -> String {
    if v.is_nan() {
        "nan".to_owned()
    } else if v == f64::INFINITY {
        "inf".to_owned()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        format!("{v:.6}")
    }
}

/// A full-reference metric. Implement this to add scores to the bench.
pub trait QualityMetric: Send + Sync {
    fn name(&self) -> &'static str;
    fn score(&self, reference: &PixelImage, test: &PixelImage) -> Result<f64>;
}

pub struct Psnr;
pub struct Ssim;
pub struct MsSsim;

impl QualityMetric for Psnr {
    fn name(&self) -> &'static str {
        "psnr"
    }
    fn score(&self, reference: &PixelImage, test: &PixelImage) -> Result<f64> {
        psnr(reference, test)
    }
}

impl QualityMetric for Ssim {
    fn name(&self) -> &'static str {
        "ssim"
    }
    fn score(&self, reference: &PixelImage, test: &PixelImage) -> Result<f64> {
        ssim(reference, test)
    }
}

impl QualityMetric for MsSsim {
    fn name(&self) -> &'static str {
        "ms_ssim"
    }
    fn score(&self, reference: &PixelImage, test: &PixelImage) -> Result<f64> {
        ms_ssim(reference, test)
    }
}

/// PSNR, SSIM and MS-SSIM, in report order.
pub fn standard_metrics() -> Vec<Box<dyn QualityMetric>> {
    vec![Box::new(Psnr), Box::new(Ssim), Box::new(MsSsim)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockdct::PixelRange;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(w: usize, h: usize, seed: u64) -> PixelImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..w * h).map(|_| rng.gen_range(0..=255)).collect();
        PixelImage::new(w, h, data, PixelRange::default()).unwrap()
    }

    fn smooth_image(w: usize, h: usize, offset: i32) -> PixelImage {
        let data = (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                let v = 100.0 + 60.0 * (x / 13.0).sin() * (y / 17.0).cos() + offset as f64;
                v.round().clamp(0.0, 255.0) as i32
            })
            .collect();
        PixelImage::new(w, h, data, PixelRange::default()).unwrap()
    }

    #[test]
    fn psnr_closed_form() {
        let a = PixelImage::filled(16, 16, 100, PixelRange::default()).unwrap();
        let b = PixelImage::filled(16, 16, 116, PixelRange::default()).unwrap();
        let expected = 10.0 * (255.0f64 * 255.0 / 256.0).log10();
        assert!((psnr(&a, &b).unwrap() - expected).abs() < 1e-12);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_matches_double_loop() {
        let a = random_image(40, 24, 1);
        let b = random_image(40, 24, 2);
        let mut sse = 0.0;
        for y in 0..24 {
            for x in 0..40 {
                let d = f64::from(a.get(x, y)) - f64::from(b.get(x, y));
                sse += d * d;
            }
        }
        let expected = 10.0 * (255.0f64.powi(2) / (sse / 960.0)).log10();
        assert!((psnr(&a, &b).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn ssim_identity_and_negative() {
        let a = smooth_image(64, 48, 0);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let neg = PixelImage::new(64, 48, a.data().iter().map(|v| 255 - v).collect(), a.range()).unwrap();
        assert!(ssim(&a, &neg).unwrap() < 1.0);
    }

    #[test]
    fn ssim_is_symmetric() {
        let a = random_image(32, 32, 5);
        let b = random_image(32, 32, 6);
        assert_eq!(ssim(&a, &b).unwrap(), ssim(&b, &a).unwrap());
    }

    #[test]
    fn size_errors() {
        let small = random_image(8, 8, 1);
        assert!(matches!(ssim(&small, &small), Err(Error::TooSmall { .. })));
        let mid = random_image(160, 200, 1);
        assert!(matches!(ms_ssim(&mid, &mid), Err(Error::TooSmall { .. })));
        let other = random_image(16, 8, 1);
        assert!(matches!(psnr(&small, &other), Err(Error::Dimension(_))));
    }

    #[test]
    fn ms_ssim_degrades_with_shift() {
        let a = smooth_image(176, 176, 0);
        assert_eq!(ms_ssim(&a, &a).unwrap(), 1.0);
        let scores: Vec<f64> = [5, 15, 40].iter().map(|&s| ms_ssim(&a, &smooth_image(176, 176, s)).unwrap()).collect();
        assert!(scores[0] < 1.0);
        assert!(scores[0] > scores[1] && scores[1] > scores[2], "{scores:?}");
    }

    #[test]
    fn downsample_replicates_odd_edge() {
        let p = Plane { width: 3, height: 1, data: vec![1.0, 3.0, 5.0] };
        let d = p.downsample();
        assert_eq!((d.width, d.height), (2, 1));
        assert_eq!(d.data, vec![2.0, 5.0]);
    }

    #[test]
    fn csv_formatting() {
        let r = QualityReport { psnr: f64::INFINITY, ssim: 1.0, ms_ssim: 1.0 };
        assert_eq!(r.to_csv_line(), "inf,1.000000,1.000000");
    }
}
