//! Seeded generator of piecewise-smooth grayscale test images.
//!
//! A smooth background (tilted plane plus low-frequency ripples) overlaid
//! with shaded ellipses and rectangles and a little noise. Useful when no
//! natural corpus is at hand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blockdct::{PixelImage, PixelRange};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthParams {
    pub width: usize,
    pub height: usize,
    pub shapes: usize,
    /// Amplitude of the uniform pixel noise.
    pub noise: f64,
}

impl SynthParams {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, shapes: 6, noise: 2.0 }
    }
}

enum Shape {
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Shape {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Ellipse { cx, cy, rx, ry } => ((x - cx) / rx).powi(2) + ((y - cy) / ry).powi(2) <= 1.0,
            Shape::Rect { x0, y0, x1, y1 } => x >= x0 && x < x1 && y >= y0 && y < y1,
        }
    }
}

/// Deterministic image for `seed`; values stay inside `[0, 255]`.
pub fn piecewise_smooth(params: SynthParams, seed: u64) -> PixelImage {
    let SynthParams { width, height, shapes, noise } = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);

    let base = rng.gen_range(70.0..180.0);
    let (gx, gy) = (rng.gen_range(-40.0..40.0) / w, rng.gen_range(-40.0..40.0) / h);
    let (fx, fy) = (rng.gen_range(1.0..4.0) / w, rng.gen_range(1.0..4.0) / h);
    let ripple = rng.gen_range(5.0..25.0);

    let layers: Vec<(Shape, f64, f64, f64)> = (0..shapes)
        .map(|_| {
            let shape = if rng.gen_bool(0.5) {
                Shape::Ellipse {
                    cx: rng.gen_range(0.0..w),
                    cy: rng.gen_range(0.0..h),
                    rx: rng.gen_range(0.05..0.3) * w,
                    ry: rng.gen_range(0.05..0.3) * h,
                }
            } else {
                let (x0, y0) = (rng.gen_range(0.0..w), rng.gen_range(0.0..h));
                Shape::Rect { x0, y0, x1: x0 + rng.gen_range(0.1..0.4) * w, y1: y0 + rng.gen_range(0.1..0.4) * h }
            };
            let level = rng.gen_range(-60.0..60.0);
            (shape, level, rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2))
        })
        .collect();

    let mut data = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let mut v = base
                + gx * xf
                + gy * yf
                + ripple * (std::f64::consts::TAU * fx * xf).sin() * (std::f64::consts::TAU * fy * yf).cos();
            for (shape, level, sx, sy) in &layers {
                if shape.contains(xf, yf) {
                    v += level + sx * (xf - w / 2.0) + sy * (yf - h / 2.0);
                }
            }
            v += rng.gen_range(-noise..=noise);
            data.push(v.round().clamp(0.0, 255.0) as i32);
        }
    }
    PixelImage::new(width, height, data, PixelRange::default()).expect("clamped into range")
}
