//! Baseline recovery: unbounded scans from all four corners, global
//! brightness adjustment, averaging and range post-processing.
//!
//! Usage: `cargo run --example uso_recovery [image.pgm] [out.pgm]`

use dc_recovery::io::{load_pgm, save_pgm};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::uso::recover_uso_detailed;
use dc_recovery::{strip_dc, QualityReport};

fn main() -> dc_recovery::Result<()> {
    let mut args = std::env::args().skip(1);
    let image = match args.next() {
        Some(path) => load_pgm(path, 8)?,
        None => default_image(),
    };
    let plane = strip_dc(&image, 8)?;
    let report = recover_uso_detailed(&plane)?;

    for scan in &report.scans {
        let (lo, hi) = scan.raw_range();
        println!(
            "{}: shift {:8.2}, adjusted range [{lo:7.1}, {hi:7.1}], blocks out of bounds {:.3}",
            scan.corner.label(),
            scan.adjust.shift(),
            scan.out_of_bounds_rate(&report.bounds)
        );
    }
    let (lo, hi) = report.averaged.value_range();
    println!("averaged range [{lo:.1}, {hi:.1}]");
    let q = QualityReport::compute(&image, &report.output)?;
    println!("psnr {:.3} dB, ssim {:.4}, ms-ssim {:.4}", q.psnr, q.ssim, q.ms_ssim);
    if let Some(out) = args.next() {
        save_pgm(out, &report.output)?;
    }
    Ok(())
}

fn default_image() -> dc_recovery::PixelImage {
    let bundled = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/camera_man.pgm");
    load_pgm(bundled, 8).unwrap_or_else(|_| piecewise_smooth(SynthParams::new(256, 192), 2))
}
