//! Recovery by flow-rate minimization with bounded scans, compared with the
//! baseline on the same image.
//!
//! Usage: `cargo run --release --example frm_recovery [image.pgm] [out.pgm]`

use dc_recovery::frm::recover_frm_detailed;
use dc_recovery::io::{load_pgm, save_pgm};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::{recover_uso, strip_dc, QualityReport, SearchConfig};

fn main() -> dc_recovery::Result<()> {
    let mut args = std::env::args().skip(1);
    let image = match args.next() {
        Some(path) => load_pgm(path, 8)?,
        None => default_image(),
    };
    let plane = strip_dc(&image, 8)?;
    let report = recover_frm_detailed(&plane, &SearchConfig::default())?;

    for scan in &report.scans {
        let t = &scan.trace;
        println!(
            "{}: interval [{:.0}, {:.0}], ties [{:.0}, {:.0}], dc0 {:.1}, flow rate {:.4}, {} evaluations",
            scan.corner.label(),
            t.interval.0,
            t.interval.1,
            t.tie.0,
            t.tie.1,
            t.chosen,
            scan.flow.rate,
            t.evaluations.len()
        );
    }
    let frm = QualityReport::compute(&image, &report.output)?;
    let uso = QualityReport::compute(&image, &recover_uso(&plane)?)?;
    println!("{:>6} {:>9} {:>8} {:>8}", "", "psnr", "ssim", "ms-ssim");
    for (name, q) in [("uso", uso), ("frm", frm)] {
        println!("{name:>6} {:9.3} {:8.4} {:8.4}", q.psnr, q.ssim, q.ms_ssim);
    }
    if let Some(out) = args.next() {
        save_pgm(out, &report.output)?;
    }
    Ok(())
}

fn default_image() -> dc_recovery::PixelImage {
    let bundled = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/camera_man.pgm");
    load_pgm(bundled, 8).unwrap_or_else(|_| piecewise_smooth(SynthParams::new(256, 192), 2))
}
