//! PSNR, SSIM and MS-SSIM on a few simple degradations.

use dc_recovery::iqa::{format_score, standard_metrics};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::PixelImage;

fn map(img: &PixelImage, f: impl Fn(i32) -> i32) -> PixelImage {
    let data = img.data().iter().map(|&v| f(v).clamp(0, 255)).collect();
    PixelImage::new(img.width(), img.height(), data, img.range()).expect("same shape")
}

fn main() -> dc_recovery::Result<()> {
    let reference = piecewise_smooth(SynthParams::new(256, 256), 3);
    let cases = [
        ("identical", reference.clone()),
        ("+5 levels", map(&reference, |v| v + 5)),
        ("+16 levels", map(&reference, |v| v + 16)),
        ("contrast x0.8", map(&reference, |v| 128 + (v - 128) * 4 / 5)),
        ("negative", map(&reference, |v| 255 - v)),
    ];
    let metrics = standard_metrics();
    print!("{:>14}", "");
    for m in &metrics {
        print!("{:>11}", m.name());
    }
    println!();
    for (label, test) in &cases {
        print!("{label:>14}");
        for m in &metrics {
            print!("{:>11}", format_score(m.score(&reference, test)?));
        }
        println!();
    }
    Ok(())
}
