//! Remove the DC of every block and show how far each block's DC can move
//! before its pixels leave the valid range.
//!
//! Usage: `cargo run --example strip_and_bounds [image.pgm]`

use dc_recovery::blockdct::true_dcs;
use dc_recovery::io::load_pgm;
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::{dc_bounds, strip_dc};

fn main() -> dc_recovery::Result<()> {
    let image = match std::env::args().nth(1) {
        Some(path) => load_pgm(path, 8)?,
        None => piecewise_smooth(SynthParams::new(128, 96), 1),
    };
    let plane = strip_dc(&image, 8)?;
    let bounds = dc_bounds(&plane);
    let truth = true_dcs(&image, 8)?;
    let grid = plane.grid();

    let widths: Vec<f64> = (0..grid.block_count())
        .map(|i| {
            let (lo, hi) = bounds.interval(i);
            hi - lo
        })
        .collect();
    let mean_width = widths.iter().sum::<f64>() / widths.len() as f64;
    println!("{}x{} image, {} blocks", image.width(), image.height(), grid.block_count());
    println!("mean DC interval width {mean_width:.1} (full range {})", 8.0 * image.range().span());

    println!("{:>8} {:>10} {:>10} {:>10}", "block", "d_min", "true DC", "d_max");
    for (row, col) in [(0, 0), (0, grid.cols - 1), (grid.rows / 2, grid.cols / 2), (grid.rows - 1, 0)] {
        let (lo, hi) = bounds.get(row, col);
        println!("{:>8} {lo:>10.2} {:>10.2} {hi:>10.2}", format!("({row},{col})"), truth.get(row, col));
    }
    Ok(())
}
