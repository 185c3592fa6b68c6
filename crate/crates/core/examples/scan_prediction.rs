//! Predict the DC of one block from its left neighbour, then run a full scan
//! from the top-left corner seeded with the true corner DC.

use dc_recovery::blockdct::true_dcs;
use dc_recovery::scan::{estimate_plane, predict_dc_detailed, PredictionRule, Side};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::{dc_bounds, strip_dc, Corner};

fn main() -> dc_recovery::Result<()> {
    let image = piecewise_smooth(SynthParams::new(96, 64), 4);
    let plane = strip_dc(&image, 8)?;
    let truth = true_dcs(&image, 8)?;

    // The reference block carries its true DC; the target is DC-free.
    let reference: Vec<f64> = plane.block(2, 3).iter().map(|v| v + truth.get(2, 3) / 8.0).collect();
    let target = plane.block(2, 4);
    for rule in [PredictionRule::Mean, PredictionRule::Median] {
        let p = predict_dc_detailed(&reference, &target, Side::Left, 8, rule);
        println!(
            "{rule:?}: pattern {:?}, scores {:.2?}, estimate {:.2} (true {:.2})",
            p.pattern,
            p.scores,
            p.estimate,
            truth.get(2, 4)
        );
    }

    let bounds = dc_bounds(&plane);
    let dc0 = truth.get(0, 0);
    for (label, b) in [("free", None), ("bounded", Some(&bounds))] {
        let (dcs, flow) = estimate_plane(&plane, Corner::TopLeft, dc0, b)?;
        let err = dcs.values().iter().zip(truth.values()).map(|(a, t)| (a - t).abs()).sum::<f64>()
            / dcs.values().len() as f64;
        println!("{label:>8} scan: mean |DC error| {err:.2}, clamped {} of {}", flow.clamped_blocks, flow.total_blocks);
    }
    Ok(())
}
