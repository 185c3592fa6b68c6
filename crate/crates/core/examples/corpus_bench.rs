//! Run all methods over a directory of PGM images and print the summary.
//!
//! Usage: `cargo run --release --example corpus_bench [corpus-dir] [report.csv]`

use std::path::PathBuf;

use dc_recovery::bench::{run_bench, write_outputs, BenchConfig};

fn main() -> dc_recovery::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut args = std::env::args().skip(1);
    let corpus = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus"));
    let report = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("dcrec-bench/report.csv"));
    std::fs::create_dir_all(report.parent().expect("report path has a parent"))?;

    let outcome = run_bench(&corpus, &BenchConfig::default())?;
    for r in &outcome.records {
        println!(
            "{:<24} {:<15} psnr {:7.3} ssim {:.4} ms-ssim {:.4} {:6.2}s",
            r.image, r.method, r.quality.psnr, r.quality.ssim, r.quality.ms_ssim, r.seconds
        );
    }
    print!("{}", write_outputs(&outcome, &report, None)?);
    println!("report written to {}", report.display());
    Ok(())
}
