//! Acceptance gate. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dc_recovery::bench::list_corpus;
use dc_recovery::blockdct::{forward_block, inverse_block, true_dcs, BlockDct};
use dc_recovery::frm::{bracket_budget, recover_frm_detailed, FlowObjective, FrmReport};
use dc_recovery::io::{load_pgm, read_dc_sidecar, write_dc_sidecar, CoefficientFile};
use dc_recovery::iqa::{ms_ssim, psnr, ssim};
use dc_recovery::scan::DcPlane;
use dc_recovery::uso::recover_uso_detailed;
use dc_recovery::{
    apply_dc, dc_bounds, strip_dc, BlockGrid, CoefficientPlane, Corner, DcFreePlane, PixelImage, PixelRange,
    QualityReport, SearchConfig, SearchMode,
};

const N: usize = 8;

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: &str, status: Status, detail: String) {
        let tag = match status {
            Status::Pass => "PASS",
            Status::Fail => {
                self.failed += 1;
                "FAIL"
            }
            Status::Skip => "SKIP",
        };
        println!("[{tag}] {id}: {detail}");
    }

    fn check(&mut self, id: &str, ok: bool, detail: String) {
        self.report(id, if ok { Status::Pass } else { Status::Fail }, detail);
    }
}

fn random_block(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..N * N).map(|_| rng.gen_range(0..=255) as f64).collect()
}

fn random_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> PixelImage {
    let data = (0..width * height).map(|_| rng.gen_range(0..=255)).collect();
    PixelImage::new(width, height, data, PixelRange::default()).unwrap()
}

fn dct_round_trip(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let blocks: Vec<Vec<f64>> = (0..10_000).map(|_| random_block(&mut rng)).collect();
    let dct = BlockDct::new(N);
    let start = Instant::now();
    let (mut err, mut dc_err) = (0.0f64, 0.0f64);
    for b in &blocks {
        let c = dct.forward(b);
        let back = dct.inverse(&c);
        err = b.iter().zip(&back).map(|(x, y)| (x - y).abs()).fold(err, f64::max);
        let mean = b.iter().sum::<f64>() / b.len() as f64;
        dc_err = dc_err.max((c[0] - N as f64 * mean).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    // Free functions share the basis; spot-check them too.
    let spot = inverse_block(&forward_block(&blocks[0], N), N);
    err = blocks[0].iter().zip(&spot).map(|(x, y)| (x - y).abs()).fold(err, f64::max);
    gate.check(
        "1 dct round trip",
        err < 1e-9 && dc_err < 1e-9 && secs < 1.0,
        format!("max_err={err:.3e} dc_err={dc_err:.3e} time={secs:.3}s (limits 1e-9, 1e-9, 1s)"),
    );
}

fn dc_interval(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let range = PixelRange::default();
    let grid = BlockGrid::for_image(N, N, N).unwrap();
    let start = Instant::now();
    let (mut touch_err, mut escapes) = (0.0f64, 0usize);
    for _ in 0..1000 {
        let b = random_block(&mut rng);
        let mean = b.iter().sum::<f64>() / b.len() as f64;
        let plane = DcFreePlane::new(grid, range, b.iter().map(|v| v - mean).collect()).unwrap();
        let (lo, hi) = dc_bounds(&plane).get(0, 0);
        let at = |d: f64| apply_dc(&plane, &DcPlane::filled(grid, d)).unwrap().value_range();
        touch_err = touch_err.max((at(lo).0 - range.lo()).abs()).max((at(hi).1 - range.hi()).abs());
        for _ in 0..100 {
            let (min, max) = at(rng.gen_range(lo..=hi));
            if min < range.lo() - 1e-6 || max > range.hi() + 1e-6 {
                escapes += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    gate.check(
        "2 dc interval oracle",
        touch_err < 1e-6 && escapes == 0 && secs < 5.0,
        format!("touch_err={touch_err:.3e} escapes={escapes} time={secs:.3}s (limits 1e-6, 0, 5s)"),
    );
}

struct CorpusImage {
    name: String,
    original: PixelImage,
    plane: DcFreePlane,
    uso: QualityReport,
    frm: FrmReport,
    frm_quality: QualityReport,
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load_corpus() -> Vec<CorpusImage> {
    let Ok(paths) = list_corpus(corpus_dir()) else {
        return Vec::new();
    };
    let cfg = SearchConfig::new(SearchMode::Exhaustive, 1.0);
    paths
        .iter()
        .filter_map(|path| {
            let original = load_pgm(path, N).ok()?;
            let plane = strip_dc(&original, N).unwrap();
            let uso = QualityReport::compute(&original, &recover_uso_detailed(&plane).unwrap().output).unwrap();
            let frm = recover_frm_detailed(&plane, &cfg).unwrap();
            let frm_quality = QualityReport::compute(&original, &frm.output).unwrap();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            Some(CorpusImage { name, original, plane, uso, frm, frm_quality })
        })
        .collect()
}

fn range_guarantee(gate: &mut Gate, corpus: &[CorpusImage]) {
    let mut bad = Vec::new();
    for img in corpus {
        let range = img.original.range();
        let outside: usize = img.frm.scans.iter().map(|s| s.image.count_outside(range, 1e-6)).sum();
        if outside > 0 {
            bad.push(format!("{}({outside})", img.name));
        }
    }
    gate.check(
        "3 frm range guarantee",
        !corpus.is_empty() && bad.is_empty(),
        format!("images={} with_out_of_range=[{}]", corpus.len(), bad.join(" ")),
    );
}

fn frm_beats_uso(gate: &mut Gate, corpus: &[CorpusImage]) {
    let n = corpus.len() as f64;
    let summary = |pick: fn(&QualityReport) -> f64| {
        let deltas: Vec<f64> = corpus.iter().map(|c| pick(&c.frm_quality) - pick(&c.uso)).collect();
        let better = deltas.iter().filter(|&&d| d > 0.0).count() as f64 / n;
        (better, deltas.iter().sum::<f64>() / n)
    };
    let (ssim_better, ssim_mean) = summary(|q| q.ssim);
    let (ms_better, ms_mean) = summary(|q| q.ms_ssim);
    let (psnr_better, psnr_mean) = summary(|q| q.psnr);
    gate.check(
        "4 frm beats uso",
        corpus.len() >= 20 && ssim_better >= 0.7 && ms_better >= 0.7 && ssim_mean > 0.0 && ms_mean > 0.0,
        format!(
            "images={} ssim better={ssim_better:.3} mean={ssim_mean:+.5} ms_ssim better={ms_better:.3} \
             mean={ms_mean:+.5} (psnr better={psnr_better:.3} mean={psnr_mean:+.3}dB)",
            corpus.len()
        ),
    );
}

fn reference_point_values(gate: &mut Gate) {
    let Ok(path) = std::env::var("DCREC_REFERENCE_IMAGE") else {
        gate.report("5 reference image values", Status::Skip, "DCREC_REFERENCE_IMAGE not set".into());
        return;
    };
    let original = match load_pgm(&path, N) {
        Ok(img) => img,
        Err(e) => {
            gate.report("5 reference image values", Status::Fail, format!("cannot load {path}: {e}"));
            return;
        }
    };
    let plane = strip_dc(&original, N).unwrap();
    let uso = QualityReport::compute(&original, &recover_uso_detailed(&plane).unwrap().output).unwrap();
    let frm_out = recover_frm_detailed(&plane, &SearchConfig::default()).unwrap().output;
    let frm = QualityReport::compute(&original, &frm_out).unwrap();
    let near = |v: f64, want: f64, tol: f64| (v - want).abs() <= tol;
    let ok = near(uso.psnr, 14.3, 1.0)
        && near(uso.ssim, 0.732, 0.03)
        && near(frm.psnr, 23.2, 1.0)
        && near(frm.ssim, 0.900, 0.02)
        && near(frm.ms_ssim, 0.924, 0.02);
    gate.check(
        "5 reference image values",
        ok,
        format!(
            "uso psnr={:.3} ssim={:.4} (ms_ssim={:.4}, reported 0.711) | frm psnr={:.3} ssim={:.4} ms_ssim={:.4}",
            uso.psnr, uso.ssim, uso.ms_ssim, frm.psnr, frm.ssim, frm.ms_ssim
        ),
    );
}

fn bracket_vs_exhaustive(gate: &mut Gate, corpus: &[CorpusImage]) {
    let mut agree = 0usize;
    let mut over_budget = Vec::new();
    let mut misses = Vec::new();
    for img in corpus {
        let objective = FlowObjective::new(&img.plane);
        let mut all_corners = true;
        for scan in &img.frm.scans {
            let bracket = objective.search_bracket(scan.corner, 1.0).unwrap();
            let (lo, hi) = bracket.interval;
            if bracket.evaluations.len() > bracket_budget(hi - lo, 1.0) {
                over_budget.push(format!("{}:{}", img.name, scan.corner.label()));
            }
            if bracket.chosen_rate > scan.trace.min_rate + 0.02 {
                all_corners = false;
                misses.push(format!(
                    "{}:{}({:.4}>{:.4})",
                    img.name,
                    scan.corner.label(),
                    bracket.chosen_rate,
                    scan.trace.min_rate
                ));
            }
        }
        agree += all_corners as usize;
    }
    let fraction = agree as f64 / corpus.len().max(1) as f64;

    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/camera_512.pgm");
    let secs = load_pgm(&fixture, N).ok().map(|img| {
        let start = Instant::now();
        let plane = strip_dc(&img, N).unwrap();
        recover_frm_detailed(&plane, &SearchConfig::new(SearchMode::Bracket, 1.0)).unwrap();
        start.elapsed().as_secs_f64()
    });
    gate.check(
        "6 bracket vs exhaustive",
        !corpus.is_empty() && fraction >= 0.8 && over_budget.is_empty() && secs.is_some_and(|s| s < 10.0),
        format!(
            "all-corner agreement={fraction:.3} (>=0.8) over_budget=[{}] 512x512 bracket time={} misses=[{}]",
            over_budget.join(" "),
            secs.map_or("missing fixture".into(), |s| format!("{s:.3}s")),
            misses.join(" ")
        ),
    );
}

fn ground_truth_proximity(gate: &mut Gate, corpus: &[CorpusImage]) {
    let mut fractions = Vec::new();
    let mut failures = Vec::new();
    for corner in Corner::ALL {
        let mut close = 0usize;
        for img in corpus {
            let dcs = true_dcs(&img.original, N).unwrap();
            let (row, col) = corner.origin(dcs.grid());
            let scan = img.frm.scans.iter().find(|s| s.corner == corner).unwrap();
            let (lo, hi) = scan.trace.interval;
            let dist = (scan.trace.chosen - dcs.get(row, col)).abs();
            if dist <= 0.1 * (hi - lo) {
                close += 1;
            } else {
                failures.push(format!("{}:{}({:.0}/{:.0})", img.name, corner.label(), dist, hi - lo));
            }
        }
        fractions.push((corner, close as f64 / corpus.len().max(1) as f64));
    }
    let ok = !corpus.is_empty() && fractions.iter().all(|&(_, f)| f >= 0.6);
    let per_corner: Vec<String> = fractions.iter().map(|(c, f)| format!("{}={f:.3}", c.label())).collect();
    gate.check(
        "7 ground truth proximity",
        ok,
        format!("{} (>=0.6 each) failures=[{}]", per_corner.join(" "), failures.join(" ")),
    );
}

fn metric_correctness(gate: &mut Gate) {
    let range = PixelRange::default();
    let a = PixelImage::filled(64, 64, 100, range).unwrap();
    let b = PixelImage::filled(64, 64, 116, range).unwrap();
    let value = psnr(&a, &b).unwrap();
    let closed_form = 10.0 * (255.0f64 * 255.0 / 256.0).log10();
    let stated = 24.046844;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let img = random_image(&mut rng, 192, 192);
    let identical = ssim(&img, &img).unwrap() == 1.0 && ms_ssim(&img, &img).unwrap() == 1.0;
    let mut asym = 0.0f64;
    for _ in 0..100 {
        let x = random_image(&mut rng, 32, 32);
        let y = random_image(&mut rng, 32, 32);
        asym = asym.max((ssim(&x, &y).unwrap() - ssim(&y, &x).unwrap()).abs());
    }
    gate.check(
        "8 metric correctness",
        (value - stated).abs() <= 1e-4 && identical && asym <= 1e-9,
        format!(
            "psnr(+16)={value:.6} stated={stated} |diff|={:.2e} (tol 1e-4) closed_form={closed_form:.6} \
             |diff|={:.2e}; identical==1.0: {identical}; max ssim asymmetry={asym:.2e}",
            (value - stated).abs(),
            (value - closed_form).abs()
        ),
    );
}

fn serialization(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dir = tempfile::tempdir().unwrap();
    let (mut not_exact, mut not_restored) = (0usize, 0usize);
    for i in 0..100 {
        let (w, h) = (N * rng.gen_range(1..=8), N * rng.gen_range(1..=8));
        let img = random_image(&mut rng, w, h);
        let coeffs = CoefficientPlane::from_image(&img, N).unwrap();
        let file = CoefficientFile::dc_stripped(coeffs.without_dc()).unwrap();
        let path = dir.path().join(format!("{i}.dcf"));
        file.save(&path).unwrap();
        let back = CoefficientFile::load(&path).unwrap();
        let same_bits = back.plane.coeffs.iter().zip(&file.plane.coeffs).all(|(a, b)| a.to_bits() == b.to_bits());
        if !same_bits || back.flags != file.flags || back.to_bytes().unwrap() != file.to_bytes().unwrap() {
            not_exact += 1;
        }
        let sidecar = dir.path().join(format!("{i}.csv"));
        write_dc_sidecar(&sidecar, &true_dcs(&img, N).unwrap()).unwrap();
        let plane = DcFreePlane::from_coefficients(&back.plane, img.range()).unwrap();
        let restored =
            dc_recovery::finalize(&apply_dc(&plane, &read_dc_sidecar(&sidecar).unwrap()).unwrap(), img.range());
        if restored != img {
            not_restored += 1;
        }
    }
    gate.check(
        "9 serialization",
        not_exact == 0 && not_restored == 0,
        format!("inexact_round_trips={not_exact} unrestored_images={not_restored} of 100"),
    );
}

fn main() {
    let mut gate = Gate { failed: 0 };
    dct_round_trip(&mut gate);
    dc_interval(&mut gate);
    let corpus = load_corpus();
    range_guarantee(&mut gate, &corpus);
    frm_beats_uso(&mut gate, &corpus);
    reference_point_values(&mut gate);
    bracket_vs_exhaustive(&mut gate, &corpus);
    ground_truth_proximity(&mut gate, &corpus);
    metric_correctness(&mut gate);
    serialization(&mut gate);
    println!("acceptance: {} failed", gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
