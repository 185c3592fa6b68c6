//! Independent re-implementations checked against the library.

use dc_recovery::blockdct::true_dcs;
use dc_recovery::frm::{grid_candidates, search_exhaustive, FlowObjective};
use dc_recovery::scan::{estimate_plane, DcPlane};
use dc_recovery::synth::{piecewise_smooth, SynthParams};
use dc_recovery::uso::{average_images, global_adjustment, postprocess, recover_uso_detailed};
use dc_recovery::{apply_dc, dc_bounds, finalize, strip_dc, Corner, DcBounds, DcFreePlane, PixelImage, RealImage};

const N: usize = 8;

fn natural(width: usize, height: usize, seed: u64) -> PixelImage {
    piecewise_smooth(SynthParams::new(width, height), seed)
}

// Straightforward scan: works on reconstructed pixels of the whole image,
// visits blocks in corner-oriented row-major order, and picks the pairing
// with the smallest difference variance.
fn naive_scan(plane: &DcFreePlane, corner: Corner, dc0: f64, bounds: Option<&DcBounds>) -> Vec<f64> {
    let grid = plane.grid();
    let (w, n) = (plane.width(), grid.n);
    let px = |x: usize, y: usize| plane.data()[y * w + x];
    let mut dc = vec![f64::NAN; grid.block_count()];
    let rows: Vec<usize> = match corner {
        Corner::TopLeft | Corner::TopRight => (0..grid.rows).collect(),
        _ => (0..grid.rows).rev().collect(),
    };
    let cols: Vec<usize> = match corner {
        Corner::TopLeft | Corner::BottomLeft => (0..grid.cols).collect(),
        _ => (0..grid.cols).rev().collect(),
    };
    for (i, &row) in rows.iter().enumerate() {
        for (j, &col) in cols.iter().enumerate() {
            let mut estimates = Vec::new();
            let mut neighbours = Vec::new();
            if j > 0 {
                neighbours.push((row, cols[j - 1]));
            }
            if i > 0 {
                neighbours.push((rows[i - 1], col));
            }
            for (nr, nc) in neighbours {
                let level = dc[nr * grid.cols + nc] / n as f64;
                // Pixel pairs across the shared edge, walking along it.
                let (r, q): (Vec<f64>, Vec<f64>) = (0..n)
                    .map(|k| {
                        let (rx, ry, qx, qy) = if nr != row {
                            let x = col * n + k;
                            let (ry, qy) =
                                if nr < row { (row * n - 1, row * n) } else { (row * n + n, row * n + n - 1) };
                            (x, ry, x, qy)
                        } else {
                            let y = row * n + k;
                            let (rx, qx) =
                                if nc < col { (col * n - 1, col * n) } else { (col * n + n, col * n + n - 1) };
                            (rx, y, qx, y)
                        };
                        (px(rx, ry) + level, px(qx, qy))
                    })
                    .unzip();
                let candidates: [Vec<f64>; 3] = [
                    (0..n).map(|k| r[k] - q[k]).collect(),
                    (0..n - 1).map(|k| r[k] - q[k + 1]).collect(),
                    (0..n - 1).map(|k| r[k + 1] - q[k]).collect(),
                ];
                let mut best = (f64::INFINITY, 0.0);
                for d in &candidates {
                    let mean = d.iter().sum::<f64>() / d.len() as f64;
                    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d.len() as f64;
                    if var < best.0 {
                        best = (var, mean);
                    }
                }
                estimates.push(n as f64 * best.1);
            }
            let mut value =
                if estimates.is_empty() { dc0 } else { estimates.iter().sum::<f64>() / estimates.len() as f64 };
            if let Some(b) = bounds {
                let (lo, hi) = b.get(row, col);
                value = value.clamp(lo, hi);
            }
            dc[row * grid.cols + col] = value;
        }
    }
    dc
}

#[test]
fn scan_matches_naive_oracle() {
    for seed in 0..4 {
        let img = natural(64, 48, seed);
        let plane = strip_dc(&img, N).unwrap();
        let bounds = dc_bounds(&plane);
        let truth = true_dcs(&img, N).unwrap();
        for corner in Corner::ALL {
            let (r, c) = corner.origin(plane.grid());
            for (dc0, b) in [(0.0, None), (truth.get(r, c), Some(&bounds)), (300.0, Some(&bounds))] {
                let (dcs, _) = estimate_plane(&plane, corner, dc0, b).unwrap();
                let oracle = naive_scan(&plane, corner, dc0, b);
                for (a, o) in dcs.values().iter().zip(&oracle) {
                    assert!((a - o).abs() < 1e-6, "seed {seed} {corner:?}: {a} vs {o}");
                }
            }
        }
    }
}

#[test]
fn bounded_scan_at_true_dc_stays_in_range() {
    let img = natural(96, 64, 11);
    let plane = strip_dc(&img, N).unwrap();
    let bounds = dc_bounds(&plane);
    let truth = true_dcs(&img, N).unwrap();
    for corner in Corner::ALL {
        let (r, c) = corner.origin(plane.grid());
        let (dcs, _) = estimate_plane(&plane, corner, truth.get(r, c), Some(&bounds)).unwrap();
        let out = apply_dc(&plane, &dcs).unwrap();
        assert_eq!(out.count_outside(img.range(), 1e-6), 0);
        // The scan tracks the truth closely on a smooth image.
        let err: f64 = dcs.values().iter().zip(truth.values()).map(|(a, b)| (a - b).abs()).sum::<f64>()
            / dcs.values().len() as f64;
        assert!(err < 8.0 * 40.0, "{corner:?} mean DC error {err}");
    }
}

#[test]
fn uso_is_invariant_to_corner_order() {
    let img = natural(64, 64, 5);
    let plane = strip_dc(&img, N).unwrap();
    let report = recover_uso_detailed(&plane).unwrap();
    let images: Vec<&RealImage> = report.scans.iter().map(|s| &s.image).collect();
    let mut order = [0usize, 1, 2, 3];
    let mut seen = 0;
    permute(&mut order, 0, &mut |perm| {
        let ordered: Vec<&RealImage> = perm.iter().map(|&i| images[i]).collect();
        let out = finalize(&postprocess(&average_images(&ordered).unwrap(), img.range()), img.range());
        assert_eq!(out, report.output, "order {perm:?}");
        seen += 1;
    });
    assert_eq!(seen, 24);
}

fn permute(items: &mut [usize; 4], k: usize, visit: &mut impl FnMut(&[usize; 4])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[test]
fn global_adjustment_agrees_with_sweep() {
    for seed in 0..6 {
        let img = natural(48, 48, 20 + seed);
        let plane = strip_dc(&img, N).unwrap();
        let bounds = dc_bounds(&plane);
        let (relative, _) = estimate_plane(&plane, Corner::TopLeft, 0.0, None).unwrap();
        let shift = global_adjustment(&relative, &bounds).unwrap();
        let inside = |s: f64| {
            relative
                .values()
                .iter()
                .enumerate()
                .filter(|&(i, d)| {
                    let (lo, hi) = bounds.interval(i);
                    let v = d + N as f64 * s;
                    v >= lo - 1e-9 && v <= hi + 1e-9
                })
                .count()
        };
        // Dense sweep over brightness shifts in steps of 1/64 gray level.
        let best = (-256 * 64..=512 * 64).map(|k| inside(k as f64 / 64.0)).max().unwrap();
        let m = relative.values().len();
        if best == m {
            assert_eq!(inside(shift), m, "seed {seed}: shift {shift} leaves blocks outside");
        }
        let (mut s_lo, mut s_hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (i, d) in relative.values().iter().enumerate() {
            let (lo, hi) = bounds.interval(i);
            s_lo = s_lo.max((lo - d) / N as f64);
            s_hi = s_hi.min((hi - d) / N as f64);
        }
        assert!((shift - 0.5 * (s_lo + s_hi)).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn exhaustive_search_matches_dense_sweep() {
    for seed in 0..3 {
        let img = natural(64, 64, 40 + seed);
        let plane = strip_dc(&img, N).unwrap();
        let objective = FlowObjective::new(&plane);
        for corner in Corner::ALL {
            let trace = search_exhaustive(&plane, corner, 1.0).unwrap();
            let (lo, hi) = objective.corner_interval(corner);
            let sweep: Vec<(f64, f64)> =
                grid_candidates(lo, hi, 1.0).into_iter().map(|x| (x, objective.rate(corner, x))).collect();
            let min = sweep.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            let argmins: Vec<f64> = sweep.iter().filter(|s| s.1 == min).map(|s| s.0).collect();
            assert_eq!(trace.min_rate, min);
            assert!(sweep.iter().all(|s| s.1 >= trace.min_rate));
            let mid = 0.5 * (argmins[0] + argmins[argmins.len() - 1]);
            assert!((trace.chosen - mid).abs() <= 1.0, "{corner:?}: {} vs {mid}", trace.chosen);
            assert!(trace.chosen >= lo && trace.chosen <= hi);
        }
    }
}

#[test]
fn flow_rate_depends_only_on_its_inputs() {
    let img = natural(48, 40, 3);
    let plane = strip_dc(&img, N).unwrap();
    let a = FlowObjective::new(&plane).rate(Corner::BottomLeft, 500.0);
    let copy = DcFreePlane::new(plane.grid(), plane.range(), plane.data().to_vec()).unwrap();
    let b = FlowObjective::new(&copy).rate(Corner::BottomLeft, 500.0);
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn strip_then_true_dcs_is_identity() {
    let img = natural(40, 24, 9);
    let plane = strip_dc(&img, N).unwrap();
    let restored = apply_dc(&plane, &true_dcs(&img, N).unwrap()).unwrap();
    for (a, b) in restored.data.iter().zip(img.data()) {
        assert!((a - *b as f64).abs() < 1e-9);
    }
    let zero = DcPlane::filled(plane.grid(), 0.0);
    assert_eq!(apply_dc(&plane, &zero).unwrap().data, plane.data());
}
