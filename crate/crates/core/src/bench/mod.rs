//! Corpus benchmark: recover every image of a directory with each method,
//! score the results against the originals and report FRM-minus-USO
//! differences.

mod svg;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::warn;
use rayon::prelude::*;

use crate::blockdct::{dc_bounds, strip_dc, PixelImage, PixelRange};
use crate::error::{Error, Result};
use crate::frm::{recover_frm_detailed, SearchConfig, SearchMode, DEFAULT_DELTA};
use crate::io::load_pgm;
use crate::iqa::{format_score, QualityReport};
use crate::scan::Corner;
use crate::uso::recover_uso_detailed;

pub use svg::delta_plot;

/// Recovery method under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Uso,
    FrmExhaustive,
    FrmBracket,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Uso, Method::FrmExhaustive, Method::FrmBracket];

    pub fn label(self) -> &'static str {
        match self {
            Method::Uso => "uso",
            Method::FrmExhaustive => "frm-exhaustive",
            Method::FrmBracket => "frm-bracket",
        }
    }

    pub fn search_mode(self) -> Option<SearchMode> {
        match self {
            Method::Uso => None,
            Method::FrmExhaustive => Some(SearchMode::Exhaustive),
            Method::FrmBracket => Some(SearchMode::Bracket),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::InvalidValue(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub delta: f64,
    pub block_size: usize,
    pub range: PixelRange,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { methods: Method::ALL.to_vec(), delta: DEFAULT_DELTA, block_size: 8, range: PixelRange::default() }
    }
}

/// Per-corner outcome of one method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CornerResult {
    pub corner: Corner,
    /// Corner-block DC the scan ended up with.
    pub dc0: f64,
    /// True corner-block DC of the original.
    pub true_dc0: f64,
    /// Width of the corner block's valid DC interval.
    pub interval_width: f64,
    /// For FRM the flow rate at the chosen DC; for USO the fraction of
    /// blocks whose adjusted DC lies outside its valid interval.
    pub flow_rate: f64,
    /// Lowest flow rate the search evaluated (FRM only, NaN for USO).
    pub min_rate: f64,
    /// Number of objective evaluations (0 for USO).
    pub evaluations: usize,
    /// Pixels of this corner's pre-averaging image outside the range.
    pub out_of_range: usize,
}

/// One `(image, method)` row of the benchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub image: String,
    pub method: Method,
    pub quality: QualityReport,
    pub corners: Vec<CornerResult>,
    pub seconds: f64,
}

impl BenchRecord {
    pub fn out_of_range(&self) -> usize {
        self.corners.iter().map(|c| c.out_of_range).sum()
    }
}

/// Runs `method` on one image and scores it.
pub fn evaluate(id: &str, original: &PixelImage, method: Method, cfg: &BenchConfig) -> Result<BenchRecord> {
    let start = Instant::now();
    let plane = strip_dc(original, cfg.block_size)?;
    let truth = crate::blockdct::true_dcs(original, cfg.block_size)?;
    let grid = plane.grid();
    let corner_truth = |corner: Corner| {
        let (r, c) = corner.origin(grid);
        truth.get(r, c)
    };
    let (output, corners) = match method.search_mode() {
        None => {
            let report = recover_uso_detailed(&plane)?;
            let corners = report
                .scans
                .iter()
                .map(|s| {
                    let (r, c) = s.corner.origin(grid);
                    let (lo, hi) = report.bounds.get(r, c);
                    CornerResult {
                        corner: s.corner,
                        dc0: s.adjusted.get(r, c),
                        true_dc0: corner_truth(s.corner),
                        interval_width: hi - lo,
                        flow_rate: s.out_of_bounds_rate(&report.bounds),
                        min_rate: f64::NAN,
                        evaluations: 0,
                        out_of_range: s.image.count_outside(cfg.range, 1e-6),
                    }
                })
                .collect();
            (report.output, corners)
        }
        Some(mode) => {
            let search = SearchConfig::new(mode, cfg.delta);
            let report = recover_frm_detailed(&plane, &search)?;
            let bounds = dc_bounds(&plane);
            let corners = report
                .scans
                .iter()
                .map(|s| {
                    let (r, c) = s.corner.origin(grid);
                    let (lo, hi) = bounds.get(r, c);
                    CornerResult {
                        corner: s.corner,
                        dc0: s.trace.chosen,
                        true_dc0: corner_truth(s.corner),
                        interval_width: hi - lo,
                        flow_rate: s.flow.rate,
                        min_rate: s.trace.min_rate,
                        evaluations: s.trace.evaluations.len(),
                        out_of_range: s.image.count_outside(cfg.range, 1e-6),
                    }
                })
                .collect();
            (report.output, corners)
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    let quality = QualityReport::compute(original, &output)?;
    Ok(BenchRecord { image: id.to_owned(), method, quality, corners, seconds })
}

/// PGM files of `dir`, sorted by file name.
pub fn list_corpus(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Records plus the files that could not be processed.
#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<(PathBuf, String)>,
}

impl BenchOutcome {
    /// Distinct images with at least one record.
    pub fn image_count(&self) -> usize {
        let mut ids: Vec<&str> = self.records.iter().map(|r| r.image.as_str()).collect();
        ids.dedup();
        ids.len()
    }
}

/// Benchmarks every PGM in `dir`. Unreadable or mis-sized files are logged
/// and skipped; records come back sorted by image then method.
pub fn run_bench(dir: impl AsRef<Path>, cfg: &BenchConfig) -> Result<BenchOutcome> {
    let files = list_corpus(dir)?;
    let results: Vec<_> = files
        .par_iter()
        .map(|path| {
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let run = || -> Result<Vec<BenchRecord>> {
                let image = load_pgm(path, cfg.block_size)?;
                cfg.methods.iter().map(|&m| evaluate(&id, &image, m, cfg)).collect()
            };
            (path.clone(), run())
        })
        .collect();
    let mut outcome = BenchOutcome::default();
    for (path, result) in results {
        match result {
            Ok(records) => outcome.records.extend(records),
            Err(e) => {
                warn!("skipping {}: {e}", path.display());
                outcome.skipped.push((path, e.to_string()));
            }
        }
    }
    outcome.records.sort_by(|a, b| a.image.cmp(&b.image).then(a.method.cmp(&b.method)));
    Ok(outcome)
}

/// The metrics reported per record, in column order.
pub const METRICS: [&str; 3] = ["psnr", "ssim", "ms_ssim"];

fn metric_value(q: &QualityReport, metric: &str) -> f64 {
    match metric {
        "psnr" => q.psnr,
        "ssim" => q.ssim,
        "ms_ssim" => q.ms_ssim,
        _ => unreachable!("unknown metric {metric}"),
    }
}

/// CSV of all records (no timing columns, so the file is reproducible).
pub fn report_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["image".to_owned(), "method".to_owned()];
    header.extend(METRICS.iter().map(|m| m.to_string()));
    for corner in Corner::ALL {
        header.push(format!("dc0_{}", corner.label()));
    }
    for corner in Corner::ALL {
        header.push(format!("rate_{}", corner.label()));
    }
    header.push("out_of_range".to_owned());
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![r.image.clone(), r.method.to_string()];
        row.extend(METRICS.iter().map(|m| format_score(metric_value(&r.quality, m))));
        for corner in Corner::ALL {
            row.push(r.corners.iter().find(|c| c.corner == corner).map_or("nan".into(), |c| format_score(c.dc0)));
        }
        for corner in Corner::ALL {
            row.push(r.corners.iter().find(|c| c.corner == corner).map_or("nan".into(), |c| format_score(c.flow_rate)));
        }
        row.push(r.out_of_range().to_string());
        w.write_record(&row)?;
    }
    into_string(w)
}

/// Wall time per record.
pub fn timings_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["image", "method", "seconds"])?;
    for r in records {
        w.write_record([r.image.clone(), r.method.to_string(), format_score(r.seconds)])?;
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Score difference `candidate - baseline`, zero when both are equal
/// (including both infinite).
pub fn score_delta(candidate: f64, baseline: f64) -> f64 {
    if candidate == baseline {
        0.0
    } else {
        candidate - baseline
    }
}

/// Per-image differences of one metric between a method and USO.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSeries {
    pub method: Method,
    pub metric: &'static str,
    pub images: Vec<String>,
    pub deltas: Vec<f64>,
}

impl DeltaSeries {
    fn finite(&self) -> Vec<f64> {
        self.deltas.iter().copied().filter(|d| d.is_finite()).collect()
    }

    /// Mean of the finite differences.
    pub fn mean(&self) -> f64 {
        let v = self.finite();
        v.iter().sum::<f64>() / v.len() as f64
    }

    pub fn median(&self) -> f64 {
        let mut v = self.finite();
        if v.is_empty() {
            return f64::NAN;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        if v.len() % 2 == 1 {
            v[m]
        } else {
            0.5 * (v[m - 1] + v[m])
        }
    }

    /// Share of images where the method scores at least as well as USO.
    pub fn fraction_not_worse(&self) -> f64 {
        self.deltas.iter().filter(|&&d| d >= 0.0).count() as f64 / self.deltas.len() as f64
    }

    /// Share of images where the method scores strictly better.
    pub fn fraction_better(&self) -> f64 {
        self.deltas.iter().filter(|&&d| d > 0.0).count() as f64 / self.deltas.len() as f64
    }
}

/// Difference series of every non-USO method against USO, for every metric.
/// Only images that have a USO record contribute.
pub fn delta_series(records: &[BenchRecord]) -> Vec<DeltaSeries> {
    let mut out = Vec::new();
    let methods: Vec<Method> =
        Method::ALL.into_iter().filter(|&m| m != Method::Uso && records.iter().any(|r| r.method == m)).collect();
    for method in methods {
        for metric in METRICS {
            let mut series = DeltaSeries { method, metric, images: Vec::new(), deltas: Vec::new() };
            for r in records.iter().filter(|r| r.method == method) {
                let Some(base) = records.iter().find(|b| b.image == r.image && b.method == Method::Uso) else {
                    continue;
                };
                series.images.push(r.image.clone());
                series.deltas.push(score_delta(metric_value(&r.quality, metric), metric_value(&base.quality, metric)));
            }
            if !series.deltas.is_empty() {
                out.push(series);
            }
        }
    }
    out
}

/// CSV of all difference series in long form.
pub fn deltas_csv(series: &[DeltaSeries]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "metric", "index", "image", "delta"])?;
    for s in series {
        for (i, (image, d)) in s.images.iter().zip(&s.deltas).enumerate() {
            w.write_record([
                s.method.to_string(),
                s.metric.to_owned(),
                i.to_string(),
                image.clone(),
                format_score(*d),
            ])?;
        }
    }
    into_string(w)
}

/// Text summary: mean and median difference and share of images not worse.
pub fn summary_text(series: &[DeltaSeries], images: usize, skipped: usize) -> String {
    let mut out = format!("images processed: {images}\nimages skipped: {skipped}\n");
    for s in series {
        out.push_str(&format!(
            "{} vs uso {:<8} mean_delta={} median_delta={} not_worse={} better={}\n",
            s.method,
            s.metric,
            format_score(s.mean()),
            format_score(s.median()),
            format_score(s.fraction_not_worse()),
            format_score(s.fraction_better()),
        ));
    }
    out
}

/// Writes `report.csv`-style output plus timings, deltas, summary and plots.
/// Returns the summary text.
pub fn write_outputs(outcome: &BenchOutcome, report: &Path, plots: Option<&Path>) -> Result<String> {
    fs::write(report, report_csv(&outcome.records)?)?;
    let sibling = |name: &str| {
        let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        report.with_file_name(format!("{stem}_{name}"))
    };
    fs::write(sibling("timings.csv"), timings_csv(&outcome.records)?)?;
    let series = delta_series(&outcome.records);
    fs::write(sibling("deltas.csv"), deltas_csv(&series)?)?;
    let summary = summary_text(&series, outcome.image_count(), outcome.skipped.len());
    fs::write(sibling("summary.txt"), &summary)?;
    if let Some(dir) = plots {
        fs::create_dir_all(dir)?;
        for s in &series {
            let name = format!("delta_{}_{}.svg", s.method, s.metric);
            fs::write(dir.join(name), delta_plot(s))?;
        }
    }
    Ok(summary)
}
