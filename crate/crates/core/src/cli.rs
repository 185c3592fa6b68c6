//! Implementations of the `dcrec` subcommands, usable from code and tests.

use std::fs;
use std::path::{Path, PathBuf};

use crate::bench::{run_bench, write_outputs, BenchConfig, BenchOutcome, Method};
use crate::blockdct::{finalize, strip_dc, true_dcs, CoefficientPlane, DcFreePlane, PixelImage, PixelRange, RealImage};
use crate::error::{Error, Result};
use crate::frm::{recover_frm_detailed, SearchConfig, SearchMode, SearchTrace};
use crate::io::{load_pgm, parse_pgm, save_pgm, write_dc_sidecar, CoefficientFile};
use crate::iqa::{format_score, QualityReport};
use crate::scan::Corner;
use crate::uso::recover_uso_detailed;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const IO: i32 = 2;
    pub const EMPTY_BENCH: i32 = 3;
}

/// Exit code for an error returned by one of the commands.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidValue(_) => exit::USAGE,
        _ => exit::IO,
    }
}

#[derive(Clone, Debug, Default)]
pub struct StripOptions {
    pub block_size: usize,
    /// Viewable PGM of the DC-free plane (offset by +128).
    pub preview: Option<PathBuf>,
    /// CSV with the true DC of every block.
    pub dc_sidecar: Option<PathBuf>,
}

/// DCT coefficients of `image` with every DC set to zero. Blocks are
/// transformed after their mean is removed, so flat blocks come out as exact
/// zeros.
pub fn dc_free_coefficients(image: &PixelImage, block_size: usize) -> Result<CoefficientPlane> {
    Ok(strip_dc(image, block_size)?.to_coefficients())
}

/// `strip`: PGM in, DC-free coefficient file out.
pub fn strip(input: &Path, output: &Path, opts: &StripOptions) -> Result<CoefficientFile> {
    let image = load_pgm(input, opts.block_size)?;
    let file = CoefficientFile::dc_stripped(dc_free_coefficients(&image, opts.block_size)?)?;
    file.save(output)?;
    if let Some(path) = &opts.preview {
        let plane = DcFreePlane::from_coefficients(&file.plane, image.range())?;
        save_pgm(path, &preview(&plane))?;
    }
    if let Some(path) = &opts.dc_sidecar {
        write_dc_sidecar(path, &true_dcs(&image, opts.block_size)?)?;
    }
    Ok(file)
}

/// The DC-free plane shifted to mid-grey and clipped for viewing.
pub fn preview(plane: &DcFreePlane) -> PixelImage {
    let shifted = RealImage {
        width: plane.width(),
        height: plane.height(),
        data: plane.data().iter().map(|v| v + 128.0).collect(),
    };
    finalize(&shifted, plane.range())
}

/// Method selection for `recover`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoverMethod {
    Uso,
    Frm(SearchMode),
}

impl RecoverMethod {
    pub fn bench_method(self) -> Method {
        match self {
            RecoverMethod::Uso => Method::Uso,
            RecoverMethod::Frm(SearchMode::Exhaustive) => Method::FrmExhaustive,
            RecoverMethod::Frm(SearchMode::Bracket) => Method::FrmBracket,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecoverOptions {
    pub method: RecoverMethod,
    pub delta: f64,
    pub range: PixelRange,
    /// Directory for per-corner images and search traces.
    pub dump_scans: Option<PathBuf>,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        Self {
            method: RecoverMethod::Frm(SearchMode::Exhaustive),
            delta: crate::frm::DEFAULT_DELTA,
            range: PixelRange::default(),
            dump_scans: None,
        }
    }
}

/// Per-corner diagnostics of a `recover` run.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanDiagnostics {
    pub corner: Corner,
    /// Raw value range of the corner's pre-averaging image.
    pub min: f64,
    pub max: f64,
    pub out_of_range: usize,
    pub trace: Option<SearchTrace>,
}

#[derive(Clone, Debug)]
pub struct RecoverResult {
    pub image: PixelImage,
    pub scans: Vec<ScanDiagnostics>,
    /// Pixels of the averaged, not yet finalized image outside the range.
    pub averaged_out_of_range: usize,
}

/// Recovers an image from a DC-free coefficient plane.
pub fn recover_plane(coeffs: &CoefficientPlane, opts: &RecoverOptions) -> Result<(RecoverResult, Vec<RealImage>)> {
    let plane = DcFreePlane::from_coefficients(coeffs, opts.range)?;
    let range = opts.range;
    let diag = |corner, image: &RealImage, trace| {
        let (min, max) = image.value_range();
        ScanDiagnostics { corner, min, max, out_of_range: image.count_outside(range, 1e-6), trace }
    };
    Ok(match opts.method {
        RecoverMethod::Uso => {
            let report = recover_uso_detailed(&plane)?;
            let scans = report.scans.iter().map(|s| diag(s.corner, &s.image, None)).collect();
            let images = report.scans.into_iter().map(|s| s.image).collect();
            let averaged_out_of_range = report.averaged.count_outside(range, 1e-6);
            (RecoverResult { image: report.output, scans, averaged_out_of_range }, images)
        }
        RecoverMethod::Frm(mode) => {
            let report = recover_frm_detailed(&plane, &SearchConfig::new(mode, opts.delta))?;
            let scans = report.scans.iter().map(|s| diag(s.corner, &s.image, Some(s.trace.clone()))).collect();
            let images = report.scans.into_iter().map(|s| s.image).collect();
            let averaged_out_of_range = report.averaged.count_outside(range, 1e-6);
            (RecoverResult { image: report.output, scans, averaged_out_of_range }, images)
        }
    })
}

/// `recover`: coefficient file in, PGM out.
pub fn recover(input: &Path, output: &Path, opts: &RecoverOptions) -> Result<RecoverResult> {
    if opts.range.t_min < 0 || opts.range.t_max > 255 {
        return Err(Error::InvalidValue("PGM output needs a range inside [0, 255]".into()));
    }
    let file = CoefficientFile::load(input)?;
    if !file.is_dc_stripped() {
        return Err(Error::Parse("coefficient file is not flagged as DC-stripped".into()));
    }
    let (result, images) = recover_plane(&file.plane, opts)?;
    save_pgm(output, &result.image)?;
    if let Some(dir) = &opts.dump_scans {
        dump_scans(dir, &result, &images, opts.range)?;
    }
    Ok(result)
}

fn dump_scans(dir: &Path, result: &RecoverResult, images: &[RealImage], range: PixelRange) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut ranges = csv::Writer::from_path(dir.join("scan_ranges.csv"))?;
    ranges.write_record(["corner", "min", "max", "out_of_range"])?;
    let mut summary = if result.scans.iter().any(|s| s.trace.is_some()) {
        let mut w = csv::Writer::from_path(dir.join("search_summary.csv"))?;
        w.write_record([
            "corner",
            "lo",
            "hi",
            "tie_left",
            "tie_right",
            "chosen",
            "chosen_rate",
            "min_rate",
            "evaluations",
        ])?;
        Some(w)
    } else {
        None
    };
    for (scan, image) in result.scans.iter().zip(images) {
        let label = scan.corner.label();
        save_pgm(dir.join(format!("scan_{label}.pgm")), &finalize(image, range))?;
        ranges.write_record([
            label.to_owned(),
            format_score(scan.min),
            format_score(scan.max),
            scan.out_of_range.to_string(),
        ])?;
        let (Some(trace), Some(summary)) = (&scan.trace, summary.as_mut()) else {
            continue;
        };
        let mut w = csv::Writer::from_path(dir.join(format!("trace_{label}.csv")))?;
        w.write_record(["dc0", "rate"])?;
        for (x, y) in &trace.evaluations {
            w.write_record([format_score(*x), format_score(*y)])?;
        }
        w.flush()?;
        summary.write_record([
            label.to_owned(),
            format_score(trace.interval.0),
            format_score(trace.interval.1),
            format_score(trace.tie.0),
            format_score(trace.tie.1),
            format_score(trace.chosen),
            format_score(trace.chosen_rate),
            format_score(trace.min_rate),
            trace.evaluations.len().to_string(),
        ])?;
    }
    ranges.flush()?;
    if let Some(mut w) = summary {
        w.flush()?;
    }
    Ok(())
}

/// `metrics`: one CSV line `psnr,ssim,ms_ssim`.
pub fn metrics(reference: &Path, test: &Path) -> Result<String> {
    let a = parse_pgm(&fs::read(reference)?)?;
    let b = parse_pgm(&fs::read(test)?)?;
    Ok(QualityReport::compute(&a, &b)?.to_csv_line())
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub corpus: PathBuf,
    pub report: PathBuf,
    pub plots: Option<PathBuf>,
    pub config: BenchConfig,
}

/// `bench`: runs the corpus and writes the reports. Fails with
/// [`Error::InvalidValue`] only for bad options; an empty run is reported
/// through [`BenchOutcome::image_count`].
pub fn bench(opts: &BenchOptions) -> Result<(BenchOutcome, String)> {
    if opts.config.methods.is_empty() {
        return Err(Error::InvalidValue("no methods selected".into()));
    }
    let outcome = run_bench(&opts.corpus, &opts.config)?;
    if let Some(parent) = opts.report.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let summary = write_outputs(&outcome, &opts.report, opts.plots.as_deref())?;
    Ok((outcome, summary))
}
