use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dc_recovery::bench::{BenchConfig, Method};
use dc_recovery::cli::{self, exit, BenchOptions, RecoverMethod, RecoverOptions, StripOptions};
use dc_recovery::{PixelRange, SearchMode};

#[derive(Parser)]
#[command(name = "dcrec", version, about = "Recover block-DCT DC coefficients from AC coefficients")]
struct Cli {
    /// Block size N.
    #[arg(long, global = true, default_value_t = 8)]
    block_size: usize,
    /// Valid pixel range as `min,max`.
    #[arg(long, global = true, default_value = "0,255", value_parser = parse_range)]
    range: PixelRange,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the DC-free coefficient file of a PGM image.
    Strip {
        input: PathBuf,
        output: PathBuf,
        /// Also write a viewable PGM of the DC-free plane.
        #[arg(long)]
        preview: Option<PathBuf>,
        /// Also write the true DC of every block as CSV.
        #[arg(long)]
        dc_sidecar: Option<PathBuf>,
    },
    /// Recover an image from a DC-free coefficient file.
    Recover {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Frm)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = SearchArg::Exhaustive)]
        search: SearchArg,
        /// Search step in DC units.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Directory for per-corner images and search traces.
        #[arg(long)]
        dump_scans: Option<PathBuf>,
    },
    /// Print `psnr,ssim,ms_ssim` for a reference and a test image.
    Metrics { reference: PathBuf, test: PathBuf },
    /// Benchmark every PGM in a corpus directory.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plots: Option<PathBuf>,
        /// Comma-separated: uso, frm-exhaustive, frm-bracket.
        #[arg(long, value_delimiter = ',', default_value = "uso,frm-exhaustive,frm-bracket")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Uso,
    Frm,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Exhaustive,
    Bracket,
}

fn parse_range(s: &str) -> Result<PixelRange, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected min,max")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad minimum {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad maximum {hi:?}"))?;
    PixelRange::new(lo, hi).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<i32, dc_recovery::Error> {
    match cli.command {
        Command::Strip { input, output, preview, dc_sidecar } => {
            cli::strip(&input, &output, &StripOptions { block_size: cli.block_size, preview, dc_sidecar })?;
        }
        Command::Recover { input, output, method, search, delta, dump_scans } => {
            let method = match (method, search) {
                (MethodArg::Uso, _) => RecoverMethod::Uso,
                (MethodArg::Frm, SearchArg::Exhaustive) => RecoverMethod::Frm(SearchMode::Exhaustive),
                (MethodArg::Frm, SearchArg::Bracket) => RecoverMethod::Frm(SearchMode::Bracket),
            };
            let opts = RecoverOptions { method, delta, range: cli.range, dump_scans };
            let result = cli::recover(&input, &output, &opts)?;
            for s in &result.scans {
                let chosen = s.trace.as_ref().map(|t| format!(" dc0={:.3} rate={:.6}", t.chosen, t.chosen_rate));
                eprintln!(
                    "{}: range [{:.1}, {:.1}] out_of_range={}{}",
                    s.corner.label(),
                    s.min,
                    s.max,
                    s.out_of_range,
                    chosen.unwrap_or_default()
                );
            }
        }
        Command::Metrics { reference, test } => {
            println!("{}", cli::metrics(&reference, &test)?);
        }
        Command::Bench { corpus, out, plots, methods, delta } => {
            let config = BenchConfig { methods, delta, block_size: cli.block_size, range: cli.range };
            let (outcome, summary) = cli::bench(&BenchOptions { corpus, report: out, plots, config })?;
            print!("{summary}");
            if outcome.image_count() == 0 {
                eprintln!("no images processed");
                return Ok(exit::EMPTY_BENCH);
            }
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
