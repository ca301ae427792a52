//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logchol::Metric;

use crate::error::{Result, EXIT_OK, EXIT_USAGE};
use crate::experiments::{bench, interpolate, mean, mean_gap, stability};
use crate::fixtures;
use crate::glyph::write_glyphs;
use crate::report::ExperimentReport;

#[derive(Debug, Parser)]
#[command(name = "logchol", version, about = "Experiments on Log-Cholesky and comparator SPD geometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolate between two SPD matrices and report determinants.
    Interpolate(InterpolateArgs),
    /// Average a set of SPD matrices and check the determinant identity.
    Mean(MeanArgs),
    /// Time parallel transport under three metrics.
    BenchTransport(BenchArgs),
    /// Round-trip and averaging accuracy on ill-conditioned inputs.
    Stability(StabilityArgs),
    /// Relative gap between Log-Cholesky and affine-invariant means.
    MeanGap(MeanGapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: logchol::Error| e.to_string())
}

/// A single metric name or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSet(pub Vec<Metric>);

fn parse_metrics(s: &str) -> std::result::Result<MetricSet, String> {
    if s == "all" {
        Ok(MetricSet(Metric::ALL.to_vec()))
    } else {
        parse_metric(s).map(|m| MetricSet(vec![m]))
    }
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    /// Metric name, or `all`.
    #[arg(long, default_value = "log-cholesky", value_parser = parse_metrics)]
    pub metric: MetricSet,
    /// Number of points including both endpoints.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    /// Fixture file with two matrices, `builtin:tensors` or `builtin:swelling`.
    #[arg(long, default_value = "builtin:tensors")]
    pub input: String,
    /// Also write ellipsoid glyphs as JSON lines.
    #[arg(long)]
    pub glyphs: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, default_value = "log-cholesky", value_parser = parse_metric)]
    pub metric: Metric,
    /// Fixture file; random matrices are drawn when omitted.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 1e10)]
    pub kappa: f64,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Size of the averaged set.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MeanGapArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn emit(report: &ExperimentReport, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut sink: Box<dyn Write + '_> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    };
    match output.format {
        Format::Json => sink.write_all(report.to_json()?.as_bytes())?,
        Format::Csv => report.write_csv(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Interpolate(a) => {
            let fixture = fixtures::load(&a.input)?;
            let out = interpolate::run(&interpolate::InterpolateConfig { metrics: a.metric.0, steps: a.steps, fixture })?;
            if let Some(path) = &a.glyphs {
                let mut w = BufWriter::new(File::create(path)?);
                write_glyphs(&mut w, &out.glyphs)?;
                w.flush()?;
            }
            emit(&out.report, &a.output, stdout)
        }
        Command::Mean(a) => {
            let (fixture, seed) = match &a.input {
                Some(source) => (fixtures::load(source)?, None),
                None => (fixtures::random_set(a.n, a.m, a.seed), Some(a.seed)),
            };
            let report = mean::run(&mean::MeanConfig { metric: a.metric, fixture, seed })?;
            emit(&report, &a.output, stdout)
        }
        Command::BenchTransport(a) => {
            let report = bench::run(&bench::BenchConfig { m: a.m, reps: a.reps, seed: a.seed })?;
            emit(&report, &a.output, stdout)
        }
        Command::Stability(a) => {
            let cfg = stability::StabilityConfig { kappa: a.kappa, m: a.m, n: a.n, seed: a.seed };
            emit(&stability::run(&cfg)?, &a.output, stdout)
        }
        Command::MeanGap(a) => {
            let cfg = mean_gap::MeanGapConfig { n: a.n, m: a.m, trials: a.trials, seed: a.seed };
            emit(&mean_gap::run(&cfg)?, &a.output, stdout)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    run(std::env::args_os(), &mut stdout, &mut stderr)
}
