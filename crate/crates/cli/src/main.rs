//! `meanslab`: evaluate means, verify the inequality catalog and export
//! report rows.

mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use meanslab::report::{write_rows, OutputFormat};
use meanslab::{Error, MeanKind};

use commands::{Outcome, Printed};

#[derive(Debug, Parser)]
#[command(name = "meanslab", version, about = "Neuman-Sándor mean bounds: evaluation and verification")]
pub struct Cli {
    /// Seed for sampled verification.
    #[arg(long, global = true, env = "MEANSLAB_SEED", default_value_t = 42)]
    seed: u64,

    /// Pairs sampled per record.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Coefficient depth for the series check.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    JsonLines,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Human => OutputFormat::Human,
            Format::JsonLines => OutputFormat::JsonLines,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(flatten)]
    Report(Report),
    /// Re-run a report and write it as json-lines (or csv with `--format csv`).
    Export {
        #[command(subcommand)]
        report: Report,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Report {
    /// Evaluate one mean.
    Eval {
        /// Mean name, e.g. `arithmetic`, `neuman-sandor`, `identric`, `lp:2`.
        #[arg(long, value_parser = parse_mean)]
        mean: MeanKind,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    /// Every sharp constant with its exact expression and 30 digits.
    Constants,
    /// Sampled verification of the whole catalog.
    VerifyAll,
    /// Verify one record, at a pair or by sampling.
    Verify {
        #[arg(long)]
        record: String,
        #[arg(long, requires = "b", allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, requires = "a", allow_negative_numbers = true)]
        b: Option<f64>,
    },
    /// Exact coefficient checks for the three lemma series.
    SeriesCheck,
    /// `(theta, h(theta))` rows for plotting.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        h: u8,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        points: u64,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        /// Defaults to `ln(1 + sqrt 2)`.
        #[arg(long)]
        to: Option<f64>,
    },
    /// Tighten sharp constants and search for violating pairs.
    Sharpness {
        /// Probe one record; all sharp records by default.
        #[arg(long)]
        record: Option<String>,
        #[arg(long, default_value_t = meanslab::catalog::DEFAULT_PROBE_EPSILON, allow_negative_numbers = true)]
        epsilon: f64,
    },
    /// The exponent `p0` with `(p0 + 1)^(1/p0) = 2 ln(1 + sqrt 2)`.
    P0,
}

fn parse_mean(s: &str) -> Result<MeanKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit(cli: &Cli, printed: &Printed, format: OutputFormat) -> io::Result<()> {
    let out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(out);
    match (&printed.human, format) {
        (Some(text), OutputFormat::Human) => out.write_all(text.as_bytes())?,
        _ => write_rows(&printed.rows, format, &mut out)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, format) = match &cli.command {
        Command::Report(r) => (r, cli.format.into()),
        Command::Export { report } => {
            let format = match cli.format {
                Format::Human => OutputFormat::JsonLines,
                f => f.into(),
            };
            (report, format)
        }
    };
    let config = commands::Config {
        seed: cli.seed,
        samples: cli.samples as usize,
        depth: cli.depth as usize,
    };
    match commands::run(report, &config) {
        Ok(Outcome { printed, pass }) => {
            if let Err(e) = emit(&cli, &printed, format) {
                eprintln!("meanslab: {e}");
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("meanslab: {e}");
            ExitCode::from(2)
        }
    }
}
