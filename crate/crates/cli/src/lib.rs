//! Command-line front end for `w1simplex`.
//!
//! Each subcommand builds a [`output::Report`] and the same report is encoded
//! as a JSON envelope or as CSV. Exit codes: 0 on success, 1 when `verify`
//! finds a failing suite, 2 on usage or parameter errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod output;

pub use output::{Cell, Envelope, Report, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "w1simplex",
    version,
    about = "Exact and Monte Carlo moments of the 1-Wasserstein distance on the probability simplex"
)]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Significant digits for floating-point fields.
    #[arg(long, global = true, default_value_t = 4,
          value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "V", alias = "v")]
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Show {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "L", alias = "l")]
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    FlipF1Sign,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and float moments of W1 for a range of n.
    Moments {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// The moment polynomial F_n, G_n or V_n, highest s-degree first.
    Poly {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// The M or L grid of the combinatorial recurrence, indices from 0.
    Recurrence {
        #[arg(long, default_value_t = 6)]
        p_max: u32,
        #[arg(long, default_value_t = 6)]
        q_max: u32,
        #[arg(long, value_enum, default_value_t = Show::L)]
        show: Show,
    },
    /// Monte Carlo estimate of the first two moments, with a histogram.
    Mc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Worker threads. The result does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sampled closed-form density of X_2 or X_3, with its audit.
    Density {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Also compare against a Monte Carlo histogram with this many samples.
        #[arg(long, default_value_t = 0)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Run every cross-check suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] w1simplex::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_USAGE
    }
}

/// A finished command: the report plus whether `verify` failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.failure.is_some() {
            EXIT_VERIFY_FAILED
        } else {
            EXIT_OK
        }
    }
}

pub fn execute(command: &Command, digits: usize) -> Result<Outcome, CliError> {
    commands::run(command, digits)
}

/// Encodes a report in the requested format.
pub fn render<W: Write>(
    report: &Report,
    format: Format,
    digits: usize,
    out: &mut W,
) -> io::Result<()> {
    match format {
        Format::Json => report.write_json(out, digits),
        Format::Csv => report.write_csv(out, digits),
    }
}

/// Runs a parsed command line end to end and returns the exit code. Errors
/// and verification failures go to stderr.
pub fn run(cli: &Cli) -> u8 {
    let digits = usize::from(cli.digits);
    let outcome = match execute(&cli.command, digits) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            render(&outcome.report, cli.format, digits, &mut w)?;
            w.flush()
        }),
        None => {
            let mut w = io::stdout().lock();
            render(&outcome.report, cli.format, digits, &mut w).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {}", CliError::Io(e));
        return EXIT_USAGE;
    }
    if let Some(msg) = &outcome.failure {
        eprintln!("verification failed: {msg}");
    }
    outcome.exit_code()
}
