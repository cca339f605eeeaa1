//! `ci-slope`: slope bounds, fibration invariants, the slope elimination and
//! the singularity signature bound, as deterministic JSON reports.

mod commands;
mod report;

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::report::{Format, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "ci-slope",
    version,
    about = "Exact invariants of complete-intersection fibrations and surface singularities"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Slope bound lambda(n, d), with e', the fiber genus and r
    #[command(allow_negative_numbers = true)]
    Slope {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
    },
    /// K2, chi and slope equality for a complete-intersection family in P(E)
    #[command(allow_negative_numbers = true)]
    Fibration {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        /// genus of the base curve
        #[arg(long)]
        b: i64,
        #[arg(long = "deg-e")]
        deg_e: i64,
        /// a_1,...,a_(n-1)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        coeffs: Vec<i64>,
    },
    /// Milnor fiber signature against the bound for a smoothable singularity
    #[command(allow_negative_numbers = true)]
    Singularity {
        #[arg(long = "emb-dim")]
        emb_dim: i64,
        #[arg(long)]
        pg: i64,
        #[arg(long)]
        k2: i64,
        /// number of exceptional curves
        #[arg(long)]
        exc: i64,
        #[arg(long)]
        mu0: i64,
        /// also report the bound under the alternative index convention
        #[arg(long)]
        verbose: bool,
    },
    /// Coefficients of K2 after eliminating deg f_*L
    #[command(allow_negative_numbers = true)]
    Eliminate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = commands::DEFAULT_M)]
        m: i64,
    },
    /// Run every identity check over a grid (CI_SLOPE_GRID overrides the default)
    Verify {
        /// n range, e.g. 2..6
        #[arg(long = "grid-n")]
        grid_n: Option<String>,
        /// d range, e.g. 2..6
        #[arg(long = "grid-d")]
        grid_d: Option<String>,
        /// m values, e.g. 5,10,100
        #[arg(long = "grid-m")]
        grid_m: Option<String>,
    },
    /// Read newline-delimited JSON requests from stdin, one report per line
    Batch,
}

fn emit(out: &mut impl Write, outcome: &Outcome, format: Format, compact: bool) -> io::Result<i32> {
    let (report, code) = match outcome {
        Ok(r) => (r, 0),
        Err(f) => {
            if let Some(d) = f.report.diagnostics.last() {
                eprintln!("error: {d}");
            }
            (&f.report, f.code)
        }
    };
    writeln!(out, "{}", report.render(format, compact))?;
    Ok(code)
}

fn run_batch(format: Format) -> io::Result<i32> {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut worst = 0;
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let code = emit(&mut out, &commands::batch_line(&line), format, true)?;
        worst = worst.max(code);
    }
    Ok(worst)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    let format = cli.format;
    let outcome = match cli.command {
        Command::Slope { n, d } => commands::slope(n, d),
        Command::Fibration {
            n,
            d,
            b,
            deg_e,
            coeffs,
        } => commands::fibration(n, d, b, deg_e, coeffs),
        Command::Singularity {
            emb_dim,
            pg,
            k2,
            exc,
            mu0,
            verbose,
        } => commands::singularity(emb_dim, pg, k2, exc, mu0, verbose),
        Command::Eliminate { n, d, m } => commands::elimination(n, d, m),
        Command::Verify {
            grid_n,
            grid_d,
            grid_m,
        } => {
            let env = std::env::var("CI_SLOPE_GRID").ok();
            commands::run_verify(
                env.as_deref(),
                grid_n.as_deref(),
                grid_d.as_deref(),
                grid_m.as_deref(),
            )
        }
        Command::Batch => {
            return match run_batch(format) {
                Ok(code) => ExitCode::from(code as u8),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_USAGE as u8)
                }
            };
        }
    };
    match emit(&mut io::stdout().lock(), &outcome, format, false) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
