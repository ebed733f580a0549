use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdiscrim_cli::{
    cmd_bounds, cmd_copies, cmd_verify, render, run_sweep, CliError, OutputFormat, StateKind, SweepConfig,
    EXIT_VERIFY_FAILED,
};
use qdiscrim_core::PriorKind;

/// Bounds on the minimum error probability of quantum state discrimination.
#[derive(Parser)]
#[command(name = "qdiscrim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a JSON report of every applicable bound for an ensemble file.
    Bounds {
        /// Ensemble JSON file: {"dim": d, "entries": [{"prob": p, "matrix": [[[re, im], ...], ...]}, ...]}.
        #[arg(long)]
        ensemble: PathBuf,
        /// Also run the certified measurement optimizer.
        #[arg(long)]
        optimize: bool,
    },
    /// Evaluate the bounds on seeded random ensembles, one row per trial.
    Sweep {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        dim_min: usize,
        #[arg(long, default_value_t = 4)]
        dim_max: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Pure)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = PriorArg::Uniform)]
        priors: PriorArg,
        /// Base seed; trial i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fill the `optimized` column with the optimizer's error probability.
        #[arg(long)]
        optimize: bool,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Write 0.000 in the seconds column so output is byte-for-byte reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Numerically check every step of the fidelity lower bound's proof.
    /// Exits with 1 if any slack is below -tol or any residual above tol.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on the copies needed to reach a target error probability.
    Copies {
        /// Lower bound on every pairwise fidelity, in (0, 1).
        #[arg(long)]
        fidelity: f64,
        /// Target error probability, in (0, 1).
        #[arg(long)]
        epsilon: f64,
        /// Number of equiprobable states; adds the error floor at the computed copy count.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = CopiesFormat::Text)]
        format: CopiesFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Pure,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Uniform,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CopiesFormat {
    Text,
    Json,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bounds { ensemble, optimize } => {
            print!("{}", cmd_bounds(&ensemble, optimize)?);
        }
        Command::Sweep {
            trials,
            n_min,
            n_max,
            dim_min,
            dim_max,
            kind,
            priors,
            seed,
            optimize,
            out,
            format,
            no_timing,
        } => {
            let config = SweepConfig {
                trials,
                n_range: (n_min, n_max),
                dim_range: (dim_min, dim_max),
                kind: match kind {
                    KindArg::Pure => StateKind::Pure,
                    KindArg::Mixed => StateKind::Mixed,
                },
                priors: match priors {
                    PriorArg::Uniform => PriorKind::Uniform,
                    PriorArg::Dirichlet => PriorKind::Dirichlet,
                },
                seed,
                optimize,
                timing: !no_timing,
            };
            let rows = run_sweep(&config)?;
            let uncertified: Vec<u64> = rows
                .iter()
                .filter(|r| r.certified == Some(false))
                .map(|r| r.seed)
                .collect();
            if !uncertified.is_empty() {
                eprintln!(
                    "warning: optimizer not certified for {} trial(s), seeds {uncertified:?}",
                    uncertified.len()
                );
            }
            let format = match format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
            emit(&render(&rows, format), out.as_ref())?;
        }
        Command::Verify { trials, seed, tol, out } => {
            let outcome = cmd_verify(trials, seed, tol)?;
            emit(&outcome.json, out.as_ref())?;
            if !outcome.passed() {
                for line in outcome.failure_lines() {
                    eprintln!("{line}");
                }
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Copies {
            fidelity,
            epsilon,
            n,
            format,
        } => {
            let r = cmd_copies(fidelity, epsilon, n)?;
            match format {
                CopiesFormat::Text => print!("{}", r.to_text()),
                CopiesFormat::Json => print!("{}", r.to_json()),
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
