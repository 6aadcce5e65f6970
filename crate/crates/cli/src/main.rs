//! `lefschetz`: pencil files and numerical verification suites from the shell.
//!
//! Exit status: 0 when everything checked holds, 1 when a check ran and
//! failed, 2 for usage or input errors.

mod pencil_cmd;
mod verify_cmd;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "lefschetz", version, about = "Lefschetz pencil monodromy and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on pencil files.
    #[command(subcommand)]
    Pencil(PencilCommand),
    /// Numerical verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PencilCommand {
    /// Check a pencil file; with --closed also require trivial total monodromy.
    Validate {
        file: PathBuf,
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Apply a Hurwitz move and print the resulting pencil.
    Hurwitz {
        file: PathBuf,
        /// Braid word such as "s1 S2".
        #[arg(long)]
        braid: String,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate and classify arcs with carriers up to the given length.
    Matching {
        file: PathBuf,
        #[arg(long = "max-len")]
        max_len: usize,
        /// Take algebraic intersection numbers at face value in Sp models.
        #[arg(long = "trust-algebraic")]
        trust_algebraic: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether an automorphism preserves the monodromy data.
    GammaCheck {
        file: PathBuf,
        #[arg(long)]
        auto: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate the Hurwitz orbit up to a number of elementary moves.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Build the cutoff profile and check its slope inequality and endpoints.
    Cutoff {
        #[arg(long)]
        k: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long)]
        c0: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Observed bounds of the deformed Morse function near one critical point.
    Deform {
        #[arg(long)]
        k: f64,
        #[arg(long = "D")]
        d: f64,
        /// Defaults to D.
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of negative squares.
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value_t = 400)]
        radii: usize,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Search for transverse perturbations of random or given instances.
    Localtrans {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.2)]
        kappa: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 2)]
        pexp: u32,
        #[arg(long = "max-degree", default_value_t = 4)]
        max_degree: usize,
        /// Grid points per real axis.
        #[arg(long, default_value_t = 201)]
        resolution: usize,
        #[arg(long = "c-factor", default_value_t = 4.0)]
        c_factor: f64,
        /// Required fraction of certified instances.
        #[arg(long = "min-success", default_value_t = 0.95)]
        min_success: f64,
        /// Run a single instance from a file instead of random ones.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check the Jacobian of x ↦ l(|x|)·x on random admissible samples.
    Radial {
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// A failed run: either bad input (exit 2) or a check that did not hold (exit 1).
pub enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Report and whether every hard check passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

pub fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(outcome: &Outcome, output: &Output) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&outcome.report)? + "\n";
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(Outcome, Output), Failure> {
    Ok(match cli.command {
        Command::Pencil(c) => match c {
            PencilCommand::Validate { file, closed, output } => (pencil_cmd::validate(&file, closed)?, output),
            PencilCommand::Hurwitz { file, braid, output } => (pencil_cmd::hurwitz(&file, &braid)?, output),
            PencilCommand::Matching { file, max_len, trust_algebraic, output } => {
                (pencil_cmd::matching(&file, max_len, trust_algebraic)?, output)
            }
            PencilCommand::GammaCheck { file, auto, output } => (pencil_cmd::gamma_check(&file, &auto)?, output),
            PencilCommand::Orbit { file, depth, output } => (pencil_cmd::orbit(&file, depth)?, output),
        },
        Command::Verify(c) => match c {
            VerifyCommand::Cutoff { k, d, c0, samples, output } => (verify_cmd::cutoff(k, d, c0, samples)?, output),
            VerifyCommand::Deform { k, d, c0, n, index, radii, directions, output } => {
                (verify_cmd::deform(k, d, c0.unwrap_or(d), n, index, radii, directions)?, output)
            }
            VerifyCommand::Localtrans {
                seed,
                trials,
                kappa,
                delta,
                pexp,
                max_degree,
                resolution,
                c_factor,
                min_success,
                instance,
                output,
            } => {
                let params = verify_cmd::LocalParams {
                    seed,
                    trials,
                    kappa,
                    delta,
                    pexp,
                    max_degree,
                    resolution,
                    c_factor,
                    min_success,
                };
                (verify_cmd::localtrans(&params, instance.as_ref())?, output)
            }
            VerifyCommand::Radial { samples, seed, output } => (verify_cmd::radial(samples, seed)?, output),
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(outcome, output)| {
        emit(&outcome, &output)?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
