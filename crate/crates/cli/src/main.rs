//! `convrep` command line: builds representations, runs the averaging iteration,
//! queries enlargements and runs the property suite from a JSON config.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "convrep",
    version,
    about = "Convex representations of monotone operators on grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config; the built-in quadratic setting when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (a directory for `aiterate`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_name = "R")]
    pub epsilon: Option<f64>,
    /// Primal point, comma-separated coordinates.
    #[arg(long, global = true, value_name = "R[,R]", allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, global = true)]
    pub kind: Option<Kind>,
    /// Representation: fy, fitz, sigma or mix:LAMBDA (LAMBDA f^FY + (1 - LAMBDA) F).
    #[arg(long, global = true, value_name = "H", value_parser = parse_h)]
    pub h: Option<HChoice>,
    #[arg(long, global = true, value_name = "N")]
    pub max_iter: Option<usize>,
    /// Tolerance of the command's check: membership for enlarge/transport, discretization otherwise.
    #[arg(long, global = true, value_name = "R")]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Grid conjugate of the configured function on the dual grid.
    Conjugate,
    /// f(x) + f*(x*) on the bifunction grid.
    FenchelYoung,
    /// Fitzpatrick function of the configured operator.
    Fitzpatrick,
    /// sigma_T, the swap conjugate of the Fitzpatrick function.
    Sigma,
    /// Iterates the averaging operator until the stopping rule holds.
    Aiterate,
    /// Member set E(epsilon, x) of an enlargement.
    Enlarge,
    /// Transportation formula for two members.
    Transport {
        /// First member as EPS:X:XSTAR, coordinates comma-separated.
        #[arg(long, value_name = "EPS:X:XSTAR", allow_hyphen_values = true)]
        m1: String,
        #[arg(long, value_name = "EPS:X:XSTAR", allow_hyphen_values = true)]
        m2: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Runs the property suite; exit status 1 when a criterion fails.
    Verify,
    /// Plot CSV of a representation (--h) or of an enlargement (--kind).
    PlotData,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Be,
    Se,
    Breve,
    Epsdiff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HChoice {
    Fy,
    Fitz,
    Sigma,
    Mix(f64),
}

fn parse_h(s: &str) -> Result<HChoice, String> {
    match s {
        "fy" => Ok(HChoice::Fy),
        "fitz" => Ok(HChoice::Fitz),
        "sigma" => Ok(HChoice::Sigma),
        _ => {
            let lam = s
                .strip_prefix("mix:")
                .ok_or_else(|| format!("expected fy, fitz, sigma or mix:LAMBDA, got {s:?}"))?;
            let l: f64 = lam.parse().map_err(|_| format!("bad mix weight {lam:?}"))?;
            if (0.0..=1.0).contains(&l) {
                Ok(HChoice::Mix(l))
            } else {
                Err(format!("mix weight {l} not in [0, 1]"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
