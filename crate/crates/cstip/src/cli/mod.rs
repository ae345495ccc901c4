//! Command-line front end: `cstip <analyze|fields|jint|sweep|verify>`.

mod commands;
mod config;

pub use commands::*;
pub use config::*;

use clap::{ArgAction, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use crate::error::Error;
use crate::verify::DEFAULT_TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cstip", version, about = "Antiplane interface-crack asymptotics in couple-stress elasticity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; defaults to the homogeneous unit CS_CS pair.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Compare regenerated asymptotics against the printed blocks as-is.
    #[arg(long, global = true, value_name = "BOOL", action = ArgAction::Set)]
    pub strict_paper: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// κ, case, exponents and mode shapes.
    Analyze,
    /// Near-tip fields on a polar grid as CSV.
    Fields,
    /// J-integral on the configured radii.
    Jint,
    /// κ over a parameter range as CSV.
    Sweep,
    /// Run the verification suites.
    Verify,
}

/// Exit code for an error: 2 for anything the input could fix, else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EtaOutOfRange { .. }
        | Error::NonPositiveModulus { .. }
        | Error::PoissonOutOfRange { .. }
        | Error::InvalidLength { .. }
        | Error::ProblemKindMismatch(_)
        | Error::Config(_)
        | Error::EtaNotOne { .. }
        | Error::UnsupportedEtaClosedForm { .. }
        | Error::UnusedAmplitude { .. }
        | Error::OrderBeyondTruncation { .. }
        | Error::InvalidWindow { .. }
        | Error::RadiusNonPositive { .. }
        | Error::UnbalancedEdge { .. }
        | Error::KappaNonPositive { .. }
        | Error::SpecialLambda { .. }
        | Error::EtaDegenerate => EXIT_CONFIG,
        _ => EXIT_VERIFY,
    }
}

/// `CSTIP_TOL`, or the default when unset.
pub fn tolerance_from_env() -> Result<f64, Error> {
    match std::env::var("CSTIP_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Error::Config(format!("CSTIP_TOL must be a positive number, got {s:?}"))),
        },
    }
}

fn diagnostic(e: &Error) {
    let code = exit_code(e);
    let d = serde_json::json!({ "error": e.to_string(), "kind": format!("{e:?}").split([' ', '(', '{']).next(), "exit_code": code });
    eprintln!("{d}");
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes()).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let tol = tolerance_from_env()?;
    let run = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default_run(),
    };
    let strict = cli.strict_paper.or(run.strict_paper).unwrap_or(true);
    match cli.command {
        Command::Analyze => {
            emit(&cli.out, &to_json(&cmd_analyze(&run)?))?;
            Ok(EXIT_OK)
        }
        Command::Fields => {
            emit(&cli.out, &cmd_fields(&run)?)?;
            Ok(EXIT_OK)
        }
        Command::Jint => {
            let j = cmd_jint(&run)?;
            emit(&cli.out, &to_json(&j))?;
            Ok(if jint_ok(&j) { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Sweep => {
            emit(&cli.out, &cmd_sweep(&run)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let report = cmd_verify(&run, tol, strict)?;
            for s in &report.suites {
                eprintln!(
                    "{} {:<36} {:<24} residual={:e} tol={:e}",
                    if s.pass { "PASS" } else { "FAIL" },
                    s.suite,
                    s.problem,
                    s.residual,
                    s.tolerance
                );
            }
            emit(&cli.out, &to_json(&report))?;
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            diagnostic(&e);
            exit_code(&e)
        }
    }
}
