//! Command-line front end of the `qlaplace` binary.
//!
//! Exit codes: 0 success, 1 self-test failure, 2 configuration error,
//! 3 numerical failure or non-converged rows.

pub mod config;
pub mod invert;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::checks;
use crate::error::{Error, Result};
use config::{InvertRequest, MethodKind, OutputFormat, SweepRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping worker threads; `0` or unset means automatic.
pub const THREADS_ENV: &str = "QLAPLACE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qlaplace", version, about = "q-Laplace transforms: grid sweeps, closed-form comparison, inversion and self-test")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a transform on a (p, q) grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to `output.path` of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Exit 0 even if some rows did not reach the requested tolerance.
        #[arg(long)]
        allow_nonconverged: bool,
    },
    /// Run every acceptance check and report pass or fail.
    Selftest {
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
    /// Recover a function from its transform at q close to one.
    Invert {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) | Error::InvalidParameter(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} = {v:?} is not a non-negative integer")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn sweep(config: &Path, out: Option<PathBuf>, format: Option<OutputFormat>, allow_nonconverged: bool) -> Result<i32> {
    let req = SweepRequest::from_file(config)?;
    let spec_out = req.output.clone();
    let out = out
        .or_else(|| spec_out.as_ref().and_then(|o| o.path.clone()))
        .ok_or_else(|| Error::Config("no output path: pass --out or set output.path".into()))?;
    let format = format.or(spec_out.map(|o| o.format)).unwrap_or_default();
    let rows = thread_pool()?.install(|| sweep::run_sweep(&req));
    let text = match format {
        OutputFormat::Csv => sweep::render_csv(&rows)?,
        OutputFormat::Json => sweep::render_json(&rows)?,
    };
    write_file(&out, &text)?;
    let failed: Vec<_> = rows.iter().filter(|r| r.failed()).collect();
    for r in &failed {
        eprintln!(
            "error at p = {}{:+}i, q = {} ({}): {}",
            r.re_p,
            r.im_p,
            r.q,
            r.method.as_str(),
            r.error.as_deref().unwrap_or("")
        );
    }
    let unsupported = rows.iter().filter(|r| !r.failed() && r.method == MethodKind::Closedform && !r.converged).count();
    if unsupported > 0 {
        eprintln!("{unsupported} closed-form row(s) outside the supported envelope");
    }
    let nonconverged = rows
        .iter()
        .filter(|r| !r.failed() && r.method != MethodKind::Closedform && !r.converged)
        .count();
    if !failed.is_empty() {
        return Ok(EXIT_NUMERICAL);
    }
    if nonconverged > 0 {
        eprintln!("{nonconverged} row(s) did not converge");
        if !allow_nonconverged {
            return Ok(EXIT_NUMERICAL);
        }
    }
    Ok(EXIT_OK)
}

fn selftest(json: bool, tolerance_scale: f64) -> Result<i32> {
    if !(tolerance_scale >= 0.0) {
        return Err(Error::Config(format!("tolerance scale {tolerance_scale} must be >= 0")));
    }
    let reports = thread_pool()?.install(|| checks::run_all(tolerance_scale));
    if json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            println!("{}", r.line());
        }
        let passed = reports.iter().filter(|r| r.passed).count();
        println!("{passed}/{} checks passed", reports.len());
    }
    Ok(if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_SELFTEST_FAILED
    })
}

fn invert(config: &Path, out: &Path) -> Result<i32> {
    let req = InvertRequest::from_file(config)?;
    let report = thread_pool()?.install(|| invert::run_invert(&req))?;
    write_file(out, &invert::render_csv(&report)?)?;
    println!("{}", invert::summary_line(&report));
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Sweep {
            config,
            out,
            format,
            allow_nonconverged,
        } => sweep(&config, out, format, allow_nonconverged),
        Command::Selftest { json, tolerance_scale } => selftest(json, tolerance_scale),
        Command::Invert { config, out } => invert(&config, &out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qlaplace: {e}");
            exit_code(&e)
        }
    }
}
