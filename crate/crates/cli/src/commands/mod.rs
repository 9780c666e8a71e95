mod counterexample;
mod immanant;
mod scalar;
mod verify;

use std::time::Instant;

use hlawka_core::gmf::{read_character_table_file, CharacterSpec, GroupSpec, Partition};
use hlawka_core::{Error, Result};

use crate::args::{Cli, Command, CommonArgs};
use crate::report::TrialReport;
use crate::{EXIT_OK, EXIT_VIOLATION};

pub use counterexample::counterexample_report;
pub use immanant::immanant_value;
pub use scalar::scalar_verify_report;
pub use verify::verify_report;

/// A finished report and whether its violations should fail the run.
pub struct RunResult {
    pub report: TrialReport,
    pub fails: bool,
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Verify(a) => run_report(&a.common, || verify_report(a)),
        Command::Counterexample(a) => run_report(&a.common, || counterexample_report(a)),
        Command::ScalarVerify(a) => run_report(&a.common, || scalar_verify_report(a)),
        Command::Immanant(a) => {
            let text = with_pool(&a.common, || immanant::render(a))?;
            match &a.common.out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_report(common: &CommonArgs, f: impl FnOnce() -> Result<RunResult> + Send) -> Result<u8> {
    let start = Instant::now();
    let mut result = with_pool(common, f)?;
    result.report.runtime_ms = start.elapsed().as_millis() as u64;
    result
        .report
        .write(common.report_format(), common.out.as_deref())?;
    if common.out.is_some() {
        let r = &result.report;
        eprintln!(
            "{}: {} trials, {} violations",
            r.family,
            r.trials,
            r.violations.len()
        );
    }
    Ok(if result.fails {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn with_pool<T: Send>(common: &CommonArgs, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return Err(Error::Parameter("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    pool.install(f)
}

pub(crate) fn tolerance(common: &CommonArgs, default: f64) -> Result<f64> {
    let tol = common.tol.unwrap_or(default);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Parameter(format!(
            "--tol must be finite and >= 0, got {tol}"
        )));
    }
    Ok(tol)
}

/// `det`, `perm`, `partition=<parts>` or `table=<path>`; `dim` fixes the
/// symmetric group degree for `det` and `perm`.
pub fn parse_character(selector: &str, dim: usize) -> Result<(GroupSpec, CharacterSpec)> {
    match selector.split_once('=') {
        None if selector == "det" => Ok((GroupSpec::FullSymmetric(dim), CharacterSpec::Sign)),
        None if selector == "perm" => Ok((GroupSpec::FullSymmetric(dim), CharacterSpec::Trivial)),
        Some(("partition", parts)) => {
            let lambda: Partition = parts.parse()?;
            Ok((
                GroupSpec::FullSymmetric(lambda.size()),
                CharacterSpec::Partition(lambda),
            ))
        }
        Some(("table", path)) => read_character_table_file(path),
        _ => Err(Error::Parameter(format!(
            "unknown character '{selector}' (expected det, perm, partition=<parts> or table=<path>)"
        ))),
    }
}
