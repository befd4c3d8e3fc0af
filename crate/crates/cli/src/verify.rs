//! `verify`: randomized identity suites.

use crate::error::CliError;
use clap::Args;
use ellip_core::verify::{run_all, run_suite, Suite, VerificationReport, VerifyConfig};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ELLIP_LIMITS_THREADS";

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials per suite (default: the suite's own count).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Tolerance for cases without a fixed tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Include wall-clock seconds in the report.
    #[arg(long)]
    pub timing: bool,
    /// JSON report (default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// One CSV row per suite followed by one per failure.
    #[arg(long)]
    pub csv: bool,
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Parse(format!("{THREADS_ENV}={s:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

pub fn run(args: &VerifyArgs) -> Result<VerificationReport, CliError> {
    if let Some(tol) = args.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Parse(format!("--tol must be positive, got {tol}")));
        }
    }
    let cfg = VerifyConfig { seed: args.seed, trials: args.trials, tol: args.tol, timing: args.timing, threads: threads()? };
    let report = if args.suite.eq_ignore_ascii_case("all") {
        run_all(&cfg)?
    } else {
        let suite = Suite::parse(&args.suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            CliError::Parse(format!("unknown suite {:?}; expected one of {} or all", args.suite, names.join(", ")))
        })?;
        run_suite(suite, &cfg)?
    };
    Ok(report)
}

pub fn to_csv(report: &VerificationReport) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Parse(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "suite", "trials_or_case", "cases_or_lhs", "failures_or_rhs", "max_rel_err_or_rel_err", "tol", "seed", "elapsed"])
        .map_err(io)?;
    let rows: Vec<&VerificationReport> = if report.suites.is_empty() { vec![report] } else { report.suites.iter().collect() };
    let elapsed = |r: &VerificationReport| r.elapsed.map(|x| x.to_string()).unwrap_or_default();
    for r in &rows {
        w.write_record([
            "suite".to_string(),
            r.suite.clone(),
            r.trials.to_string(),
            r.cases.to_string(),
            r.failures.len().to_string(),
            format!("{:e}", r.max_rel_err),
            format!("{:e}", r.tol),
            r.seed.to_string(),
            elapsed(r),
        ])
        .map_err(io)?;
    }
    for r in &rows {
        for f in &r.failures {
            w.write_record([
                "failure".to_string(),
                r.suite.clone(),
                f.case_id.clone(),
                format!("{}{:+}i", f.lhs[0], f.lhs[1]),
                format!("{}{:+}i", f.rhs[0], f.rhs[1]),
                format!("{:e}", f.rel_err),
                format!("{:e}", r.tol),
                r.seed.to_string(),
                String::new(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Parse(format!("csv: {e}")))
}
