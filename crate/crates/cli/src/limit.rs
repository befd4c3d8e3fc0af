//! `limit`: tessellation cells and small-p probes.

use crate::error::CliError;
use crate::params::{cx_json, parse_rationals, q_str, ParamFile, Resolved};
use clap::{Args, Subcommand, ValueEnum};
use ellip_core::degenerations::{probe_binom, probe_interp, probe_omega_limit, LimitFamily, LimitProbe, OMEGA_SPREAD_MAX};
use ellip_core::valuation::{classify_cell, omega_f_plain, ProbeResult};
use num_traits::Zero;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum LimitCmd {
    /// Names the cell containing (α, β, ζ).
    Classify {
        /// Three rationals α,β,ζ such as 1/2,1/2,0.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Probes an elliptic object at small p against its limit.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeTarget {
    Interp,
    Binom,
    Omega,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub target: ProbeTarget,
    /// Limit family (interp, binom), e.g. T or F2.
    #[arg(long)]
    pub family: Option<String>,
    /// Exponents α,β,γ₁,γ₂,γ₃,γ₄ of a, b, v (omega).
    #[arg(long, allow_hyphen_values = true)]
    pub exponents: Option<String>,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
}

pub fn run(cmd: &LimitCmd) -> Result<Value, CliError> {
    match cmd {
        LimitCmd::Classify { v } => {
            let x = parse_rationals(v, 3)?;
            let cell = classify_cell(x[0], x[1], x[2]);
            Ok(json!({
                "point": x.iter().map(|&r| q_str(r)).collect::<Vec<_>>(),
                "family": cell.family.to_string(),
                "shift": cell.shift,
                "reflection": cell.reflection,
                "dimension": cell.family.dimension(),
                "octahedral": cell.family.is_octahedral(),
            }))
        }
        LimitCmd::Probe(args) => probe(args),
    }
}

fn probe_json(r: &ProbeResult) -> Value {
    json!({
        "val": q_str(r.val),
        "slope": r.slope,
        "lc": cx_json(r.lc),
        "lc_raw": cx_json(r.lc_raw),
        "residual": r.residual,
        "lc_spread": r.lc_spread,
    })
}

fn limit_json(r: &LimitProbe, tol: f64) -> Value {
    json!({
        "family": r.family.to_string(),
        "probe": probe_json(&r.probe),
        "expected": { "val": q_str(r.val), "lc": cx_json(r.target) },
        "rel_err": r.rel_err,
        "raw_rel_err": { "p=1e-2": r.raw_rel_err[0], "p=1e-3": r.raw_rel_err[1], "deepest": r.raw_rel_err[2] },
        "converged": r.converged(tol),
    })
}

fn family(args: &ProbeArgs) -> Result<LimitFamily, CliError> {
    let name = args.family.as_deref().ok_or_else(|| CliError::Parse("--family is required for this target".into()))?;
    LimitFamily::parse(name).ok_or_else(|| CliError::Parse(format!("unknown family {name:?}")))
}

/// Probe lc tolerance for the convergence flag.
const PROBE_TOL: f64 = 1e-2;

fn probe(args: &ProbeArgs) -> Result<Value, CliError> {
    let r = Resolved { file: ParamFile::load(args.params.as_deref())? };
    let lam = r.partition(&args.lambda, &r.file.lambda)?;
    let (q, t, a, b) = (r.q()?, r.t()?, r.a()?, r.b()?);
    let inputs = json!({ "lambda": lam.parts(), "q": cx_json(q), "t": cx_json(t), "a": cx_json(a), "b": cx_json(b) });
    match args.target {
        ProbeTarget::Interp => {
            let f = family(args)?;
            let z = r.z(r.n(args.n, lam.len().max(1)))?;
            let res = probe_interp(f, &lam, &z, a, b, q, t)?;
            let mut out = limit_json(&res, PROBE_TOL);
            out["inputs"] = inputs;
            out["inputs"]["z"] = Value::Array(z.iter().map(|&x| cx_json(x)).collect());
            Ok(out)
        }
        ProbeTarget::Binom => {
            let f = family(args)?;
            let mu = r.partition(&args.mu, &r.file.mu)?;
            let res = probe_binom(f, &lam, &mu, a, b, q, t)?;
            let mut out = limit_json(&res, PROBE_TOL);
            out["inputs"] = inputs;
            out["inputs"]["mu"] = json!(mu.parts());
            Ok(out)
        }
        ProbeTarget::Omega => {
            let e = args.exponents.as_deref().ok_or_else(|| CliError::Parse("--exponents is required for omega".into()))?;
            let x = parse_rationals(e, 6)?;
            let (ea, eb, eg) = (x[0], x[1], [x[2], x[3], x[4], x[5]]);
            let kappa = r.partition(&args.kappa, &r.file.kappa)?;
            let v = r.v()?;
            let f = omega_f_plain(ea, eb, eg);
            if f.is_zero() {
                return Err(CliError::Core(ellip_core::Error::Undetermined(format!(
                    "f vanishes at {e}; the single-term limit forms do not apply"
                ))));
            }
            let res = probe_omega_limit(&lam, &kappa, a, b, v, (ea, eb, eg), q, t)?;
            let err = ellip_core::scalar::rel_err(res.lc, ellip_core::C64::new(1.0, 0.0));
            let mut out = json!({
                "f": q_str(f),
                "form": if f > ellip_core::valuation::Q::zero() { "mu=lambda" } else { "mu=kappa" },
                "probe": probe_json(&res),
                "expected": { "val": "0", "lc": [1.0, 0.0] },
                "rel_err": err,
                "converged": res.lc_spread <= OMEGA_SPREAD_MAX,
                "inputs": inputs,
            });
            out["inputs"]["kappa"] = json!(kappa.parts());
            out["inputs"]["v"] = Value::Array(v.iter().map(|&x| cx_json(x)).collect());
            out["inputs"]["exponents"] = json!(x.iter().map(|&r| q_str(r)).collect::<Vec<_>>());
            Ok(out)
        }
    }
}
