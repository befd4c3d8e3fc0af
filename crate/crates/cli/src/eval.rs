//! `eval`: a single function value with an echo of its inputs.

use crate::error::CliError;
use crate::params::{cx_json, ParamFile, Resolved};
use clap::{Args, ValueEnum};
use ellip_core::biorthogonal::{biortho_r, BiorthoParams};
use ellip_core::degenerations::{interp_limit, LimitFamily};
use ellip_core::interpolation::{gen_binom_with, interp_q, interp_r, omega};
use ellip_core::pastro::{pastro_p, Expansion, PastroParams};
use ellip_core::{EllipticParams, Partition, C64};
use serde_json::{json, Map, Value};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Interpolation function R*_λ(z; a, b).
    Interp,
    /// Normalized interpolation function Q*_λ(z; a, b).
    InterpQ,
    /// Biorthogonal function R̃_λ(z; t₀:t₁,t₂,t₃; u₀,u₁).
    Biortho,
    /// Connection coefficient Ω_{λ/κ}(a, b; v).
    Omega,
    /// Generalized binomial coefficient binom(λ, μ)_{[a,b]}.
    Binom,
    /// Pastro polynomial P_λ(w; A, B).
    PastroP,
    /// Macdonald polynomial P_λ(z; q, t).
    Macdonald,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum At {
    /// z_i = t₀ t^{n−i}.
    Principal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpansionArg {
    T0,
    T2,
    T3,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub target: Target,
    /// JSON parameter file.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Number of variables.
    #[arg(long)]
    pub n: Option<usize>,
    /// λ, e.g. [2,1].
    #[arg(long)]
    pub lambda: Option<String>,
    /// μ for `binom`.
    #[arg(long)]
    pub mu: Option<String>,
    /// κ for `omega`.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Evaluation point for `biortho`.
    #[arg(long, value_enum)]
    pub at: Option<At>,
    /// Expansion used for `pastro-p`.
    #[arg(long, value_enum, default_value = "t3")]
    pub expansion: ExpansionArg,
}

struct Echo(Map<String, Value>);

impl Echo {
    fn cx(&mut self, k: &str, x: C64) -> C64 {
        self.0.insert(k.into(), cx_json(x));
        x
    }
    fn cxs(&mut self, k: &str, xs: Vec<C64>) -> Vec<C64> {
        self.0.insert(k.into(), Value::Array(xs.iter().map(|&x| cx_json(x)).collect()));
        xs
    }
    fn part(&mut self, k: &str, p: Partition) -> Partition {
        self.0.insert(k.into(), json!(p.parts()));
        p
    }
}

pub fn run(args: &EvalArgs) -> Result<Value, CliError> {
    let r = Resolved { file: ParamFile::load(args.params.as_deref())? };
    let mut e = Echo(Map::new());
    let lam = e.part("lambda", r.partition(&args.lambda, &r.file.lambda)?);
    let q = e.cx("q", r.q()?);
    let t = e.cx("t", r.t()?);
    let value = match args.target {
        Target::Interp | Target::InterpQ => {
            let n = r.n(args.n, lam.len().max(1));
            e.0.insert("n".into(), json!(n));
            let par = EllipticParams::new(q, t, e.cx("p", r.p()?))?;
            let (a, b) = (e.cx("a", r.a()?), e.cx("b", r.b()?));
            let z = e.cxs("z", r.z(n)?);
            if args.target == Target::Interp {
                interp_r(&lam, &z, a, b, &par)?
            } else {
                interp_q(&lam, &z, a, b, &par)?
            }
        }
        Target::Biortho => {
            let n = r.n(args.n, lam.len().max(1));
            e.0.insert("n".into(), json!(n));
            let par = EllipticParams::new(q, t, e.cx("p", r.p()?))?;
            let ps = BiorthoParams::new(n, r.t0123()?, r.u0()?, par)?;
            e.cxs("t0123", ps.t.to_vec());
            e.cxs("u", ps.u.to_vec());
            let z = match args.at {
                Some(At::Principal) => {
                    e.0.insert("at".into(), json!("principal"));
                    e.cxs("z", ps.points(&Partition::empty()))
                }
                None => e.cxs("z", r.z(n)?),
            };
            biortho_r(&lam, &z, &ps)?
        }
        Target::Omega => {
            let kappa = e.part("kappa", r.partition(&args.kappa, &r.file.kappa)?);
            let par = EllipticParams::new(q, t, e.cx("p", r.p()?))?;
            let (a, b) = (e.cx("a", r.a()?), e.cx("b", r.b()?));
            let v = r.v()?;
            e.cxs("v", v.to_vec());
            omega(&lam, &kappa, a, b, v, &par)?
        }
        Target::Binom => {
            let mu = e.part("mu", r.partition(&args.mu, &r.file.mu)?);
            let n = r.n(args.n, lam.len().max(mu.len()));
            e.0.insert("n".into(), json!(n));
            let par = EllipticParams::new(q, t, e.cx("p", r.p()?))?;
            let (a, b) = (e.cx("a", r.a()?), e.cx("b", r.b()?));
            gen_binom_with(&lam, &mu, a, b, n, a.sqrt(), &par)?
        }
        Target::PastroP => {
            let n = r.n(args.n, lam.len().max(1));
            e.0.insert("n".into(), json!(n));
            let pp = PastroParams::new(n, e.cx("A", r.big_a()?), e.cx("B", r.big_b()?), q, t)?;
            let w = e.cxs("w", r.z(n)?);
            let expansion = match args.expansion {
                ExpansionArg::T0 => Expansion::T0,
                ExpansionArg::T2 => Expansion::T2,
                ExpansionArg::T3 => Expansion::T3,
            };
            e.0.insert("expansion".into(), serde_json::to_value(expansion).unwrap_or(Value::Null));
            pastro_p(&lam, &w, &pp, expansion)?
        }
        Target::Macdonald => {
            let n = r.n(args.n, lam.len().max(1));
            e.0.insert("n".into(), json!(n));
            let z = e.cxs("z", r.z(n)?);
            // The T-family limit is the Macdonald polynomial for any a, b.
            interp_limit(LimitFamily::T, &lam, &z, r.a()?, r.b()?, q, t)?
        }
    };
    Ok(json!({
        "target": args.target.to_possible_value().map(|v| v.get_name().to_string()),
        "value": cx_json(value),
        "inputs": Value::Object(e.0),
    }))
}
