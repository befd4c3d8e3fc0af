//! Randomized identity suites with machine-readable reports.
//!
//! Each suite draws parameters from a deterministic per-trial stream, so a
//! report is reproducible from its seed. Trials run concurrently and the
//! report lists cases in trial order.

use crate::biorthogonal::{
    biortho_r, biortho_r_via_omega, difference_apply, discrete_inner_product, dminus_eigenvalue, dual_params, norm_formula,
    BiorthoParams, DiffOp,
};
use crate::csymbols::{c_elliptic, delta, delta0, shift_monomial, CKind};
use crate::degenerations::{
    binom_exponents, deep_ladder, evaluation_matrix_min_singular, interp_limit, macdonald_oracle, octahedron_value, probe_binom,
    probe_interp, probe_omega_limit, LimitFamily, OMEGA_SPREAD_MAX,
};
use crate::error::{Error, Result};
use crate::interpolation::{
    binon_elliptic, gen_binom, gen_binom_with, interp_q, interp_r, omega, omega_eval, principal_points, r_inversion_factor,
    r_shift_a, r_shift_b, r_shift_sqrt_p,
};
use crate::kernels::{elliptic_gamma, qpoch, qpoch_inf, theta, theta_poch, EllipticParams};
use crate::partitions::{partitions_up_to, Partition};
use crate::pastro::{
    lift, macdonald_specialize, pastro_difference_apply, pastro_difference_rhs, pastro_duality_sides, pastro_gram,
    pastro_norm, pastro_p, pastro_p_direct, probe_pastro, DualityBase, Expansion, PastroOp, PastroParams,
};
use crate::scalar::{ipow, rel_err};
use crate::valuation::{
    c_lc, c_val, delta_val_lc, four_f_grid_check, omega_f_plain, probe_on, theta_lc, theta_val, Q,
};
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

type C = Complex<f64>;

/// Resamples allowed per trial after a pole or guard trip.
pub const RESAMPLE_BUDGET: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernels,
    Csymbols,
    Interpolation,
    Omega,
    Biortho,
    Duality,
    Limits,
    Degenerations,
    Pastro,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Kernels,
        Suite::Csymbols,
        Suite::Interpolation,
        Suite::Omega,
        Suite::Biortho,
        Suite::Duality,
        Suite::Limits,
        Suite::Degenerations,
        Suite::Pastro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernels => "kernels",
            Suite::Csymbols => "csymbols",
            Suite::Interpolation => "interpolation",
            Suite::Omega => "omega",
            Suite::Biortho => "biortho",
            Suite::Duality => "duality",
            Suite::Limits => "limits",
            Suite::Degenerations => "degenerations",
            Suite::Pastro => "pastro",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name().eq_ignore_ascii_case(s))
    }

    /// Tolerance applied to cases without a fixed tolerance of their own.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Kernels => 1e-12,
            Suite::Csymbols => 1e-11,
            Suite::Interpolation => 1e-10,
            Suite::Omega | Suite::Biortho | Suite::Duality | Suite::Pastro => 1e-9,
            Suite::Limits => 1e-3,
            Suite::Degenerations => 1e-2,
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Kernels => 200,
            Suite::Csymbols | Suite::Interpolation => 50,
            Suite::Omega => 25,
            Suite::Limits => 10,
            Suite::Biortho | Suite::Duality | Suite::Pastro => 3,
            Suite::Degenerations => 2,
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Options of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Trials per suite; `None` uses the suite default.
    pub trials: Option<usize>,
    /// Overrides the suite tolerance; fixed-tolerance cases are unaffected.
    pub tol: Option<f64>,
    /// Record wall-clock time. Off by default so reports are byte-stable.
    pub timing: bool,
    /// Worker thread cap; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub lhs: C,
    pub rhs: C,
    pub err: f64,
    /// Fixed tolerance, or `None` for the suite tolerance.
    pub tol: Option<f64>,
}

impl Case {
    /// Within its own tolerance, or `suite_tol` when it has none.
    pub fn passes(&self, suite_tol: f64) -> bool {
        self.err <= self.tol.unwrap_or(suite_tol)
    }

    /// The id without the `t{trial}:` prefix.
    pub fn name(&self) -> &str {
        self.id.split_once(':').map_or(&self.id, |(_, rest)| rest)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub case_id: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub trials: usize,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Largest error over all cases.
    pub max_rel_err: f64,
    /// Seconds, present only when timing was requested.
    pub elapsed: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Case collector for one trial.
struct Cases {
    prefix: String,
    out: Vec<Case>,
}

impl Cases {
    fn new(trial: usize) -> Self {
        Cases { prefix: format!("t{trial}"), out: Vec::new() }
    }

    fn push(&mut self, id: impl fmt::Display, lhs: C, rhs: C, err: f64, tol: Option<f64>) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.out.push(Case { id: format!("{}:{id}", self.prefix), lhs, rhs, err, tol });
    }

    fn rel(&mut self, id: impl fmt::Display, lhs: C, rhs: C) {
        self.push(id, lhs, rhs, rel_err(lhs, rhs), None);
    }

    fn rel_fixed(&mut self, id: impl fmt::Display, lhs: C, rhs: C, tol: f64) {
        self.push(id, lhs, rhs, rel_err(lhs, rhs), Some(tol));
    }

    fn abs_fixed(&mut self, id: impl fmt::Display, value: C, tol: f64) {
        self.push(id, value, C::zero(), value.norm(), Some(tol));
    }

    /// Error relative to an explicit scale.
    fn scaled(&mut self, id: impl fmt::Display, lhs: C, rhs: C, scale: f64, tol: f64) {
        self.push(id, lhs, rhs, (lhs - rhs).norm() / scale.max(1e-300), Some(tol));
    }
}

fn trial_rng(seed: u64, suite: Suite, trial: usize, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.index() << 32 | trial as u64);
    rng.set_word_pos((attempt as u128) << 20);
    rng
}

/// Parameter sampler: moduli uniform in [0.3, 0.9], phases uniform.
struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn cx(&mut self) -> C {
        let r = self.rng.gen_range(0.3..0.9);
        let phi = self.rng.gen_range(0.0..std::f64::consts::TAU);
        C::from_polar(r, phi)
    }

    fn cxs(&mut self, n: usize) -> Vec<C> {
        (0..n).map(|_| self.cx()).collect()
    }

    fn nome(&mut self) -> C {
        C::new(if self.rng.gen_bool(0.5) { 0.02 } else { 0.05 }, 0.0)
    }

    fn base(&mut self) -> Result<EllipticParams<f64>> {
        let (q, t, p) = (self.cx(), self.cx(), self.nome());
        EllipticParams::new(q, t, p)
    }

    fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    fn pick<'a, X>(&mut self, xs: &'a [X]) -> &'a X {
        &xs[self.index(xs.len())]
    }

    fn rational(&mut self, den: i64, lo: i64, hi: i64) -> Q {
        Q::new(self.rng.gen_range(lo..hi), den)
    }
}

fn resample_worthy(e: &Error) -> bool {
    matches!(e, Error::Pole { .. } | Error::PoleGuard { .. } | Error::Evaluation { .. })
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerificationReport> {
    match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(|| run_suite_inner(suite, cfg)),
        None => run_suite_inner(suite, cfg),
    }
}

/// Every case of a suite in trial order, without the report summary.
pub fn suite_cases(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Case>> {
    match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(|| collect_cases(suite, cfg)),
        None => collect_cases(suite, cfg),
    }
}

fn collect_cases(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Case>> {
    let trials = cfg.trials.unwrap_or_else(|| suite.default_trials());
    let per_trial: Vec<Vec<Case>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut last = None;
            for attempt in 0..=RESAMPLE_BUDGET {
                let mut s = Sampler { rng: trial_rng(cfg.seed, suite, trial, attempt) };
                let mut cases = Cases::new(trial);
                match run_trial(suite, trial, &mut s, &mut cases) {
                    Ok(()) => return Ok(cases.out),
                    Err(e) if resample_worthy(&e) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one attempt"))
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn run_suite_inner(suite: Suite, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let trials = cfg.trials.unwrap_or_else(|| suite.default_trials());
    let tol = cfg.tol.unwrap_or_else(|| suite.default_tol());
    let cases = collect_cases(suite, cfg)?;
    let failures = cases
        .iter()
        .filter(|c| !c.passes(tol))
        .map(|c| Failure { case_id: c.id.clone(), lhs: [c.lhs.re, c.lhs.im], rhs: [c.rhs.re, c.rhs.im], rel_err: c.err })
        .collect();
    Ok(VerificationReport {
        suite: suite.name().into(),
        trials,
        cases: cases.len(),
        failures,
        max_rel_err: cases.iter().map(|c| c.err).fold(0.0, f64::max),
        elapsed: cfg.timing.then(|| start.elapsed().as_secs_f64()),
        seed: cfg.seed,
        tol,
        suites: Vec::new(),
    })
}

/// Runs every suite and aggregates; failure ids are prefixed by suite.
pub fn run_all(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let reports: Vec<VerificationReport> = Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect::<Result<_>>()?;
    let failures = reports
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| Failure { case_id: format!("{}/{}", r.suite, f.case_id), ..f.clone() }))
        .collect();
    Ok(VerificationReport {
        suite: "all".into(),
        trials: reports.iter().map(|r| r.trials).sum(),
        cases: reports.iter().map(|r| r.cases).sum(),
        failures,
        max_rel_err: reports.iter().map(|r| r.max_rel_err).fold(0.0, f64::max),
        elapsed: cfg.timing.then(|| start.elapsed().as_secs_f64()),
        seed: cfg.seed,
        tol: 0.0,
        suites: reports,
    })
}

fn run_trial(suite: Suite, trial: usize, s: &mut Sampler, c: &mut Cases) -> Result<()> {
    match suite {
        Suite::Kernels => kernels_trial(s, c),
        Suite::Csymbols => csymbols_trial(s, c),
        Suite::Interpolation => interpolation_trial(s, c),
        Suite::Omega => omega_trial(s, c),
        Suite::Biortho => biortho_trial(s, c),
        Suite::Duality => duality_trial(s, c),
        Suite::Limits => limits_trial(trial, s, c),
        Suite::Degenerations => degenerations_trial(s, c),
        Suite::Pastro => pastro_trial(trial, s, c),
    }
}

fn kernels_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let (x, q, p) = (s.cx(), s.cx(), s.nome());
    let th = theta(x, p)?;
    c.rel("theta:p-shift", theta(p * x, p)?, -th / x);
    c.rel("theta:inversion", theta(p / x, p)?, th);
    c.rel("theta:reciprocal", theta(x.inv(), p)?, -th / x);
    let (m, k) = (s.index(5), s.index(5));
    let whole = theta_poch(x, q, p, m + k)?;
    let split = theta_poch(x, q, p, m)? * theta_poch(x * q.powi(m as i32), q, p, k)?;
    c.rel(format!("theta_poch:split({m},{k})"), whole, split);
    let ratio = qpoch_inf(x, q)? / qpoch_inf(x * q.powi(m as i32), q)?;
    c.rel(format!("qpoch_inf:ratio({m})"), ratio, qpoch(x, q, m));
    let g = elliptic_gamma(x, p, q)?;
    c.rel("gamma:reflection", g * elliptic_gamma(p * q / x, p, q)?, C::one());
    c.rel("gamma:q-step", elliptic_gamma(q * x, p, q)?, th * g);
    c.rel("gamma:p-step", elliptic_gamma(p * x, p, q)?, theta(x, q)? * g);
    Ok(())
}

fn csymbols_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let par = s.base()?;
    let (p, q, t) = (par.p, par.q, par.t);
    let lams = Partition::rectangle(3, 3).subpartitions();
    let lam = s.pick(&lams).clone();
    let (size, nc, ns) = (lam.size(), lam.n_conj() as i64, lam.n_stat() as i64);
    let x = s.cx();
    let shifts = [
        (CKind::Zero, -x.inv(), -nc, ns),
        (CKind::Minus, -x.inv(), -nc, -ns),
        (CKind::Plus, -(q * x).inv(), -3 * nc, 3 * ns),
    ];
    for (kind, m, eq, et) in shifts {
        let cx = c_elliptic(kind, &lam, x, &par)?;
        let lhs = c_elliptic(kind, &lam, p * x, &par)?;
        c.rel(format!("C{kind:?}{lam}:p-shift"), lhs, cx * shift_monomial(m, size, q, eq, t, et));
        c.rel(format!("C{kind:?}{lam}:inversion"), lhs, c_elliptic(kind, &lam, x.inv(), &par.inverted())?);
    }

    let r = 1 + s.index(4);
    let a = s.cx();
    let bs = s.cxs(r);
    let prod: C = bs.iter().product();
    let rr = r as i64;
    let mut pb = bs.clone();
    pb[0] *= p;
    let d0 = delta0(&lam, a, &bs, &par)?;
    let f_b = shift_monomial((a * q).inv(), size, q, -2 * nc, t, 2 * ns);
    c.rel(format!("D0{lam}:pb(r={r})"), delta0(&lam, a, &pb, &par)?, d0 * f_b);
    let f_a = shift_monomial(prod / ipow(-a * q, rr), size, q, -rr * nc, t, rr * ns);
    c.rel(format!("D0{lam}:a/p(r={r})"), delta0(&lam, a / p, &bs, &par)?, d0 * f_a);
    let d = delta(&lam, a, &bs, &par)?;
    c.rel(format!("D{lam}:pb(r={r})"), delta(&lam, a, &pb, &par)?, d * f_b);
    let f_a = shift_monomial(p * q / t * prod / ipow(-a * q, rr - 2), size, q, (2 - rr) * nc, t, (rr - 2) * ns);
    c.rel(format!("D{lam}:a/p(r={r})"), delta(&lam, a / p, &bs, &par)?, d * f_a);

    let r2 = 2 + s.index(3);
    let bs2 = s.cxs(r2);
    let mut moved = bs2.clone();
    moved[0] *= p;
    moved[1] /= p;
    c.rel(format!("D0{lam}:b-product"), delta0(&lam, a, &moved, &par)?, delta0(&lam, a, &bs2, &par)?);

    let k = 1 + s.index(2);
    let mut even = s.cxs(2 * k);
    let partial: C = even[..2 * k - 1].iter().product();
    even[2 * k - 1] = ipow(a * par.pq(), k as i64) / partial;
    let mut shifted = even.clone();
    for b in shifted.iter_mut().take(k) {
        *b *= p;
    }
    c.rel(
        format!("D0{lam}:elliptic(r={})", 2 * k),
        delta0(&lam, p * a, &shifted, &par)?,
        delta0(&lam, a, &even, &par)?,
    );

    let k = s.index(2);
    let r = 2 * k + 2;
    let mut bal = s.cxs(r);
    let partial: C = bal[..r - 1].iter().product();
    bal[r - 1] = t * ipow(a * par.pq(), k as i64) / (par.pq() * partial);
    let mut shifted = bal.clone();
    for b in shifted.iter_mut().take(k) {
        *b *= p;
    }
    c.rel(format!("D{lam}:elliptic(r={r})"), delta(&lam, p * a, &shifted, &par)?, delta(&lam, a, &bal, &par)?);
    Ok(())
}

fn interpolation_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let par = s.base()?;
    let (p, q, t) = (par.p, par.q, par.t);
    let n = 1 + s.index(3);
    let lams = partitions_up_to(4, n);
    let lam = s.pick(&lams).clone();
    let (a, b) = (s.cx(), s.cx());
    let z = s.cxs(n);

    let pts = principal_points(&lam, n, a, q, t);
    c.rel(format!("Q*{lam}:principal(n={n})"), interp_q(&lam, &pts, a, b, &par)?, C::one());

    let r = interp_r(&lam, &z, a, b, &par)?;
    c.rel(format!("R{lam}:pa"), interp_r(&lam, &z, p * a, b, &par)?, r * r_shift_a(&lam, n, a, &par));
    c.rel(format!("R{lam}:pb"), interp_r(&lam, &z, a, p * b, &par)?, r * r_shift_b(&lam, n, b, &par));
    let sp = p.sqrt();
    let zs: Vec<C> = z.iter().map(|x| x * sp).collect();
    c.rel(format!("R{lam}:sqrt-p"), interp_r(&lam, &zs, sp * a, sp * b, &par)?, r * r_shift_sqrt_p(&lam, n, a, b, &par));
    let neg: Vec<C> = z.iter().map(|x| -x).collect();
    c.rel(format!("R{lam}:negation"), interp_r(&lam, &neg, -a, -b, &par)?, r);
    let inv = interp_r(&lam, &z, a.inv(), b.inv(), &par.inverted())?;
    c.rel(format!("R{lam}:inverted-bases"), inv, r * r_inversion_factor(&lam, n, a, b, &par));
    let i = s.index(n);
    let mut zi = z.clone();
    zi[i] = zi[i].inv();
    c.rel(format!("R{lam}:z{i}-inversion"), interp_r(&lam, &zi, a, b, &par)?, r);
    let mut zp = z.clone();
    zp[i] *= p;
    c.rel(format!("R{lam}:z{i}-p-shift"), interp_r(&lam, &zp, a, b, &par)?, r);
    if n > 1 {
        let j = (i + 1 + s.index(n - 1)) % n;
        let mut zw = z.clone();
        zw.swap(i, j);
        c.rel(format!("R{lam}:swap({i},{j})"), interp_r(&lam, &zw, a, b, &par)?, r);
    }

    let strips = lam.horizontal_strips();
    let mu = s.pick(&strips).clone();
    let d = lam.size() as i64 - mu.size() as i64;
    let f = ipow(-par.pq() * a, d)
        * ipow(q, lam.n_conj() as i64 - mu.n_conj() as i64)
        * ipow(t, mu.n_stat() as i64 - lam.n_stat() as i64 - lam.size() as i64);
    c.rel(
        format!("binom:binon{lam}/{mu}:p-shift"),
        binon_elliptic(&lam, &mu, p * a, &par)?,
        f * binon_elliptic(&lam, &mu, a, &par)?,
    );

    let subs = lam.subpartitions();
    let mu = s.pick(&subs).clone();
    let v = gen_binom(&lam, &mu, a, b, &par)?;
    let m = lam.len().max(mu.len());
    let id = format!("binom:{lam}/{mu}");
    c.rel(format!("{id}:n-independence"), gen_binom_with(&lam, &mu, a, b, m + 1, a.sqrt(), &par)?, v);
    c.rel(format!("{id}:sqrt-branch"), gen_binom_with(&lam, &mu, a, b, m, -a.sqrt(), &par)?, v);
    c.rel(format!("{id}:pa"), gen_binom(&lam, &mu, p * a, b, &par)?, v);
    c.rel(format!("{id}:pb"), gen_binom(&lam, &mu, a, p * b, &par)?, v);
    c.rel(format!("{id}:inverted-bases"), gen_binom(&lam, &mu, a.inv(), b.inv(), &par.inverted())?, v);
    if mu != lam {
        c.abs_fixed(format!("binom:{mu}/{lam}:vanishing"), gen_binom(&mu, &lam, a, b, &par)?, 1e-9);
    }
    Ok(())
}

fn omega_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let par = s.base()?;
    let lams = Partition::rectangle(3, 2).subpartitions();
    let lam = s.pick(&lams).clone();
    let kaps = lam.subpartitions();
    let kap = s.pick(&kaps).clone();
    let (a, b) = (s.cx(), s.cx());
    let v = [s.cx(), s.cx(), s.cx(), s.cx()];
    let id = format!("{lam}/{kap}");
    let w = omega(&lam, &kap, a, b, v, &par)?;
    let k = s.index(24);
    let mut perm = [0usize, 1, 2, 3];
    let mut idx = k;
    for i in 0..4 {
        let j = i + idx % (4 - i);
        idx /= 4 - i;
        perm.swap(i, j);
    }
    c.rel(format!("{id}:permutation{perm:?}"), omega(&lam, &kap, a, b, perm.map(|r| v[r]), &par)?, w);
    let flip = [v[0], v[1], v[2].inv(), v[3].inv()];
    c.rel(format!("{id}:flip"), omega(&lam, &kap, a, b / (v[2] * v[3]), flip, &par)?, w);
    c.rel(format!("{id}:negation"), omega(&lam, &kap, -a, -b, v.map(|x| -x), &par)?, w);
    let x = v[2];
    let vv = [v[0], v[1], x, a * b * par.pq() / x];
    c.rel(
        format!("{id}:closed-form"),
        omega(&lam, &kap, a, b, vv, &par)?,
        omega_eval(&lam, &kap, a, b, v[0], v[1], x, &par)?,
    );
    Ok(())
}

fn biortho_params(s: &mut Sampler, n: usize) -> Result<BiorthoParams<f64>> {
    let base = s.base()?;
    BiorthoParams::new(n, [s.cx(), s.cx(), s.cx(), s.cx()], s.cx(), base)
}

fn biortho_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let n = 2;
    let ps = biortho_params(s, n)?;
    let par = ps.base;
    let z = s.cxs(n);
    let lams = Partition::rectangle(2, 2).subpartitions();
    let lam = s.pick(&lams).clone();
    let r = biortho_r(&lam, &z, &ps)?;
    for (k, v) in [ps.t[0], s.cx(), ps.t[2]].into_iter().enumerate() {
        c.rel(format!("R{lam}:via-omega{k}"), biortho_r_via_omega(&lam, &z, &ps, v)?, r);
    }
    c.rel(format!("R{lam}:normalization"), biortho_r(&lam, &ps.points(&Partition::empty()), &ps)?, C::one());

    let pp = par.p;
    let one = C::one();
    let sp = pp.sqrt();
    let zz: Vec<C> = z.iter().map(|x| x * sp).collect();
    let inv = BiorthoParams {
        n,
        t: [ps.t[0].inv(), ps.t[1].inv(), pp / ps.t[2], pp / ps.t[3]],
        u: [ps.u[0].inv(), ps.u[1].inv()],
        base: par.inverted(),
    };
    let abel: [(&str, Vec<C>, BiorthoParams<f64>); 8] = [
        ("swap", vec![z[1], z[0]], ps),
        ("z-inversion", vec![z[0].inv(), z[1]], ps),
        ("z-p-shift", vec![z[0], z[1] * pp], ps),
        ("t1,t2", z.clone(), ps.scaled([one, pp, one / pp, one], [one, one])),
        ("t0,u0", z.clone(), ps.scaled([pp, one, one, one], [one / pp, one])),
        ("t3,u1", z.clone(), ps.scaled([one, one, one, pp], [one, one / pp])),
        ("sqrt-p", zz, ps.scaled([sp, one / sp, one / sp, one / sp], [sp, sp])),
        ("inverted-bases", z.clone(), inv),
    ];
    for (what, w, qs) in abel.iter() {
        c.rel(format!("R{lam}:{what}"), biortho_r(&lam, w, qs)?, r);
    }

    let qh = par.q.sqrt();
    let dq_shift = ps.scaled([qh, qh, qh.inv(), qh.inv()], [qh, qh.inv()]);
    let up_shift = ps.scaled([qh; 4], [qh.inv(), qh.powi(-3)]);
    let down_shift = ps.scaled([qh.inv(); 4], [qh.powi(3), qh]);
    for lam in [Partition::from_slice(&[1]), Partition::from_slice(&[1, 1])] {
        let rl = biortho_r(&lam, &z, &ps)?;
        let f = |x: &[C]| biortho_r(&lam, x, &dq_shift);
        let op = DiffOp::Dq { v: [ps.u[0], ps.t[0], ps.t[1]] };
        c.rel(format!("Dq{lam}"), difference_apply(&op, &f, &z, &par)?, rl);
        let up = lam.add_rows(1, n)?;
        let f = |x: &[C]| biortho_r(&lam, x, &up_shift);
        let op = DiffOp::Dplus { v: [ps.u[0], ps.t[0], ps.t[1], ps.t[2], ps.t[3]] };
        c.rel(format!("D+{lam}"), difference_apply(&op, &f, &z, &par)?, biortho_r(&up, &z, &ps)?);
        let f = |x: &[C]| biortho_r(&up, x, &down_shift);
        let lhs = difference_apply(&DiffOp::Dminus { u0: ps.u[0] }, &f, &z, &par)?;
        c.rel(format!("D-{lam}"), lhs, dminus_eigenvalue(&lam, &ps)? * rl);
    }

    let m = 2;
    let base = s.base()?;
    let sp = BiorthoParams::specialized(n, m, s.cx(), s.cx(), s.cx(), s.cx(), base)?;
    let sw = sp.swap_u();
    let unit = |_: &[C]| Ok(C::one());
    c.rel_fixed("gram:<1,1>", discrete_inner_product(unit, unit, &sp, m)?, C::one(), 1e-10);
    let parts = Partition::rectangle(m, n).subpartitions();
    let norms: Vec<C> = parts.iter().map(|l| norm_formula(l, &sp)).collect::<Result<_>>()?;
    for (i, l) in parts.iter().enumerate() {
        for (j, k) in parts.iter().enumerate() {
            let f = |x: &[C]| biortho_r(l, x, &sp);
            let g = |x: &[C]| biortho_r(k, x, &sw);
            let v = discrete_inner_product(f, g, &sp, m)?;
            if i == j {
                c.rel_fixed(format!("gram:{l}{k}"), v, norms[i], 1e-8);
            } else {
                let scale = (norms[i].norm() * norms[j].norm()).sqrt();
                c.scaled(format!("gram:{l}{k}"), v, C::zero(), scale, 1e-8);
            }
        }
    }
    Ok(())
}

fn duality_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let ps = biortho_params(s, 2)?;
    let parts = Partition::rectangle(2, 2).subpartitions();
    for branch in [true, false] {
        let dual = dual_params(&ps, branch);
        let tag = if branch { "+" } else { "-" };
        for lam in &parts {
            for kap in &parts {
                let lhs = biortho_r(lam, &ps.points(kap), &ps)?;
                let rhs = biortho_r(kap, &dual.points(lam), &dual)?;
                c.rel(format!("duality{tag}:{lam}{kap}"), lhs, rhs);
            }
        }
    }
    Ok(())
}

fn powq(p: f64, e: Q) -> f64 {
    p.powf(e.to_f64().unwrap_or(0.0))
}

fn qf(x: Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn limits_trial(trial: usize, s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let ladder = deep_ladder();
    let (q, t) = (s.cx(), s.cx());
    let x = s.cx();

    let al = s.rational(4, 0, 8);
    let r = probe_on(&ladder, |p| theta(x * powq(p, al), C::new(p, 0.0)), 4)?;
    c.push(format!("theta({al}):val"), C::new(r.slope, 0.0), C::new(qf(theta_val(al)), 0.0), (r.slope - qf(theta_val(al))).abs(), Some(0.02));
    c.rel(format!("theta({al}):lc"), r.lc, theta_lc(x, al));

    let kinds = [CKind::Zero, CKind::Minus, CKind::Plus];
    let kind = *s.pick(&kinds);
    let lams = Partition::rectangle(2, 2).subpartitions();
    let lam = s.pick(&lams[1..]).clone();
    let al = s.rational(4, 0, 4);
    let r = probe_on(
        &ladder,
        |p| {
            let par = EllipticParams::new(q, t, C::new(p, 0.0))?;
            c_elliptic(kind, &lam, x * powq(p, al), &par)
        },
        4,
    )?;
    let want = qf(c_val(&lam, al));
    c.push(format!("C{kind:?}{lam}({al}):val"), C::new(r.slope, 0.0), C::new(want, 0.0), (r.slope - want).abs(), Some(0.02));
    c.rel(format!("C{kind:?}{lam}({al}):lc"), r.lc, c_lc(kind, &lam, x, al, q, t)?);

    let n = 2;
    let al = s.rational(4, 0, 4);
    let a = s.cx();
    let tn = ipow(t, n as i64);
    let r = probe_on(
        &ladder,
        |p| {
            let par = EllipticParams::new(q, t, C::new(p, 0.0))?;
            delta(&lam, a * powq(p, al), &[tn], &par)
        },
        4,
    )?;
    let (val, lc) = delta_val_lc(&lam, a, al, n, q, t)?;
    c.push(format!("Delta{lam}({al}):val"), C::new(r.slope, 0.0), C::new(qf(val), 0.0), (r.slope - qf(val)).abs(), Some(0.02));
    c.rel(format!("Delta{lam}({al}):lc"), r.lc, lc);

    if trial == 0 {
        let hit = four_f_grid_check(9);
        let err = if hit.is_some() { 1.0 } else { 0.0 };
        c.push(format!("four-f-grid(9):{hit:?}"), C::new(err, 0.0), C::zero(), err, Some(0.5));
    }

    // Points whose extrapolation has not settled inside double range are
    // redrawn; see `OMEGA_SPREAD_MAX`.
    let pairs: [(&[usize], &[usize]); 4] = [(&[1], &[]), (&[2, 1], &[1]), (&[2], &[1]), (&[1, 1], &[])];
    for _ in 0..RESAMPLE_BUDGET {
        let (l, k) = *s.pick(&pairs);
        let (lam, kap) = (Partition::from_slice(l), Partition::from_slice(k));
        let (ea, eb, eg) = loop {
            let ea = s.rational(8, 0, 8);
            let eb = s.rational(8, 0, 8);
            let eg = [0; 4].map(|_| s.rational(8, 0, 8));
            if !omega_f_plain(ea, eb, eg).is_zero() {
                break (ea, eb, eg);
            }
        };
        let (a, b) = (s.cx(), s.cx());
        let v = [s.cx(), s.cx(), s.cx(), s.cx()];
        let r = match probe_omega_limit(&lam, &kap, a, b, v, (ea, eb, eg), q, t) {
            Ok(r) if r.lc_spread <= OMEGA_SPREAD_MAX => r,
            Ok(_) | Err(Error::Evaluation { .. }) => continue,
            Err(e) => return Err(e),
        };
        let sign = if omega_f_plain(ea, eb, eg) > Q::zero() { "f>0" } else { "f<0" };
        let id = format!("omega-limit{lam}/{kap}[{ea},{eb};{},{},{},{}]{sign}", eg[0], eg[1], eg[2], eg[3]);
        let val = qf(r.val);
        c.push(format!("{id}:val"), C::new(val, 0.0), C::zero(), val.abs(), Some(0.0));
        c.rel(format!("{id}:lc"), r.lc, C::one());
        return Ok(());
    }
    Err(Error::Evaluation { p: 0.0, message: "no Ω-limit point converged within double range".into() })
}

fn degenerations_trial(s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let (q, t, a, b) = (s.cx(), s.cx(), s.cx(), s.cx());
    let n = 2;
    let z = s.cxs(n);
    let lams = [Partition::from_slice(&[1]), Partition::from_slice(&[2]), Partition::from_slice(&[1, 1]), Partition::from_slice(&[2, 1])];
    for f in LimitFamily::ALL {
        let lam = s.pick(&lams).clone();
        let r = probe_interp(f, &lam, &z, a, b, q, t)?;
        c.rel(format!("interp:{f}{lam}:lc"), r.probe.lc, r.target);
        let ratio = r.raw_rel_err[2] / r.raw_rel_err[0];
        c.push(format!("interp:{f}{lam}:raw-decrease"), C::new(r.raw_rel_err[2], 0.0), C::new(r.raw_rel_err[0], 0.0), ratio, Some(1.0));
    }
    let (lam, mu) = (Partition::from_slice(&[2, 1]), Partition::from_slice(&[1]));
    for f in LimitFamily::ALL.into_iter().filter(|&f| binom_exponents(f).is_some()) {
        let r = probe_binom(f, &lam, &mu, a, b, q, t)?;
        c.rel(format!("binom:{f}{lam}/{mu}:lc"), r.probe.lc, r.target);
        let ratio = r.raw_rel_err[2] / r.raw_rel_err[0];
        c.push(format!("binom:{f}{lam}/{mu}:raw-decrease"), C::new(r.raw_rel_err[2], 0.0), C::new(r.raw_rel_err[0], 0.0), ratio, Some(1.0));
    }
    for lam in partitions_up_to(4, n) {
        let got = interp_limit(LimitFamily::T, &lam, &z, a, b, q, t)?;
        c.rel_fixed(format!("macdonald{lam}"), got, macdonald_oracle(&lam, &z, q, t)?, 1e-9);
    }
    for f in [LimitFamily::S, LimitFamily::P1, LimitFamily::P2] {
        for lam in partitions_up_to(3, n) {
            let got = interp_limit(f, &lam, &z, a, b, q, t)?;
            c.rel_fixed(format!("octahedron:{f}{lam}"), got, octahedron_value(f, &lam, a, b, n, q, t)?, 1e-9);
        }
    }
    let basis = partitions_up_to(3, n);
    let pts: Vec<Vec<C>> = (0..basis.len()).map(|_| s.cxs(n)).collect();
    for f in LimitFamily::ALL {
        let sv = evaluation_matrix_min_singular(f, &basis, &pts, a, b, q, t)?;
        if f.is_octahedral() {
            c.push(format!("rank:{f}:singular"), C::new(sv, 0.0), C::new(1e-10, 0.0), sv / 1e-10, Some(1.0));
        } else {
            c.push(format!("rank:{f}:full"), C::new(sv, 0.0), C::new(1e-8, 0.0), 1e-8 / sv, Some(1.0));
        }
    }
    Ok(())
}

fn pastro_params(s: &mut Sampler, n: usize) -> Result<PastroParams<f64>> {
    let (q, t) = (s.cx(), s.cx());
    let sq = q.sqrt();
    let a = sq * s.cx();
    let b = sq * s.cx();
    PastroParams::new(n, a, b, q, t)
}

fn pastro_trial(trial: usize, s: &mut Sampler, c: &mut Cases) -> Result<()> {
    let small = Partition::rectangle(3, 2).subpartitions();
    for n in [1, 2] {
        let pp = pastro_params(s, n)?;
        let w = s.cxs(n);
        let lam = s.pick(&small).clone();
        if lam.len() > n {
            continue;
        }
        let direct = pastro_p_direct(&lam, &w, &pp)?;
        for e in Expansion::ALL {
            c.rel(format!("expansion:{e:?}{lam}(n={n})"), pastro_p(&lam, &w, &pp, e)?, direct);
        }
        let near = pp.with_ab(pp.a, pp.q * (1.0 + 1e-6));
        c.rel_fixed(
            format!("continuity{lam}(n={n})"),
            pastro_p_direct(&lam, &w, &near)?,
            macdonald_specialize(&lam, &w, pp.a, pp.q, pp.t)?,
            1e-4,
        );
    }

    let pp = pastro_params(s, 2)?;
    let w = s.cxs(2);
    for lam in [Partition::from_slice(&[1]), Partition::from_slice(&[1, 1])] {
        for op in PastroOp::ALL {
            let lhs = pastro_difference_apply(op, &lam, &w, &pp)?;
            let rhs = pastro_difference_rhs(op, &lam, &w, &pp)?;
            c.rel_fixed(format!("operator:{op:?}{lam}"), lhs, rhs, 1e-8);
        }
    }
    let parts = Partition::rectangle(2, 2).subpartitions();
    for which in [DualityBase::T0, DualityBase::T2] {
        for lam in &parts {
            for kap in &parts {
                let (l, r) = pastro_duality_sides(which, lam, kap, &pp)?;
                c.rel(format!("duality:{which:?}{lam}{kap}"), l, r);
            }
        }
    }

    let lf = lift(&pp, C::one());
    let z: Vec<C> = w.iter().map(|&x| lf.z_of_w(x, &pp)).collect();
    let lam = s.pick(&parts[1..]).clone();
    let pr = probe_pastro(&lam, &z, &lf, pp.q, pp.t)?;
    c.rel_fixed(format!("probe{lam}:lc"), pr.probe.lc, pr.target, 1e-2);

    if trial == 0 {
        let pp = pastro_params(s, 1)?;
        let lams: Vec<Partition> = (0..=3).map(|k| Partition::from_slice(&[k])).collect();
        let gram = pastro_gram(&lams, &pp, 2048)?;
        for (i, l) in lams.iter().enumerate() {
            for (j, k) in lams.iter().enumerate() {
                if i == j {
                    c.rel_fixed(format!("gram1:{l}{k}"), gram[i][j], pastro_norm(l, &pp)?, 1e-6);
                } else {
                    c.abs_fixed(format!("gram1:{l}{k}"), gram[i][j], 1e-6);
                }
            }
        }
    }
    Ok(())
}
