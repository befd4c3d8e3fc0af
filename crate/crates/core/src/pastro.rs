//! Multivariate Pastro polynomials p_λ(w; A, B) and q_λ(w; A, B) = p_λ(1/w; B, A):
//! their three expansions, the Macdonald specialization B = q, the
//! biorthogonality measure on the unit torus, the evaluation dualities and
//! the limiting difference equations.

use crate::biorthogonal::{biortho_r_via_omega, BiorthoParams};
use crate::csymbols::{c_tilde, c_tilde_den, CKind};
use crate::degenerations::{deep_ladder, interp_limit, limit_binom, LimitFamily};
use crate::error::{guard, Error, Result};
use crate::kernels::{qpoch_inf, EllipticParams};
use crate::partitions::Partition;
use crate::scalar::{ipow, modulus, re, rel_err, Cx, Real};
use crate::valuation::{probe_on, ProbeResult};
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Parameters (n, A, B, q, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PastroParams<T: Real> {
    pub n: usize,
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub q: Cx<T>,
    pub t: Cx<T>,
}

impl<T: Real> PastroParams<T> {
    pub fn new(n: usize, a: Cx<T>, b: Cx<T>, q: Cx<T>, t: Cx<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if a.is_zero() || b.is_zero() || q.is_zero() || t.is_zero() {
            return Err(Error::Domain("A, B, q, t must be nonzero".into()));
        }
        Ok(PastroParams { n, a, b, q, t })
    }

    /// Same parameters with (A, B) replaced.
    pub fn with_ab(&self, a: Cx<T>, b: Cx<T>) -> Self {
        PastroParams { a, b, ..*self }
    }

    pub fn sqrt_q(&self) -> Cx<T> {
        self.q.sqrt()
    }

    /// |t| < 1, |A q^{−1/2}| < 1, |B q^{−1/2}| < 1 and |q| < 1: every pole
    /// of the measure is strictly off the unit torus on the correct side.
    pub fn quadrature_domain(&self) -> bool {
        let sq = self.sqrt_q();
        modulus(self.q) < 1.0 && modulus(self.t) < 1.0 && modulus(self.a / sq) < 1.0 && modulus(self.b / sq) < 1.0
    }

    fn tn1(&self) -> Cx<T> {
        ipow(self.t, self.n as i64 - 1)
    }
}

/// Which Ω-expansion of the biorthogonal function is taken to the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expansion {
    /// Around t₀: binomial F2, interpolation functions F2.
    T0,
    /// Around t₂: binomial F1, interpolation functions F1.
    T2,
    /// Around t₃: binomial E2, Macdonald polynomials.
    T3,
}

impl Expansion {
    pub const ALL: [Expansion; 3] = [Expansion::T0, Expansion::T2, Expansion::T3];

    pub fn parse(s: &str) -> Option<Expansion> {
        match s.to_ascii_lowercase().as_str() {
            "t0" => Some(Expansion::T0),
            "t2" => Some(Expansion::T2),
            "t3" => Some(Expansion::T3),
            _ => None,
        }
    }
}

/// Parameters (t₀..t₃; u₀, u₁) of the biorthogonal functions, balanced
/// without the nome: t^{2(n−1)} t₀t₁t₂t₃u₀u₁ = q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PastroLift<T: Real> {
    pub t: [Cx<T>; 4],
    pub u: [Cx<T>; 2],
}

impl<T: Real> PastroLift<T> {
    /// (A, B) and the map z ↦ w of this parameter choice.
    pub fn ab(&self, pp: &PastroParams<T>) -> (Cx<T>, Cx<T>) {
        let tn1 = pp.tn1();
        (pp.q / (tn1 * self.t[1] * self.u[0]), pp.q / (tn1 * self.t[3] * self.u[1]))
    }

    pub fn w_of_z(&self, z: Cx<T>, pp: &PastroParams<T>) -> Cx<T> {
        pp.sqrt_q() / (pp.tn1() * self.t[2] * self.t[3] * self.u[1] * z)
    }

    pub fn z_of_w(&self, w: Cx<T>, pp: &PastroParams<T>) -> Cx<T> {
        pp.sqrt_q() / (pp.tn1() * self.t[2] * self.t[3] * self.u[1] * w)
    }
}

/// A lift of (A, B) with free choices t₀ = (AB/q)^{1/2}·c, u₀ = u₁ = 1.
pub fn lift<T: Real>(pp: &PastroParams<T>, c: Cx<T>) -> PastroLift<T> {
    let tn1 = pp.tn1();
    let t0 = (pp.a * pp.b / pp.q).sqrt() * c;
    let t2 = pp.a * pp.b / (pp.q * t0);
    let t1 = pp.q / (pp.a * tn1);
    let t3 = pp.q / (pp.b * tn1);
    PastroLift { t: [t0, t1, t2, t3], u: [Cx::one(), Cx::one()] }
}

/// c^{|λ|} q^{eq·n(λ')} t^{et·n(λ)}.
fn nmono<T: Real>(lam: &Partition, c: Cx<T>, eq: i64, et: i64, q: Cx<T>, t: Cx<T>) -> Cx<T> {
    ipow(c, lam.size() as i64) * ipow(q, eq * lam.n_conj() as i64) * ipow(t, et * lam.n_stat() as i64)
}

/// P_λ(z; t₀:t₁,t₂,t₃; u₀,u₁), the leading coefficient of the biorthogonal
/// function at the Pastro exponents, by one of the three expansions.
pub fn pastro_big_p<T: Real>(
    lam: &Partition,
    z: &[Cx<T>],
    lift: &PastroLift<T>,
    q: Cx<T>,
    t: Cx<T>,
    expansion: Expansion,
) -> Result<Cx<T>> {
    let n = z.len();
    if lam.len() > n {
        return Err(Error::Precondition(format!("ℓ({lam}) exceeds n = {n}")));
    }
    let [t0, t1, t2, t3] = lift.t;
    let [u0, u1] = lift.u;
    let tn1 = ipow(t, n as i64 - 1);
    let tn = tn1 * t;
    let zi: Vec<Cx<T>> = z.iter().map(|x| x.inv()).collect();
    let one = Cx::<T>::one();
    let x0 = q / (t1 * u0);
    let ctx = "Pastro expansion";
    let weight = |mu: &Partition, last: Cx<T>| -> Result<Cx<T>> {
        Ok(c_tilde(CKind::Minus, mu, t, q, t) * c_tilde(CKind::Zero, mu, x0, q, t)
            / c_tilde_den(CKind::Zero, mu, &[tn, last], q, t, ctx)?)
    };
    let mut acc = Cx::<T>::zero();
    for mu in lam.subpartitions() {
        let term = match expansion {
            Expansion::T0 => {
                limit_binom(LimitFamily::F2, lam, &mu, one, one, q, t)?
                    * weight(&mu, tn1 * t0 * t2)?
                    * interp_limit(LimitFamily::F2, &mu, &zi, t0, one, q, t)?
                    * nmono(&mu, -(tn1 * t0), 1, -2, q, t)
            }
            Expansion::T2 => {
                limit_binom(LimitFamily::F1, lam, &mu, one, one, q, t)?
                    * weight(&mu, tn1 * t0 * t2)?
                    * interp_limit(LimitFamily::F1, &mu, &zi, t2, one, q, t)?
                    * nmono(&mu, -(tn1 * t0 * t1 * u0 / q), -1, 0, q, t)
            }
            Expansion::T3 => {
                let b = (tn1 * t3 * u1).inv();
                limit_binom(LimitFamily::E2, lam, &mu, one, b, q, t)?
                    * weight(&mu, tn1 * t3 * u1)?
                    * interp_limit(LimitFamily::T, &mu, &zi, one, one, q, t)?
                    * nmono(&mu, t2.inv(), 0, -1, q, t)
            }
        };
        acc = acc + term;
    }
    let pre = match expansion {
        Expansion::T0 => one,
        Expansion::T2 => ipow(x0, lam.size() as i64),
        Expansion::T3 => {
            ipow(x0, lam.size() as i64) * c_tilde(CKind::Zero, lam, (tn1 * t3 * u1).inv(), q, t)
                / c_tilde_den(CKind::Zero, lam, &[tn1 * t0 * t2], q, t, ctx)?
        }
    };
    Ok(pre * acc)
}

/// p_λ(w; A, B) by the chosen expansion.
pub fn pastro_p<T: Real>(lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>, expansion: Expansion) -> Result<Cx<T>> {
    check_len(lam, w, pp)?;
    let lf = lift(pp, Cx::one());
    let z: Vec<Cx<T>> = w.iter().map(|&x| lf.z_of_w(x, pp)).collect();
    pastro_big_p(lam, &z, &lf, pp.q, pp.t, expansion)
}

/// p_λ(w; A, B) by the Macdonald expansion, written in (w, A, B) only.
pub fn pastro_p_direct<T: Real>(lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>) -> Result<Cx<T>> {
    check_len(lam, w, pp)?;
    let (q, t) = (pp.q, pp.t);
    let tn1 = pp.tn1();
    let tn = tn1 * t;
    let ctx = "Pastro polynomial";
    let bq = pp.b / q;
    let ws: Vec<Cx<T>> = w.iter().map(|&x| x * pp.sqrt_q() / pp.b).collect();
    let one = Cx::<T>::one();
    let mut acc = Cx::<T>::zero();
    for mu in lam.subpartitions() {
        acc = acc
            + limit_binom(LimitFamily::E2, lam, &mu, one, bq, q, t)?
                * c_tilde(CKind::Minus, &mu, t, q, t)
                * c_tilde(CKind::Zero, &mu, pp.a * tn1, q, t)
                / c_tilde_den(CKind::Zero, &mu, &[tn, q / pp.b], q, t, ctx)?
                * interp_limit(LimitFamily::T, &mu, &ws, one, one, q, t)?
                * ipow(t, -(mu.n_stat() as i64));
    }
    let pre = c_tilde(CKind::Zero, lam, bq, q, t) / c_tilde_den(CKind::Zero, lam, &[tn1 * pp.a * pp.b / q], q, t, ctx)?
        * ipow(pp.a * tn1, lam.size() as i64);
    Ok(pre * acc)
}

/// q_λ(w; A, B) = p_λ(1/w; B, A).
pub fn pastro_q<T: Real>(lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>) -> Result<Cx<T>> {
    let wi: Vec<Cx<T>> = w.iter().map(|x| x.inv()).collect();
    pastro_p_direct(lam, &wi, &pp.with_ab(pp.b, pp.a))
}

/// P_λ(z; t₀:t₁,t₂,t₃; u₀,u₁) through the reduction to p_λ(w; A, B).
pub fn pastro_big_p_reduced<T: Real>(
    lam: &Partition,
    z: &[Cx<T>],
    lift: &PastroLift<T>,
    q: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    let n = z.len();
    let tmp = PastroParams::new(n, Cx::one(), Cx::one(), q, t)?;
    let (a, b) = lift.ab(&tmp);
    let pp = tmp.with_ab(a, b);
    let w: Vec<Cx<T>> = z.iter().map(|&x| lift.w_of_z(x, &pp)).collect();
    pastro_p_direct(lam, &w, &pp)
}

fn check_len<T: Real>(lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>) -> Result<()> {
    if w.len() != pp.n {
        return Err(Error::Precondition(format!("expected {} variables, got {}", pp.n, w.len())));
    }
    if lam.len() > pp.n {
        return Err(Error::Precondition(format!("ℓ({lam}) exceeds n = {}", pp.n)));
    }
    Ok(())
}

/// p_λ(w; A, q): C̃⁻_λ(t)/C̃⁰_λ(tⁿ) (A q^{−1/2} t^{n−1})^{|λ|} t^{−n(λ)} P_λ(w).
pub fn macdonald_specialize<T: Real>(lam: &Partition, w: &[Cx<T>], a: Cx<T>, q: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    let n = w.len();
    let tn1 = ipow(t, n as i64 - 1);
    let c = c_tilde(CKind::Minus, lam, t, q, t) / c_tilde_den(CKind::Zero, lam, &[tn1 * t], q, t, "Macdonald specialization")?;
    let one = Cx::<T>::one();
    Ok(c * ipow(a * tn1 / q.sqrt(), lam.size() as i64)
        * ipow(t, -(lam.n_stat() as i64))
        * interp_limit(LimitFamily::T, lam, w, one, one, q, t)?)
}

/// Density threshold below which a quadrature node is rejected.
pub const QUADRATURE_GUARD: f64 = 1e-6;

/// The constant (q;q)ⁿ/(n!(t;q)ⁿ) ∏_j (t^j, AB t^{n−j}/q; q)/(A t^{j−1}, B t^{j−1}; q).
pub fn measure_normalization<T: Real>(pp: &PastroParams<T>) -> Result<Cx<T>> {
    let (q, t) = (pp.q, pp.t);
    let n = pp.n as i64;
    let fact: f64 = (1..=pp.n).map(|k| k as f64).product();
    let mut acc = ipow(qpoch_inf(q, q)? / guard(qpoch_inf(t, q)?, "measure normalization")?, n) / T::lit(fact);
    for j in 1..=n {
        acc = acc * qpoch_inf(ipow(t, j), q)? * qpoch_inf(pp.a * pp.b * ipow(t, n - j) / q, q)?
            / guard(qpoch_inf(pp.a * ipow(t, j - 1), q)? * qpoch_inf(pp.b * ipow(t, j - 1), q)?, "measure normalization")?;
    }
    Ok(acc)
}

/// The measure density at w (without dw/2πiw and the normalization).
pub fn measure_density<T: Real>(w: &[Cx<T>], pp: &PastroParams<T>) -> Result<Cx<T>> {
    let (q, t) = (pp.q, pp.t);
    let sq = pp.sqrt_q();
    let check = |x: Cx<T>, what: &str| -> Result<Cx<T>> {
        let m = modulus(x);
        if m < QUADRATURE_GUARD {
            return Err(Error::PoleGuard { context: what.to_string(), modulus: m });
        }
        Ok(x)
    };
    let mut acc = Cx::<T>::one();
    for j in 0..w.len() {
        for k in j + 1..w.len() {
            let (r, s) = (w[j] / w[k], w[k] / w[j]);
            acc = acc * qpoch_inf(r, q)? * qpoch_inf(s, q)?
                / check(qpoch_inf(t * r, q)? * qpoch_inf(t * s, q)?, "cross term")?;
        }
    }
    for &x in w {
        let theta = qpoch_inf(sq * x, q)? * qpoch_inf(q / (sq * x), q)?;
        acc = acc * theta / check(qpoch_inf(pp.a * x / sq, q)? * qpoch_inf(pp.b / (x * sq), q)?, "Pochhammer denominator")?;
    }
    Ok(acc)
}

/// Nodes of the M-point trapezoid rule on the unit circle.
fn circle_nodes<T: Real>(m: usize) -> Vec<Cx<T>> {
    let tau = T::PI() * T::lit(2.0) / T::lit(m as f64);
    (0..m).map(|k| Complex::from_polar(T::one(), tau * T::lit(k as f64))).collect()
}

fn torus_nodes<T: Real>(n: usize, m: usize) -> Vec<Vec<Cx<T>>> {
    let c = circle_nodes::<T>(m);
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let k = idx % m;
                    idx /= m;
                    c[k]
                })
                .collect()
        })
        .collect()
}

/// ⟨f, g⟩ by the M-point trapezoid rule per circle on the unit torus.
pub fn pastro_inner_product<T, F, G>(f: F, g: G, pp: &PastroParams<T>, m: usize) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>> + Sync,
    G: Fn(&[Cx<T>]) -> Result<Cx<T>> + Sync,
{
    if !pp.quadrature_domain() {
        return Err(Error::Domain("quadrature needs |q|, |t|, |A/√q|, |B/√q| < 1".into()));
    }
    let nodes = torus_nodes::<T>(pp.n, m);
    let vals: Vec<Cx<T>> = nodes
        .par_iter()
        .map(|w| Ok(f(w)? * g(w)? * measure_density(w, pp)?))
        .collect::<Result<_>>()?;
    let sum = vals.iter().fold(Cx::<T>::zero(), |acc, &v| acc + v);
    Ok(sum / T::lit(nodes.len() as f64) * measure_normalization(pp)?)
}

/// Gram matrix [⟨p_λ, q_μ⟩] over the given partitions, evaluating each
/// polynomial once per node.
pub fn pastro_gram<T: Real>(lams: &[Partition], pp: &PastroParams<T>, m: usize) -> Result<Vec<Vec<Cx<T>>>> {
    if !pp.quadrature_domain() {
        return Err(Error::Domain("quadrature needs |q|, |t|, |A/√q|, |B/√q| < 1".into()));
    }
    let nodes = torus_nodes::<T>(pp.n, m);
    let k = lams.len();
    let rows: Vec<Vec<Cx<T>>> = nodes
        .par_iter()
        .map(|w| {
            let d = measure_density(w, pp)?;
            let ps: Vec<Cx<T>> = lams.iter().map(|l| pastro_p_direct(l, w, pp)).collect::<Result<_>>()?;
            let qs: Vec<Cx<T>> = lams.iter().map(|l| pastro_q(l, w, pp)).collect::<Result<_>>()?;
            Ok((0..k * k).map(|ij| ps[ij / k] * qs[ij % k] * d).collect())
        })
        .collect::<Result<_>>()?;
    let scale = measure_normalization(pp)? / T::lit(nodes.len() as f64);
    let mut out = vec![vec![Cx::<T>::zero(); k]; k];
    for row in &rows {
        for (ij, v) in row.iter().enumerate() {
            out[ij / k][ij % k] = out[ij / k][ij % k] + *v;
        }
    }
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * scale;
        }
    }
    Ok(out)
}

/// ⟨p_λ, q_λ⟩ = t^{−2n(λ)} (AB t^{2(n−1)}/q)^{|λ|} C̃⁻_λ(q, t)/C̃⁰_λ(tⁿ, AB t^{n−1}/q).
pub fn pastro_norm<T: Real>(lam: &Partition, pp: &PastroParams<T>) -> Result<Cx<T>> {
    let (q, t) = (pp.q, pp.t);
    let tn1 = pp.tn1();
    let ab = pp.a * pp.b;
    let num = c_tilde(CKind::Minus, lam, q, q, t) * c_tilde(CKind::Minus, lam, t, q, t);
    let den = c_tilde_den(CKind::Zero, lam, &[tn1 * t, ab * tn1 / q], q, t, "Pastro norm")?;
    Ok(nmono(lam, ab * tn1 * tn1 / q, 0, -2, q, t) * num / den)
}

/// The limiting difference operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PastroOp {
    D01,
    D02,
    D03,
    D12,
    D13,
    D23,
    Dminus,
    Dplus,
}

impl PastroOp {
    pub const ALL: [PastroOp; 8] =
        [PastroOp::D01, PastroOp::D02, PastroOp::D03, PastroOp::D12, PastroOp::D13, PastroOp::D23, PastroOp::Dminus, PastroOp::Dplus];

    pub fn parse(s: &str) -> Option<PastroOp> {
        PastroOp::ALL.into_iter().find(|k| format!("{k:?}").eq_ignore_ascii_case(s))
    }
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Σ_σ c(σ) ∏_{σ_i=−1, σ_j=1} (1 − t w_i/w_j)/(1 − w_i/w_j) f(q^{(1−σ_i)/2} w_i · shift),
/// where `factor(i, σ_i)` gives the per-coordinate coefficient.
fn sigma_sum<T, C, F>(w: &[Cx<T>], t: Cx<T>, q: Cx<T>, extra_shift: Cx<T>, factor: C, f: F) -> Result<Cx<T>>
where
    T: Real,
    C: Fn(usize, bool) -> Cx<T>,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    let n = w.len();
    let one = Cx::<T>::one();
    let mut acc = Cx::<T>::zero();
    for mask in 0..(1usize << n) {
        let plus = |i: usize| mask >> i & 1 == 1;
        let np = (0..n).filter(|&i| plus(i)).count() as i64;
        let mut c = ipow(t, binom2(np));
        let mut pts = Vec::with_capacity(n);
        for (i, &wi) in w.iter().enumerate() {
            c = c * factor(i, plus(i));
            pts.push(if plus(i) { wi * extra_shift } else { wi * q * extra_shift });
        }
        for i in (0..n).filter(|&i| !plus(i)) {
            for j in (0..n).filter(|&j| plus(j)) {
                let r = w[i] / w[j];
                c = c * (one - t * r) / guard(one - r, "cross factor 1 − w_j/w_i")?;
            }
        }
        acc = acc + c * f(&pts)?;
    }
    Ok(acc)
}

/// Left-hand side of the difference equation `kind` applied to the
/// appropriately parameter-shifted p_λ (p_{λ+1ⁿ} for D⁻).
pub fn pastro_difference_apply<T: Real>(kind: PastroOp, lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>) -> Result<Cx<T>> {
    check_len(lam, w, pp)?;
    let (q, t, a, b) = (pp.q, pp.t, pp.a, pp.b);
    let n = pp.n as i64;
    let sq = pp.sqrt_q();
    let tn1 = pp.tn1();
    let one = Cx::<T>::one();
    let prod_i = |f: &dyn Fn(i64) -> Cx<T>| (1..=n).fold(one, |acc, i| acc * f(i));
    match kind {
        PastroOp::D01 => {
            let norm = ipow(t, -2 * binom2(n)) / guard(prod_i(&|i| one - q * ipow(t, 1 - i) / a), "D01")?;
            let s = sigma_sum(
                w,
                t,
                q,
                q,
                |i, plus| {
                    if plus {
                        sq / (a * w[i]) * (one - sq * w[i])
                    } else {
                        tn1 * (one - sq / (a * w[i]))
                    }
                },
                p_at::<T>(lam, pp.with_ab(a / q, b * q)),
            )?;
            Ok(norm * s)
        }
        PastroOp::D02 => {
            let norm = ipow(t, -binom2(n)) / guard(prod_i(&|i| one - ipow(t, n - i) * a * b / q), "D02")?;
            let s = sigma_sum(
                w,
                t,
                q,
                one,
                |i, plus| {
                    if plus {
                        one - b / (sq * w[i])
                    } else {
                        tn1 * b / (sq * w[i]) * (one - a * w[i] / sq)
                    }
                },
                p_at::<T>(lam, pp.with_ab(a, b * q)),
            )?;
            Ok(norm * s)
        }
        PastroOp::D03 | PastroOp::D23 => pastro_p_direct(lam, w, pp),
        PastroOp::D12 => {
            let norm = guard(prod_i(&|i| one - q * ipow(t, 1 - i) / a), "D12")?.inv();
            let s = sigma_sum(
                w,
                t,
                q,
                one,
                |i, plus| {
                    if plus {
                        -(q / (a * tn1)) * (one - b / (w[i] * sq))
                    } else {
                        one - sq * b / (a * w[i])
                    }
                },
                p_at::<T>(lam, pp.with_ab(a / q, b * q)),
            )?;
            Ok(norm * s)
        }
        PastroOp::D13 => {
            let norm = guard(prod_i(&|i| one - q * ipow(t, 1 - i) / a), "D13")?.inv();
            let s = sigma_sum(w, t, q, one, |_, plus| if plus { -(q / (a * tn1)) } else { one }, p_at::<T>(lam, pp.with_ab(a / q, b)))?;
            Ok(norm * s)
        }
        PastroOp::Dminus => {
            let up = lam.add_rows(1, pp.n)?;
            let wprod = w.iter().fold(one, |acc, &x| acc * x);
            let base = ipow(sq / a, n) / wprod * ipow(t, -binom2(n));
            let f = p_at::<T>(&up, pp.with_ab(a / q, b));
            let mut acc = Cx::<T>::zero();
            // The σ-dependent sign and t-power depend only on the number of +1's.
            for mask in 0..(1usize << pp.n) {
                let np = mask.count_ones() as i64;
                let sig = 2 * np - n;
                let e = (-n - sig) / 2;
                let sign = if e.rem_euclid(2) == 0 { one } else { -one };
                let c = sign * ipow(t, -(n - 1) * (sig + n) / 2 + binom2((sig + n) / 2));
                let single = sigma_single(w, t, q, mask, &f)?;
                acc = acc + c * single;
            }
            Ok(base * acc)
        }
        PastroOp::Dplus => {
            let mut norm = one;
            for i in 1..=n {
                norm = norm * a * tn1 / guard(one - a * b / q * ipow(t, n - i), "D+")?;
            }
            let s = sigma_sum(
                w,
                t,
                q,
                one,
                |i, plus| {
                    if plus {
                        w[i] / (sq * tn1) * (one - b / (w[i] * sq))
                    } else {
                        one - a * w[i] / sq
                    }
                },
                p_at::<T>(lam, pp.with_ab(a, b * q)),
            )?;
            Ok(norm * s)
        }
    }
}

fn p_at<'a, T: Real>(lam: &'a Partition, pars: PastroParams<T>) -> impl Fn(&[Cx<T>]) -> Result<Cx<T>> + 'a {
    move |x| pastro_p_direct(lam, x, &pars)
}

/// One σ-term of a signed-shift sum without coefficient: cross factors times f.
fn sigma_single<T, F>(w: &[Cx<T>], t: Cx<T>, q: Cx<T>, mask: usize, f: &F) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    let n = w.len();
    let one = Cx::<T>::one();
    let plus = |i: usize| mask >> i & 1 == 1;
    let mut c = one;
    for i in (0..n).filter(|&i| !plus(i)) {
        for j in (0..n).filter(|&j| plus(j)) {
            let r = w[i] / w[j];
            c = c * (one - t * r) / guard(one - r, "cross factor 1 − w_j/w_i")?;
        }
    }
    let pts: Vec<Cx<T>> = (0..n).map(|i| if plus(i) { w[i] } else { w[i] * q }).collect();
    Ok(c * f(&pts)?)
}

/// Right-hand side of the difference equation `kind`.
pub fn pastro_difference_rhs<T: Real>(kind: PastroOp, lam: &Partition, w: &[Cx<T>], pp: &PastroParams<T>) -> Result<Cx<T>> {
    let (q, t, a, b) = (pp.q, pp.t, pp.a, pp.b);
    let n = pp.n as i64;
    let tn1 = pp.tn1();
    let one = Cx::<T>::one();
    let base = || pastro_p_direct(lam, w, pp);
    let qs = || ipow(q, -(lam.size() as i64));
    match kind {
        PastroOp::D01 | PastroOp::D02 | PastroOp::D03 | PastroOp::D23 => base(),
        PastroOp::D12 => Ok(qs() * base()?),
        PastroOp::D13 => Ok(qs() * c_tilde(CKind::Zero, lam, tn1 * a * b / q, q, t)
            / c_tilde_den(CKind::Zero, lam, &[tn1 * a * b / (q * q)], q, t, "D13 eigenvalue")?
            * base()?),
        PastroOp::Dminus => {
            let mut ev = one;
            for i in 1..=n {
                let li = lam.part(i as usize - 1) as i64;
                ev = ev * (one - a / q * ipow(t, i - 1)) * (one - ipow(t, i - n) * ipow(q, -li - 1))
                    / guard(one - a * b / (q * q) * ipow(t, n - i), "D− eigenvalue")?;
            }
            Ok(ev * base()?)
        }
        PastroOp::Dplus => pastro_p_direct(&lam.add_rows(1, pp.n)?, w, pp),
    }
}

/// The two evaluation dualities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualityBase {
    T0,
    T2,
}

/// Both sides of the evaluation duality based at t₀ or t₂.
pub fn pastro_duality_sides<T: Real>(
    which: DualityBase,
    lam: &Partition,
    kappa: &Partition,
    pp: &PastroParams<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let n = pp.n;
    let (q, t, a, b) = (pp.q, pp.t, pp.a, pp.b);
    let sq = pp.sqrt_q();
    let pts = |mu: &Partition| -> Vec<Cx<T>> {
        (1..=n)
            .map(|i| {
                let g = ipow(t, (n - i) as i64) * ipow(q, mu.part(i - 1) as i64);
                match which {
                    DualityBase::T0 => sq / (a * g),
                    DualityBase::T2 => b / sq * g,
                }
            })
            .collect()
    };
    let weight = |mu: &Partition| match which {
        DualityBase::T0 => Cx::<T>::one(),
        DualityBase::T2 => ipow(a * pp.tn1(), -(mu.size() as i64)),
    };
    let l = weight(lam) * pastro_p_direct(lam, &pts(kappa), pp)?;
    let r = weight(kappa) * pastro_p_direct(kappa, &pts(lam), pp)?;
    Ok((l, r))
}

/// Checks the duality to 1e−9 relative.
pub fn pastro_duality_check<T: Real>(which: DualityBase, lam: &Partition, kappa: &Partition, pp: &PastroParams<T>) -> Result<bool> {
    let (l, r) = pastro_duality_sides(which, lam, kappa, pp)?;
    Ok(rel_err(l, r) <= 1e-9)
}

/// Outcome of probing the elliptic biorthogonal function at the Pastro
/// exponents against P_λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PastroProbe {
    pub probe: ProbeResult,
    pub target: Complex<f64>,
    pub rel_err: f64,
    /// Relative error of the raw value at p = 1e−2 and p = 1e−3.
    pub raw_rel_err: [f64; 2],
}

/// R̃_λ(z p^{−1/4}; t₀p^{−1/4}:t₁,t₂p^{1/4},t₃p^{1/2}; u₀,u₁p^{1/2}) through
/// the Ω-expansion around t₃ p^{1/2}, probed against P_λ(z; ...).
pub fn probe_pastro(lam: &Partition, z: &[Complex<f64>], lift: &PastroLift<f64>, q: Complex<f64>, t: Complex<f64>) -> Result<PastroProbe> {
    let n = z.len();
    let target = pastro_big_p(lam, z, lift, q, t, Expansion::T3)?;
    let f = |p: f64| -> Result<Complex<f64>> {
        let par = EllipticParams::new(q, t, re(p))?;
        let s = |e: f64| p.powf(e);
        let [t0, t1, t2, t3] = lift.t;
        let ts = [t0 * s(-0.25), t1, t2 * s(0.25), t3 * s(0.5)];
        let ps = BiorthoParams::with_u1(n, ts, [lift.u[0], lift.u[1] * s(0.5)], par)?;
        let zs: Vec<Complex<f64>> = z.iter().map(|&x| x * s(-0.25)).collect();
        biortho_r_via_omega(lam, &zs, &ps, ts[3])
    };
    let probe = probe_on(&deep_ladder(), f, 4)?;
    Ok(PastroProbe { probe, target, rel_err: rel_err(probe.lc, target), raw_rel_err: [rel_err(f(1e-2)?, target), rel_err(f(1e-3)?, target)] })
}
