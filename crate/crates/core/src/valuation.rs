//! Valuations and leading coefficients as p → 0.
//!
//! Exponents are exact rationals. The valuation of θ(x p^α; p) is the
//! piecewise-linear function `theta_val`; everything else is assembled from
//! it. Numeric probes fit log|f(p)| against log p on a fixed ladder.

use crate::csymbols::{c_tilde, c_tilde_den, delta_tilde, shift_monomial, CKind};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::{ipow, Cx, Real};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type Q = Rational64;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Fractional part {x} = x − ⌊x⌋.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

/// g(x) = {x}(1 − {x}).
pub fn frac_g(x: Q) -> Q {
    let f = frac(x);
    f * (Q::one() - f)
}

/// val θ(x p^α; p) = ½{α}({α}−1) − ½α(α−1).
pub fn theta_val(alpha: Q) -> Q {
    let f = frac(alpha);
    let half = q(1, 2);
    half * f * (f - Q::one()) - half * alpha * (alpha - Q::one())
}

/// val C^ε_λ(x p^α) = |λ| theta_val(α), for every kind ε.
pub fn c_val(lam: &Partition, alpha: Q) -> Q {
    Q::from(lam.size() as i64) * theta_val(alpha)
}

/// lc θ(x p^α; p).
pub fn theta_lc<T: Real>(x: Cx<T>, alpha: Q) -> Cx<T> {
    let fl = alpha.floor().to_integer();
    let base = ipow(-x.inv(), fl);
    if alpha.is_integer() {
        (Cx::<T>::one() - x) * base
    } else {
        base
    }
}

/// lc C^ε_λ(x p^α) for 0 ≤ α < 1: the tilde symbol at α = 0, else 1.
pub fn c_lc<T: Real>(kind: CKind, lam: &Partition, x: Cx<T>, alpha: Q, qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    check_unit(alpha)?;
    if alpha.is_zero() {
        Ok(c_tilde(kind, lam, x, qq, t))
    } else {
        Ok(Cx::one())
    }
}

fn check_unit(alpha: Q) -> Result<()> {
    if alpha < Q::zero() || alpha >= Q::one() {
        return Err(Error::Domain(format!("exponent {alpha} is outside [0, 1)")));
    }
    Ok(())
}

/// val Δ_λ(a p^α | tⁿ) for any α; equals −2α|λ| on [0, 1).
pub fn delta_val(lam: &Partition, alpha: Q) -> Q {
    let one = Q::one();
    Q::from(lam.size() as i64) * (q(2, 1) * theta_val(one + alpha) - theta_val(alpha))
}

/// (val, lc) of Δ_λ(a p^α | tⁿ) for 0 ≤ α < 1.
pub fn delta_val_lc<T: Real>(lam: &Partition, a: Cx<T>, alpha: Q, n: usize, qq: Cx<T>, t: Cx<T>) -> Result<(Q, Cx<T>)> {
    check_unit(alpha)?;
    let val = -q(2, 1) * alpha * Q::from(lam.size() as i64);
    if lam.len() > n {
        return Ok((val, Cx::zero()));
    }
    if alpha.is_zero() {
        return Ok((val, delta_tilde(lam, a, n, qq, t)?));
    }
    let num = c_tilde(CKind::Zero, lam, ipow(t, n as i64), qq, t);
    let den = c_tilde_den(CKind::Minus, lam, &[qq, t], qq, t, "Δ leading coefficient")?;
    let c = -(a * a * qq * qq * ipow(t, n as i64 - 1)).inv();
    let mono = shift_monomial(c, lam.size(), qq, -3 * lam.n_conj() as i64, t, 5 * lam.n_stat() as i64);
    Ok((val, num / den * mono))
}

/// The per-box valuation x(α, β, ζ) of R*(z p^ζ; a p^α, b p^β).
pub fn interp_scale(alpha: Q, beta: Q, zeta: Q) -> Q {
    let one = Q::one();
    theta_val(alpha + zeta) + theta_val(alpha - zeta) - theta_val(one - beta + zeta) - theta_val(one - beta - zeta)
}

/// The four sum expressions for Ω related by the D₄ flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaVariant {
    Plain,
    F12,
    F13,
    F1234,
}

impl OmegaVariant {
    pub const ALL: [OmegaVariant; 4] = [OmegaVariant::Plain, OmegaVariant::F12, OmegaVariant::F13, OmegaVariant::F1234];

    /// Exponents (α, β, γ) of the flipped expression.
    pub fn apply(self, alpha: Q, beta: Q, g: [Q; 4]) -> (Q, Q, [Q; 4]) {
        let flip: &[usize] = match self {
            OmegaVariant::Plain => &[],
            OmegaVariant::F12 => &[0, 1],
            OmegaVariant::F13 => &[0, 2],
            OmegaVariant::F1234 => &[0, 1, 2, 3],
        };
        let mut b = beta;
        let mut out = g;
        for &r in flip {
            b -= g[r];
            out[r] = -g[r];
        }
        (alpha, b, out)
    }
}

/// f(α, β; γ) controlling which summand of Ω dominates.
pub fn omega_f_plain(alpha: Q, beta: Q, g: [Q; 4]) -> Q {
    let s: Q = g.iter().copied().sum();
    let mut f = frac_g(alpha + beta - s) + frac_g(q(2, 1) * alpha) - frac_g(-alpha - beta) - frac_g(s - q(2, 1) * beta);
    for &gr in &g {
        f += frac_g(gr - beta) - frac_g(alpha - gr);
    }
    f
}

/// The variant of f obtained from the corresponding flip.
pub fn omega_f(variant: OmegaVariant, alpha: Q, beta: Q, g: [Q; 4]) -> Q {
    let (a, b, gg) = variant.apply(alpha, beta, g);
    omega_f_plain(a, b, gg)
}

/// Coefficients (A, B, C) with val(summand μ) = A|λ| + B|μ| + C|κ| in the
/// double sum for Ω; B = −f/2.
pub fn omega_summand_coeffs(alpha: Q, beta: Q, g: [Q; 4]) -> (Q, Q, Q) {
    let one = Q::one();
    let two = q(2, 1);
    let s: Q = g.iter().copied().sum();
    let tv = theta_val;
    let mut a = tv(one + alpha + beta) - tv(one + alpha - beta);
    let mut b = tv(alpha + beta + one - s) - tv(s - two * beta) - tv(-one - alpha - beta) + tv(two + two * alpha);
    let mut c = -(tv(s - alpha - beta - one) - tv(one + alpha - beta));
    for &gr in &g {
        a += tv(one + alpha - gr);
        b += tv(gr - beta) - tv(one + alpha - gr);
        c -= tv(gr - beta);
    }
    (a, b, c)
}

/// Smallest perturbation used to decide local constancy around a point
/// whose coordinates have the given common denominator.
fn probe_eps(den: i64) -> Q {
    q(1, 64 * den.max(1))
}

pub(crate) fn common_den(xs: &[Q]) -> i64 {
    xs.iter().fold(1i64, |acc, x| num_integer_lcm(acc, *x.denom()))
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    (a / gcd(a, b) * b).abs()
}

fn directions() -> impl Iterator<Item = [i64; 6]> {
    let axis = (0..6).flat_map(|i| {
        [1i64, -1].into_iter().map(move |s| {
            let mut d = [0i64; 6];
            d[i] = s;
            d
        })
    });
    let all = (0..729).filter_map(|mut k| {
        let mut d = [0i64; 6];
        for slot in d.iter_mut() {
            *slot = k % 3 - 1;
            k /= 3;
        }
        (d.iter().filter(|&&x| x != 0).count() > 1).then_some(d)
    });
    axis.chain(all)
}

/// Whether the variant of f is constant on a neighbourhood of the point.
pub fn omega_f_locally_constant(variant: OmegaVariant, alpha: Q, beta: Q, g: [Q; 4]) -> bool {
    let mut pts = vec![alpha, beta];
    pts.extend_from_slice(&g);
    let eps = probe_eps(common_den(&pts));
    let f0 = omega_f(variant, alpha, beta, g);
    for d in directions() {
        let e = |i: usize| eps * Q::from(d[i]);
        let gg = [g[0] + e(2), g[1] + e(3), g[2] + e(4), g[3] + e(5)];
        if omega_f(variant, alpha + e(0), beta + e(1), gg) != f0 {
            return false;
        }
    }
    true
}

/// A variant whose f is nonzero at the point or not locally constant there.
pub fn decisive_variant(alpha: Q, beta: Q, g: [Q; 4]) -> Option<OmegaVariant> {
    OmegaVariant::ALL
        .into_iter()
        .find(|&v| !omega_f(v, alpha, beta, g).is_zero())
        .or_else(|| OmegaVariant::ALL.into_iter().find(|&v| !omega_f_locally_constant(v, alpha, beta, g)))
}

/// val Ω_{λ/κ}(a p^α, b p^β; v_r p^{γ_r}) = f₁|λ| + f₂|κ|.
pub fn omega_val(alpha: Q, beta: Q, g: [Q; 4]) -> Result<(Q, Q)> {
    let v = decisive_variant(alpha, beta, g)
        .ok_or_else(|| Error::Undetermined(format!("every Ω variant is locally zero at ({alpha}, {beta}, {g:?})")))?;
    let (a, b, gg) = v.apply(alpha, beta, g);
    let (ca, cb, cc) = omega_summand_coeffs(a, b, gg);
    let zero = Q::zero();
    Ok((ca + cb.min(zero), cc + cb.max(zero)))
}

/// Integer-grid check of the four-variant lemma: on the grid with spacing
/// 1/den in [0, 1)⁶, every point has a variant that changes under some
/// perturbation of size 1/(den·128). Returns the first failing point.
pub fn four_f_grid_check(den: i64) -> Option<[i64; 6]> {
    let scale = den * 128;
    let total = (den as usize).pow(6);
    let g = |x: i64| {
        let r = x.rem_euclid(scale);
        r * (scale - r)
    };
    // f scaled by scale², coordinates in units of 1/scale.
    let f = |x: [i64; 6]| {
        let (al, be) = (x[0], x[1]);
        let gm = [x[2], x[3], x[4], x[5]];
        let s: i64 = gm.iter().sum();
        let mut v = g(al + be - s) + g(2 * al) - g(-al - be) - g(s - 2 * be);
        for gr in gm {
            v += g(gr - be) - g(al - gr);
        }
        v
    };
    let variant = |k: usize, x: [i64; 6]| -> [i64; 6] {
        let flip: &[usize] = match k {
            0 => &[],
            1 => &[0, 1],
            2 => &[0, 2],
            _ => &[0, 1, 2, 3],
        };
        let mut y = x;
        for &r in flip {
            y[1] -= x[2 + r];
            y[2 + r] = -x[2 + r];
        }
        y
    };
    let dirs: Vec<[i64; 6]> = directions().collect();
    (0..total).into_par_iter().find_map_first(|idx| {
        let mut x = [0i64; 6];
        let mut k = idx;
        for slot in x.iter_mut() {
            *slot = (k % den as usize) as i64 * 128;
            k /= den as usize;
        }
        let ok = (0..4).any(|v| {
            let f0 = f(variant(v, x));
            if f0 != 0 {
                return true;
            }
            dirs.iter().any(|d| {
                let mut y = x;
                for i in 0..6 {
                    y[i] += d[i];
                }
                f(variant(v, y)) != f0
            })
        });
        (!ok).then_some(x.map(|c| c / 128))
    })
}

/// Open-cell families of the tessellation cut by α−β, α±ζ, β±ζ ∈ ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    V,
    E1,
    E2,
    E3,
    E4,
    F1,
    F2,
    F3,
    F4,
    T,
    S,
    P1,
    P2,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::V,
        Family::E1,
        Family::E2,
        Family::E3,
        Family::E4,
        Family::F1,
        Family::F2,
        Family::F3,
        Family::F4,
        Family::T,
        Family::S,
        Family::P1,
        Family::P2,
    ];

    /// Cells in the interior of the octahedron, where the limits do not depend on z.
    pub fn is_octahedral(self) -> bool {
        matches!(self, Family::S | Family::P1 | Family::P2)
    }

    pub fn dimension(self) -> usize {
        match self {
            Family::V => 0,
            Family::E1 | Family::E2 | Family::E3 | Family::E4 => 1,
            Family::F1 | Family::F2 | Family::F3 | Family::F4 | Family::S => 2,
            Family::T | Family::P1 | Family::P2 => 3,
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| format!("{f:?}").eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An open cell: family, translation by k₁(1,0,0) + k₂(0,1,0) + k₃(½,½,½),
/// and whether the reflection ζ → −ζ was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub family: Family,
    pub shift: [i64; 3],
    pub reflection: bool,
}

/// Names the open cell containing (α, β, ζ). Points on a cutting plane
/// belong to the lower-dimensional cell.
pub fn classify_cell(alpha: Q, beta: Q, zeta: Q) -> CellId {
    // Coordinates x = α+ζ, y = α−ζ, w = β+ζ turn G into ℤ³.
    let (x, y, w) = (alpha + zeta, alpha - zeta, beta + zeta);
    let (fx, fy, fw) = (x.floor(), y.floor(), w.floor());
    let (x, y, w) = (x - fx, y - fy, w - fw);
    let (fx, fy, fw) = (fx.to_integer(), fy.to_integer(), fw.to_integer());
    let shift = [fy, fw - fx + fy, fx - fy];
    let one = Q::one();
    let n5 = -x + y + w;
    let int = [x.is_zero(), y.is_zero(), w.is_zero(), x == w, n5.is_integer()];
    let on: Vec<usize> = (0..5).filter(|&i| int[i]).map(|i| i + 1).collect();
    let (family, reflection) = match on.as_slice() {
        [] => {
            let d = x - w;
            if d > Q::zero() {
                if y < d {
                    (Family::T, false)
                } else {
                    (Family::P2, false)
                }
            } else if y < d + one {
                (Family::P1, false)
            } else {
                (Family::T, true)
            }
        }
        [2] => {
            if x > w {
                (Family::F1, false)
            } else {
                (Family::F2, true)
            }
        }
        [1] => {
            if y + w < one {
                (Family::F2, false)
            } else {
                (Family::F1, true)
            }
        }
        [3] => (if y < x { Family::F3 } else { Family::F4 }, false),
        [5] => (if x < y { Family::F3 } else { Family::F4 }, true),
        [4] => (Family::S, false),
        [2, 4, 5] => (Family::E1, false),
        [1, 3, 4] => (Family::E1, true),
        [2, 3] => (Family::E2, false),
        [1, 5] => (Family::E2, true),
        [1, 2] => (Family::E3, false),
        [3, 5] => (Family::E4, false),
        _ => (Family::V, false),
    };
    CellId { family, shift, reflection }
}

/// Exponents of t₀..t₃ (α), u₀, u₁ (γ) and the common z-exponent ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVector {
    pub alpha: [Q; 4],
    pub gamma: [Q; 2],
    pub zeta: Q,
}

impl ExponentVector {
    /// Σα + γ₀ + γ₁ − 1, zero under the balancing condition.
    pub fn balancing_defect(&self) -> Q {
        self.alpha.iter().copied().sum::<Q>() + self.gamma[0] + self.gamma[1] - Q::one()
    }

    /// Exponents (a, b; v₁..v₄) of the Ω in the expansion with v = ṽ p^ν.
    pub fn omega_args(&self, nu: Q) -> (Q, Q, [Q; 4]) {
        let one = Q::one();
        let [a0, a1, a2, a3] = self.alpha;
        let [g0, g1] = self.gamma;
        let s = -(one + g0 + g1) / q(2, 1);
        (s, g0 + s - a0, [one + s - a0 - a1, one + s - a0 - a2, one + s - a0 - a3, g0 + nu + s])
    }
}

/// (h₁, h₂): the valuation of the ν-th summand of the Ω-expansion (without
/// the C⁰ prefactor) is h₁|λ| + h₂|ν|.
pub fn biortho_h(ev: &ExponentVector, nu: Q) -> Result<(Q, Q)> {
    if !ev.balancing_defect().is_zero() {
        return Err(Error::Domain(format!("exponents violate balancing (defect {})", ev.balancing_defect())));
    }
    let (a, b, g) = ev.omega_args(nu);
    let (f1, f2) = omega_val(a, b, g)?;
    let one = Q::one();
    let g0 = ev.gamma[0];
    let c: Q = ev.alpha.iter().map(|&ar| theta_val(one - g0 - ar)).sum();
    Ok((f1, f2 + c + interp_scale(nu, g0, ev.zeta)))
}

/// Per-|λ| valuation of the C⁰ prefactor of the Ω-expansion.
pub fn biortho_prefactor_val(ev: &ExponentVector, nu: Q) -> Q {
    let one = Q::one();
    let [a0, a1, a2, a3] = ev.alpha;
    let [g0, g1] = ev.gamma;
    theta_val(one + a0 - g0)
        - theta_val(one - nu - g0)
        - theta_val(a0 + a1)
        - theta_val(a0 + a2)
        - theta_val(a0 + a3)
        - theta_val(-a0 - g1)
}

/// Per-|λ| valuation of R̃_λ. Undetermined when h₂ = 0 and the
/// interpolation cell of (ν, γ₀, ζ) lies inside the octahedron.
pub fn biortho_val(ev: &ExponentVector, nu: Q) -> Result<Q> {
    let (h1, h2) = biortho_h(ev, nu)?;
    if h2.is_zero() && classify_cell(nu, ev.gamma[0], ev.zeta).family.is_octahedral() {
        return Err(Error::Undetermined(format!(
            "h2 = 0 with (ν, γ₀, ζ) = ({nu}, {}, {}) inside the octahedron",
            ev.gamma[0], ev.zeta
        )));
    }
    Ok(biortho_prefactor_val(ev, nu) + h1 + h2.min(Q::zero()))
}

/// Ladder of nomes used by the probes: 10⁻² · 2^{−k}, k = 0..6.
pub fn probe_ladder() -> Vec<f64> {
    (0..7).map(|k| 1e-2 * 0.5f64.powi(k)).collect()
}

/// Numeric valuation and leading coefficient of f(p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    /// Fitted exponent rounded to the expected denominator.
    pub val: Q,
    /// Unrounded least-squares exponent.
    pub slope: f64,
    /// Leading coefficient, extrapolated to p = 0 in powers of p^{1/den}.
    pub lc: Complex<f64>,
    /// f(p)/p^val at the smallest ladder point.
    pub lc_raw: Complex<f64>,
    /// Largest deviation of a single-step slope from val.
    pub residual: f64,
    /// Relative change of lc when either end of the ladder is dropped.
    pub lc_spread: f64,
}

/// Evaluates f on the ladder and returns (val, lc). `expected_den` is the
/// denominator of the exponents that can occur, which sets both the
/// rounding of val and the variable p^{1/den} of the extrapolation.
pub fn probe_valuation<F>(f: F, expected_den: i64) -> Result<ProbeResult>
where
    F: Fn(f64) -> Result<Complex<f64>> + Sync,
{
    probe_on(&probe_ladder(), f, expected_den)
}

/// As `probe_valuation` on an explicit ladder (decreasing p).
pub fn probe_on<F>(ladder: &[f64], f: F, expected_den: i64) -> Result<ProbeResult>
where
    F: Fn(f64) -> Result<Complex<f64>> + Sync,
{
    if ladder.len() < 3 || expected_den < 1 {
        return Err(Error::Domain("probe needs at least three nomes and a positive denominator".into()));
    }
    let vals: Vec<Complex<f64>> = ladder
        .par_iter()
        .map(|&p| {
            let v = f(p).map_err(|e| Error::Evaluation { p, message: e.to_string() })?;
            if v.norm() == 0.0 || !v.norm().is_finite() {
                return Err(Error::Evaluation { p, message: format!("value {v} has no finite logarithm") });
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let d = expected_den as f64;
    let m = ladder.len();
    let extra = (m - 2).min(3);
    let cols = 2 + extra;
    let mut a = DMatrix::<f64>::zeros(m, cols);
    let mut y = DVector::<f64>::zeros(m);
    for (k, (&p, v)) in ladder.iter().zip(&vals).enumerate() {
        let s = p.powf(1.0 / d);
        a[(k, 0)] = p.ln();
        a[(k, 1)] = 1.0;
        for j in 0..extra {
            a[(k, 2 + j)] = s.powi(j as i32 + 1);
        }
        y[k] = v.norm().ln();
    }
    let sol = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Evaluation { p: ladder[0], message: e.to_string() })?;
    let slope = sol[0];
    let val = Q::new((slope * d).round() as i64, expected_den);
    let vf = val.to_f64().unwrap_or(0.0);
    let residual = (0..m - 1)
        .map(|k| {
            let step = (vals[k + 1].norm().ln() - vals[k].norm().ln()) / (ladder[k + 1].ln() - ladder[k].ln());
            (step - vf).abs()
        })
        .fold(0.0, f64::max);
    let scaled: Vec<Complex<f64>> = ladder.iter().zip(&vals).map(|(&p, v)| v / p.powf(vf)).collect();
    let nodes: Vec<f64> = ladder.iter().map(|p| p.powf(1.0 / d)).collect();
    let lc = neville_at_zero(&nodes, &scaled);
    let lc_spread = [neville_at_zero(&nodes[1..], &scaled[1..]), neville_at_zero(&nodes[..m - 1], &scaled[..m - 1])]
        .iter()
        .map(|x| (x - lc).norm() / lc.norm())
        .fold(0.0, f64::max);
    Ok(ProbeResult { val, slope, lc, lc_raw: scaled[m - 1], residual, lc_spread })
}

/// Value at 0 of the interpolating polynomial through (x_k, y_k).
pub fn neville_at_zero(x: &[f64], y: &[Complex<f64>]) -> Complex<f64> {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (x[i], x[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csymbols::c_elliptic;
    use crate::kernels::{theta, EllipticParams};
    use crate::scalar::{cx, re};

    fn p(parts: &[usize]) -> Partition {
        Partition::from_slice(parts)
    }

    #[test]
    fn frac_g_examples() {
        assert_eq!(frac_g(Q::zero()), Q::zero());
        assert_eq!(frac_g(q(1, 2)), q(1, 4));
        assert_eq!(frac_g(q(5, 4)), q(3, 16));
        assert_eq!(frac_g(q(-1, 4)), q(3, 16));
    }

    #[test]
    fn theta_val_examples() {
        assert_eq!(theta_val(Q::zero()), Q::zero());
        assert_eq!(theta_val(q(1, 2)), Q::zero());
        assert_eq!(theta_val(q(3, 2)), q(-1, 2));
        assert_eq!(theta_val(q(-1, 2)), q(-1, 2));
        assert_eq!(c_val(&p(&[2, 1]), q(3, 2)), q(-3, 2));
        assert_eq!(c_val(&p(&[]), q(7, 3)), Q::zero());
        assert_eq!(c_val(&p(&[3, 1]), q(1, 3)), Q::zero());
    }

    #[test]
    fn delta_val_matches_unit_range() {
        for k in 0..8 {
            let a = q(k, 8);
            assert_eq!(delta_val(&p(&[2, 1]), a), -q(2, 1) * a * Q::from(3));
        }
    }

    #[test]
    fn delta_lc_at_zero_is_tilde() {
        let (qq, t): (Cx<f64>, Cx<f64>) = (cx(0.3, 0.1), cx(0.5, -0.2));
        let a = cx(0.7, 0.2);
        let (v, lc) = delta_val_lc(&p(&[]), a, Q::zero(), 2, qq, t).unwrap();
        assert_eq!((v, lc), (Q::zero(), re(1.0)));
        let (_, lc) = delta_val_lc(&p(&[2, 1]), a, Q::zero(), 2, qq, t).unwrap();
        assert_eq!(lc, delta_tilde(&p(&[2, 1]), a, 2, qq, t).unwrap());
        assert!(delta_val_lc(&p(&[1]), a, Q::one(), 2, qq, t).is_err());
    }

    #[test]
    fn omega_f_hand_values() {
        let z = Q::zero();
        for v in OmegaVariant::ALL {
            assert_eq!(omega_f(v, z, z, [z; 4]), z);
        }
        // α = 1/8, β = 1/4, γ = (1/8, 1/8, 1/8, 1/8): Σγ = 1/2.
        let (a, b) = (q(1, 8), q(1, 4));
        let g = [q(1, 8); 4];
        let gg = |x: Q| frac_g(x);
        let want = gg(a + b - q(1, 2)) + gg(q(1, 4)) - gg(-a - b) - gg(q(1, 2) - q(1, 2))
            + Q::from(4) * (gg(q(1, 8) - b) - gg(a - q(1, 8)));
        assert_eq!(omega_f_plain(a, b, g), want);
    }

    #[test]
    fn summand_coefficient_b_is_minus_half_f() {
        let pts = [q(1, 3), q(-2, 5), q(3, 7), q(1, 9), q(7, 4), q(-5, 6)];
        for i in 0..6 {
            let a = pts[i];
            let b = pts[(i + 1) % 6];
            let g = [pts[(i + 2) % 6], pts[(i + 3) % 6], pts[(i + 4) % 6], pts[(i + 5) % 6]];
            let (_, bb, _) = omega_summand_coeffs(a, b, g);
            assert_eq!(bb, -omega_f_plain(a, b, g) / q(2, 1));
        }
    }

    #[test]
    fn omega_val_is_variant_independent() {
        let pts = [q(1, 4), q(-1, 2), q(3, 4), Q::zero(), q(1, 2), q(5, 4), q(-3, 4)];
        for i in 0..7 {
            let a = pts[i];
            let b = pts[(i + 2) % 7];
            let g = [pts[(i + 1) % 7], pts[(i + 3) % 7], pts[(i + 4) % 7], pts[(i + 6) % 7]];
            let mut seen = None;
            for v in OmegaVariant::ALL {
                let f = omega_f(v, a, b, g);
                if f.is_zero() && omega_f_locally_constant(v, a, b, g) {
                    continue;
                }
                let (aa, bb, gg) = v.apply(a, b, g);
                let (ca, cb, cc) = omega_summand_coeffs(aa, bb, gg);
                let r = (ca + cb.min(Q::zero()), cc + cb.max(Q::zero()));
                if let Some(s) = seen {
                    assert_eq!(r, s, "variant {v:?} at {i}");
                }
                seen = Some(r);
            }
            assert!(seen.is_some());
        }
    }

    #[test]
    fn classify_examples() {
        let z = Q::zero();
        let c = classify_cell(z, z, z);
        assert_eq!((c.family, c.shift, c.reflection), (Family::V, [0, 0, 0], false));
        assert_eq!(classify_cell(q(1, 2), q(1, 8), q(3, 8)).family, Family::T);
        assert_eq!(classify_cell(q(1, 2), q(1, 2), z).family, Family::S);
        let reps = [
            (Family::E1, (q(1, 4), q(1, 4), q(1, 4))),
            (Family::E2, (q(1, 4), q(-1, 4), q(1, 4))),
            (Family::E3, (z, q(1, 3), z)),
            (Family::E4, (q(1, 3), z, z)),
            (Family::F1, (q(3, 8), q(-1, 8), q(3, 8))),
            (Family::F2, (q(1, 8), q(3, 8), q(-1, 8))),
            (Family::F3, (q(3, 8), q(-1, 8), q(1, 8))),
            (Family::F4, (q(3, 8), q(1, 8), q(-1, 8))),
            (Family::T, (q(1, 2), z, q(1, 4))),
            (Family::P1, (q(1, 4), q(3, 4), z)),
            (Family::P2, (q(3, 4), q(1, 4), z)),
        ];
        for (fam, (a, b, zt)) in reps {
            let c = classify_cell(a, b, zt);
            assert_eq!((c.family, c.reflection), (fam, false), "{fam}");
            let r = classify_cell(a, b, -zt);
            assert_eq!(r.family, fam, "reflected {fam}");
            let self_dual = matches!(fam, Family::E3 | Family::E4 | Family::S | Family::P1 | Family::P2);
            assert_eq!(r.reflection, !self_dual && !zt.is_zero(), "reflection flag {fam}");
        }
    }

    #[test]
    fn classify_is_lattice_invariant() {
        let gens = [(Q::one(), Q::zero(), Q::zero()), (Q::zero(), Q::one(), Q::zero()), (q(1, 2), q(1, 2), q(1, 2))];
        let pts = [(q(1, 2), q(1, 8), q(3, 8)), (q(1, 4), q(-1, 4), q(1, 4)), (q(3, 8), q(1, 8), q(-1, 8))];
        for (a, b, z) in pts {
            let base = classify_cell(a, b, z);
            for (k, g) in gens.iter().enumerate() {
                for m in [-2i64, 1, 3] {
                    let mq = Q::from(m);
                    let c = classify_cell(a + mq * g.0, b + mq * g.1, z + mq * g.2);
                    assert_eq!((c.family, c.reflection), (base.family, base.reflection));
                    let mut want = base.shift;
                    want[k] += m;
                    assert_eq!(c.shift, want);
                }
            }
        }
    }

    #[test]
    fn probe_monomial() {
        let r = probe_valuation(|p| Ok(re(3.0 * p * p)), 1).unwrap();
        assert_eq!(r.val, q(2, 1));
        assert!((r.lc - re(3.0)).norm() < 1e-9);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn probe_theta_half() {
        let x: Cx<f64> = cx(0.7, 0.0);
        let r = probe_valuation(|p| theta(x * p.sqrt(), re(p)), 2).unwrap();
        assert_eq!(r.val, theta_val(q(1, 2)));
        assert!((r.lc - theta_lc(x, q(1, 2))).norm() < 1e-6, "{}", r.lc);
    }

    #[test]
    fn probe_c_symbol() {
        let x: Cx<f64> = cx(0.6, 0.3);
        let (qq, t) = (cx(0.3, 0.1), cx(0.5, -0.2));
        let lam = p(&[2, 1]);
        let r = probe_valuation(
            |pp| {
                let par = EllipticParams::new(qq, t, re(pp)).unwrap();
                c_elliptic(CKind::Zero, &lam, x * pp.powf(1.5), &par)
            },
            2,
        )
        .unwrap();
        assert_eq!(r.val, c_val(&lam, q(3, 2)));
    }

    #[test]
    fn pastro_vector_has_zero_valuation() {
        let ev = ExponentVector {
            alpha: [q(-1, 4), Q::zero(), q(1, 4), q(1, 2)],
            gamma: [Q::zero(), q(1, 2)],
            zeta: q(-1, 4),
        };
        assert_eq!(biortho_val(&ev, q(-1, 4)).unwrap(), Q::zero());
    }
}
