//! The p → 0 degenerations of the interpolation functions and of the
//! generalized binomial coefficients.
//!
//! Every limit is again defined by a branching rule, with a coefficient
//! c_{ε,λ,κ} depending on the family ε. Families are data: a
//! [`FamilyRecord`] holds the representative exponent vector at which the
//! elliptic function is probed, and the coefficient, valuation and
//! prefactor are dispatched on the family tag.

use crate::csymbols::{c_scaled, c_tilde, c_tilde_den, delta0_scaled, delta_tilde, CKind};
use crate::error::{guard, Error, Result};
use crate::interpolation::{branching_sum, gen_binom, gen_binom_with, interp_r};
use crate::kernels::EllipticParams;
use crate::partitions::{partitions_of, Partition};
use crate::scalar::{ipow, modulus, re, Cx, Real};
use crate::valuation::{interp_scale, omega_f_plain, probe_on, ProbeResult, Q};
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use crate::valuation::Family as LimitFamily;

/// A family together with its representative exponents (α, β, ζ), meaning
/// R*(z p^ζ; a p^α, b p^β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub family: LimitFamily,
    pub exponent: [Q; 3],
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

impl FamilyRecord {
    pub fn of(family: LimitFamily) -> FamilyRecord {
        use LimitFamily::*;
        let exponent = match family {
            V => [q(0, 1), q(0, 1), q(0, 1)],
            E1 => [q(1, 4), q(1, 4), q(1, 4)],
            E2 => [q(1, 4), q(-1, 4), q(1, 4)],
            E3 => [q(0, 1), q(1, 2), q(0, 1)],
            E4 => [q(1, 2), q(0, 1), q(0, 1)],
            F1 => [q(3, 8), q(-1, 8), q(3, 8)],
            F2 => [q(1, 8), q(3, 8), q(-1, 8)],
            F3 => [q(3, 8), q(-1, 8), q(1, 8)],
            F4 => [q(3, 8), q(1, 8), q(-1, 8)],
            LimitFamily::T => [q(1, 2), q(0, 1), q(1, 4)],
            S => [q(1, 2), q(1, 2), q(0, 1)],
            P1 => [q(1, 4), q(3, 4), q(0, 1)],
            P2 => [q(3, 4), q(1, 4), q(0, 1)],
        };
        FamilyRecord { family, exponent }
    }

    pub fn all() -> Vec<FamilyRecord> {
        LimitFamily::ALL.iter().map(|&f| FamilyRecord::of(f)).collect()
    }

    /// Valuation of R*_λ at the representative exponents.
    pub fn val(&self, lam: &Partition) -> Q {
        let [a, b, z] = self.exponent;
        interp_scale(a, b, z) * Q::from_integer(lam.size() as i64)
    }

    /// Whether the limit depends on the variables z.
    pub fn z_dependent(&self) -> bool {
        !self.family.is_octahedral()
    }
}

/// c^{|λ|} q^{eq·n(λ')} t^{et·n(λ)}.
fn nmono<T: Real>(lam: &Partition, c: Cx<T>, eq: i64, et: i64, qq: Cx<T>, t: Cx<T>) -> Cx<T> {
    ipow(c, lam.size() as i64) * ipow(qq, eq * lam.n_conj() as i64) * ipow(t, et * lam.n_stat() as i64)
}

fn pm<T: Real>(qq: Cx<T>, eq: i64, t: Cx<T>, et: i64) -> Cx<T> {
    ipow(qq, eq) * ipow(t, et)
}

/// The degenerate binomial binon(λ, μ)_{[a]}; zero unless μ ≺' λ.
pub fn binon_a<T: Real>(lam: &Partition, mu: &Partition, a: Cx<T>, qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    if !lam.horizontal_strip_over(mu) {
        return Ok(Cx::zero());
    }
    let one = Cx::<T>::one();
    let lc = lam.conjugate();
    let mc = mu.conjugate();
    let mut num = one;
    let mut den = one;
    let ctx = || format!("binon {lam}/{mu}");
    for (i, j) in lam.boxes() {
        let (ii, jj) = (i as i64, j as i64);
        let li = lam.part(i - 1) as i64;
        let mui = mu.part(i - 1) as i64;
        let lj = lc.part(j - 1) as i64;
        let mj = mc.part(j - 1) as i64;
        if lj == mj {
            num = num * (one - pm(qq, li - jj + 1, t, lj - ii)) * (one - pm(qq, mui - jj, t, 1 + mj - ii));
            den = den
                * guard(one - pm(qq, mui - jj + 1, t, mj - ii), ctx())?
                * guard(one - pm(qq, li - jj, t, 1 + lj - ii), ctx())?;
        } else {
            den = den
                * guard(one - pm(qq, mui + jj, t, -mj - ii) * a, ctx())?
                * guard(one - pm(qq, li + jj - 1, t, 2 - lj - ii) * a, ctx())?;
        }
    }
    for (i, j) in mu.boxes() {
        let (ii, jj) = (i as i64, j as i64);
        let li = lam.part(i - 1) as i64;
        let mui = mu.part(i - 1) as i64;
        let lj = lc.part(j - 1) as i64;
        let mj = mc.part(j - 1) as i64;
        if lj != mj {
            num = num * (one - pm(qq, li + jj, t, 1 - lj - ii) * a) * (one - pm(qq, mui + jj - 1, t, 1 - mj - ii) * a);
        }
    }
    Ok(num / den)
}

/// Macdonald's branching coefficient ψ_{λ/μ} = binon(λ, μ)_{[0]}.
pub fn psi_coeff<T: Real>(lam: &Partition, mu: &Partition, qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    binon_a(lam, mu, Cx::zero(), qq, t)
}

/// ∏ (1 − q^{j−1} t^{1−i} x) over the boxes of λ/κ.
fn skew0<T: Real>(lam: &Partition, kappa: &Partition, x: Cx<T>, qq: Cx<T>, t: Cx<T>) -> Cx<T> {
    let one = Cx::<T>::one();
    lam.boxes()
        .filter(|&(i, j)| j > kappa.part(i - 1))
        .fold(one, |acc, (i, j)| acc * (one - pm(qq, j as i64 - 1, t, 1 - i as i64) * x))
}

/// C̃⁰_κ(y/t) / C̃⁰_λ(y).
fn shifted_ratio<T: Real>(lam: &Partition, kappa: &Partition, y: Cx<T>, qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    Ok(c_tilde(CKind::Zero, kappa, y / t, qq, t) / c_tilde_den(CKind::Zero, lam, &[y], qq, t, "branching coefficient")?)
}

/// Branching coefficient of the given family for the step from n to n + 1
/// variables, with new variable v. Parameters a family does not use are
/// ignored.
#[allow(clippy::too_many_arguments)]
pub fn branch_coeff_limit<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v: Cx<T>,
    n: usize,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    use LimitFamily::{E1, E2, E3, E4, F1, F2, F3, F4, P1, P2, S, V};
    if !lam.horizontal_strip_over(kappa) {
        return Ok(Cx::zero());
    }
    let tn = ipow(t, n as i64);
    let d = lam.size() as i64 - kappa.size() as i64;
    let tk = ipow(t, kappa.size() as i64);
    let psi = || psi_coeff(lam, kappa, qq, t);
    let rel = |c: Cx<T>, eq: i64, et: i64| nmono(lam, c, eq, et, qq, t) / nmono(kappa, c, eq, et, qq, t);
    let out = match family {
        V => {
            binon_a(lam, kappa, tn * a / b, qq, t)?
                * skew0(lam, kappa, tn * a * v, qq, t)
                * skew0(lam, kappa, tn * a / v, qq, t)
                * shifted_ratio(lam, kappa, qq * v / b, qq, t)?
                * shifted_ratio(lam, kappa, qq / (b * v), qq, t)?
                * tk
        }
        E1 => {
            binon_a(lam, kappa, tn * a / b, qq, t)?
                * skew0(lam, kappa, tn * a / v, qq, t)
                * shifted_ratio(lam, kappa, qq * v / b, qq, t)?
                * ipow(v / b, d)
        }
        E2 => psi()? * skew0(lam, kappa, tn * a / v, qq, t) * shifted_ratio(lam, kappa, qq / (b * v), qq, t)? * tk,
        E3 => {
            psi()?
                * skew0(lam, kappa, tn * a * v, qq, t)
                * skew0(lam, kappa, tn * a / v, qq, t)
                * rel((-(a * tn)).inv(), -1, 1)
        }
        E4 => {
            psi()? * shifted_ratio(lam, kappa, qq * v / b, qq, t)? * shifted_ratio(lam, kappa, qq / (b * v), qq, t)? * tk
        }
        F1 => psi()? * skew0(lam, kappa, tn * a / v, qq, t) * ipow(v, d),
        F2 => psi()? * skew0(lam, kappa, tn * a * v, qq, t) * rel((-(a * tn)).inv(), -1, 1),
        F3 => psi()? * shifted_ratio(lam, kappa, qq / (b * v), qq, t)? * tk,
        F4 => psi()? * shifted_ratio(lam, kappa, qq / (b * v), qq, t)? * ipow(v, -d),
        LimitFamily::T => psi()? * ipow(v, d),
        S => binon_a(lam, kappa, tn * a / b, qq, t)? / tk,
        P1 => psi()? * tk,
        P2 => psi()? / tk,
    };
    Ok(out)
}

/// The limiting interpolation function R*_{ε,λ}(z; a, b) in n = z.len() variables.
pub fn interp_limit<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    z: &[Cx<T>],
    a: Cx<T>,
    b: Cx<T>,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    branching_sum(lam, z, &|l, k, v, n| branch_coeff_limit(family, l, k, a, b, v, n, qq, t))
}

/// Closed-form value of the z-independent octahedral limits S, P1, P2.
pub fn octahedron_value<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    n: usize,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    let tn = ipow(t, n as i64);
    let base = c_tilde(CKind::Zero, lam, tn, qq, t) / c_tilde_den(CKind::Minus, lam, &[t], qq, t, "octahedron")?
        * ipow(t, lam.n_stat() as i64);
    let shift = ipow(t, -((n as i64 - 1) * lam.size() as i64));
    match family {
        LimitFamily::S => Ok(base * shift
            / (c_tilde_den(CKind::Plus, lam, &[tn / t * a / b], qq, t, "octahedron")?
                * c_tilde_den(CKind::Zero, lam, &[a * qq / (b * t)], qq, t, "octahedron")?)),
        LimitFamily::P1 => Ok(base),
        LimitFamily::P2 => Ok(base * shift),
        f => Err(Error::Domain(format!("family {f} has no z-independent evaluation"))),
    }
}

/// Valuation of R*_λ at the family's representative exponents and the
/// factor F with lc(R*) = F · R*_{ε,λ}.
pub fn limit_prefactor<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    n: usize,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<(Q, Cx<T>)> {
    use LimitFamily::{E1, E2, E3, E4, F1, F2, F3, F4, P1, P2, S, V};
    let val = FamilyRecord::of(family).val(lam);
    let tn1 = ipow(t, n as i64 - 1);
    let tn = tn1 * t;
    let core = || -> Result<Cx<T>> {
        Ok(c_tilde(CKind::Minus, lam, t, qq, t) / c_tilde_den(CKind::Zero, lam, &[tn], qq, t, "limit prefactor")?)
    };
    let one_q = |c: Cx<T>| nmono(lam, c, 1, -2, qq, t);
    let two_q = || nmono(lam, tn1 * qq * qq / (b * b), 2, -3, qq, t);
    let with_plus = || c_tilde(CKind::Plus, lam, tn1 * a / b, qq, t) * c_tilde(CKind::Zero, lam, a * qq / (b * t), qq, t);
    let f = match family {
        V => core()? * with_plus() * two_q(),
        E1 => core()? * with_plus() * one_q(-(qq * tn1)),
        E2 | E4 | F3 => core()? * two_q(),
        E3 | F2 => core()? * one_q(-(a * tn1)),
        F1 | F4 | LimitFamily::T => core()? * one_q(-(tn1 * qq / b)),
        S | P1 | P2 => octahedron_value(family, lam, a, b, n, qq, t)?.inv(),
    };
    Ok((val, f))
}

/// Limits of the generalized binomial coefficients, n = max(ℓ(λ), ℓ(μ)).
#[allow(clippy::too_many_arguments)]
pub fn limit_binom<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    mu: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    limit_binom_with(family, lam, mu, a, b, lam.len().max(mu.len()), qq, t)
}

/// As [`limit_binom`] with an explicit number of variables.
#[allow(clippy::too_many_arguments)]
pub fn limit_binom_with<T: Real>(
    family: LimitFamily,
    lam: &Partition,
    mu: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    n: usize,
    qq: Cx<T>,
    t: Cx<T>,
) -> Result<Cx<T>> {
    use LimitFamily::{E1, E2, E3, F1, F2, V};
    if n < lam.len() || n < mu.len() {
        return Err(Error::Precondition(format!("n = {n} is below the lengths of {lam} and {mu}")));
    }
    if mu.is_empty() {
        return Ok(Cx::one());
    }
    let tn = ipow(t, n as i64);
    let tn1 = tn / t;
    let t1n = tn1.inv();
    let sa = a.sqrt();
    let pts = |scale: Cx<T>| -> Vec<Cx<T>> {
        (1..=n).map(|i| scale * ipow(qq, lam.part(i - 1) as i64) * ipow(t, 1 - i as i64)).collect()
    };
    let ct = |kind, x| c_tilde(kind, mu, x, qq, t);
    let cden = |kind, xs: &[Cx<T>]| c_tilde_den(kind, mu, xs, qq, t, "limit binomial");
    let one = Cx::<T>::one();
    let out = match family {
        V => {
            let x = a / b;
            nmono(mu, -(qq * qq * qq * tn1 * a * a / (b * b)), 3, -4, qq, t)
                * delta_tilde(mu, x, n, qq, t)?
                * ct(CKind::Zero, b.inv())
                * ct(CKind::Zero, a * qq / (tn * b))
                * ct(CKind::Minus, t)
                * ct(CKind::Plus, x)
                / cden(CKind::Zero, &[a * qq, tn])?
                * interp_limit(V, mu, &pts(sa), t1n * sa, b / sa, qq, t)?
        }
        E1 => {
            let x = a / b;
            nmono(mu, -(qq * qq * tn1 * x), 3, -4, qq, t)
                * delta_tilde(mu, x, n, qq, t)?
                * ct(CKind::Minus, t)
                * ct(CKind::Plus, x)
                * ct(CKind::Zero, qq * x / tn)
                / cden(CKind::Zero, &[tn])?
                * interp_limit(E1, mu, &pts(one), t1n, x.inv(), qq, t)?
        }
        E2 => {
            nmono(mu, qq, 0, 1, qq, t) * ct(CKind::Zero, b.inv()) / cden(CKind::Minus, &[qq])?
                * interp_limit(E2, mu, &pts(one), t1n, b, qq, t)?
        }
        E3 => {
            nmono(mu, -(qq * sa), 1, 0, qq, t) / cden(CKind::Minus, &[qq])? / cden(CKind::Zero, &[a * qq])?
                * interp_limit(E3, mu, &pts(sa), t1n * sa, one, qq, t)?
        }
        F1 => {
            nmono(mu, one, 0, 1, qq, t) / cden(CKind::Minus, &[qq])? * interp_limit(F1, mu, &pts(one), t1n, one, qq, t)?
        }
        F2 => {
            let z: Vec<Cx<T>> = pts(one).into_iter().map(|x| x.inv()).collect();
            nmono(mu, -qq, 1, 0, qq, t) / cden(CKind::Minus, &[qq])? * interp_limit(F2, mu, &z, t1n, one, qq, t)?
        }
        f => return Err(Error::Domain(format!("no binomial limit for family {f}"))),
    };
    Ok(out)
}

/// Exponents (α, β) of (a p^α, b p^β) at which each binomial limit is probed.
pub fn binom_exponents(family: LimitFamily) -> Option<[Q; 2]> {
        use LimitFamily::{E1, E2, E3, F1, F2, V};
    match family {
        V => Some([q(0, 1), q(0, 1)]),
        E1 => Some([q(1, 2), q(1, 2)]),
        E2 => Some([q(1, 2), q(0, 1)]),
        E3 => Some([q(0, 1), q(1, 2)]),
        F1 => Some([q(2, 3), q(1, 3)]),
        F2 => Some([q(1, 3), q(2, 3)]),
        _ => None,
    }
}

/// Macdonald's P_λ(z; q, t), computed by Gram–Schmidt of the monomial
/// symmetric functions under the power-sum scalar product
/// ⟨p_μ, p_ν⟩ = δ z_μ ∏ (1 − q^{μ_i})/(1 − t^{μ_i}).
pub fn macdonald_oracle<T: Real>(lam: &Partition, z: &[Cx<T>], qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    if lam.size() > 6 || z.len() > 4 {
        return Err(Error::SizeGuard(format!("macdonald oracle supports |λ| ≤ 6, n ≤ 4; got {lam}, n = {}", z.len())));
    }
    if lam.len() > z.len() {
        return Ok(Cx::zero());
    }
    let coeffs = macdonald_monomial_coeffs(lam, qq, t)?;
    Ok(coeffs.iter().fold(Cx::zero(), |acc, (mu, c)| acc + *c * monomial_symmetric(mu, z)))
}

/// Coefficients of P_λ in the monomial basis, as (μ, c_μ) with μ ≤ λ.
pub fn macdonald_monomial_coeffs<T: Real>(lam: &Partition, qq: Cx<T>, t: Cx<T>) -> Result<Vec<(Partition, Cx<T>)>> {
    let d = lam.size();
    let mut parts = partitions_of(d);
    parts.sort_by(|x, y| x.parts().cmp(y.parts()));
    let k = parts.iter().position(|p| p == lam).expect("λ is a partition of |λ|");
    let m = parts.len();
    // p_ρ = Σ_μ L[ρ][μ] m_μ.
    let l: Vec<Vec<Cx<T>>> = parts
        .iter()
        .map(|rho| parts.iter().map(|mu| re(power_sum_monomial_count(rho.parts(), mu.parts()) as f64)).collect())
        .collect();
    let linv = invert(&l)?;
    let zq: Vec<Cx<T>> = parts.iter().map(|rho| power_sum_norm(rho, qq, t)).collect::<Result<_>>()?;
    // ⟨m_μ, m_ν⟩ = Σ_ρ Linv[μ][ρ] Linv[ν][ρ] z_ρ.
    let gram = |x: usize, y: usize| (0..m).fold(Cx::<T>::zero(), |acc, r| acc + linv[x][r] * linv[y][r] * zq[r]);
    let sys: Vec<Vec<Cx<T>>> = (0..k).map(|nu| (0..k).map(|mu| gram(mu, nu)).collect()).collect();
    let rhs: Vec<Cx<T>> = (0..k).map(|nu| -gram(k, nu)).collect();
    let c = solve(sys, rhs)?;
    let mut out: Vec<(Partition, Cx<T>)> = (0..k).map(|i| (parts[i].clone(), c[i])).collect();
    out.push((lam.clone(), Cx::one()));
    Ok(out)
}

/// Number of ways to distribute the parts of ρ over rows with sums μ.
fn power_sum_monomial_count(rho: &[usize], mu: &[usize]) -> u64 {
    fn rec(rho: &[usize], rem: &mut Vec<usize>) -> u64 {
        match rho.split_first() {
            None => rem.iter().all(|&r| r == 0) as u64,
            Some((&r, rest)) => {
                let mut total = 0;
                for i in 0..rem.len() {
                    if rem[i] >= r {
                        rem[i] -= r;
                        total += rec(rest, rem);
                        rem[i] += r;
                    }
                }
                total
            }
        }
    }
    rec(rho, &mut mu.to_vec())
}

fn power_sum_norm<T: Real>(rho: &Partition, qq: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    let one = Cx::<T>::one();
    let mut acc = one;
    let mut counts = std::collections::BTreeMap::new();
    for &r in rho.parts() {
        *counts.entry(r).or_insert(0u64) += 1;
        acc = acc * (one - ipow(qq, r as i64)) / guard(one - ipow(t, r as i64), "power-sum norm")?;
    }
    for (&r, &c) in &counts {
        let fact: u64 = (1..=c).product();
        acc = acc * re((r as f64).powi(c as i32) * fact as f64);
    }
    Ok(acc)
}

/// m_μ(z): sum of z^γ over the distinct rearrangements γ of μ padded to n.
pub fn monomial_symmetric<T: Real>(mu: &Partition, z: &[Cx<T>]) -> Cx<T> {
    let n = z.len();
    if mu.len() > n {
        return Cx::zero();
    }
    let mut exps: Vec<usize> = (0..n).map(|i| mu.part(i)).collect();
    exps.sort_unstable();
    let mut acc = Cx::<T>::zero();
    loop {
        acc = acc + exps.iter().zip(z).fold(Cx::<T>::one(), |m, (&e, &x)| m * ipow(x, e as i64));
        if !next_permutation(&mut exps) {
            break;
        }
    }
    acc
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve<T: Real>(mut a: Vec<Vec<Cx<T>>>, mut b: Vec<Cx<T>>) -> Result<Vec<Cx<T>>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| modulus(a[x][col]).total_cmp(&modulus(a[y][col])))
            .expect("nonempty pivot range");
        guard(a[piv][col], "Gram–Schmidt system")?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - f * v;
            }
            let v = b[col];
            b[r] = b[r] - f * v;
        }
    }
    let mut x = vec![Cx::<T>::zero(); n];
    for r in (0..n).rev() {
        let s = (r + 1..n).fold(b[r], |acc, c| acc - a[r][c] * x[c]);
        x[r] = s / a[r][r];
    }
    Ok(x)
}

fn invert<T: Real>(a: &[Vec<Cx<T>>]) -> Result<Vec<Vec<Cx<T>>>> {
    let n = a.len();
    let cols: Vec<Vec<Cx<T>>> = (0..n)
        .map(|c| {
            let e: Vec<Cx<T>> = (0..n).map(|r| if r == c { Cx::one() } else { Cx::zero() }).collect();
            solve(a.to_vec(), e)
        })
        .collect::<Result<_>>()?;
    Ok((0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect())
}

/// Coefficient of z^e in a Laurent polynomial in n variables whose
/// exponents in each variable span fewer than `width` consecutive
/// integers, by a discrete Fourier transform on the unit torus.
pub fn laurent_coefficient<T, F>(f: F, exps: &[i64], width: usize) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    let n = exps.len();
    let total = width.pow(n as u32);
    let tau = T::PI() * T::lit(2.0) / T::lit(width as f64);
    let root = |k: i64| Complex::from_polar(T::one(), tau * T::lit(k as f64));
    let mut acc = Cx::<T>::zero();
    let mut z = vec![Cx::<T>::zero(); n];
    for idx in 0..total {
        let mut rest = idx;
        let mut phase = 0i64;
        for (i, zi) in z.iter_mut().enumerate() {
            let k = (rest % width) as i64;
            rest /= width;
            *zi = root(k);
            phase += k * exps[i];
        }
        acc = acc + f(&z)? * root(-phase);
    }
    Ok(acc / T::lit(total as f64))
}

/// Smallest singular value of the row-normalized matrix
/// [R*_{ε,λ}(z⁽ʲ⁾)] over the given partitions and points.
pub fn evaluation_matrix_min_singular(
    family: LimitFamily,
    lams: &[Partition],
    points: &[Vec<Complex<f64>>],
    a: Complex<f64>,
    b: Complex<f64>,
    qq: Complex<f64>,
    t: Complex<f64>,
) -> Result<f64> {
    let mut m = DMatrix::<Complex<f64>>::zeros(lams.len(), points.len());
    for (r, lam) in lams.iter().enumerate() {
        for (c, z) in points.iter().enumerate() {
            m[(r, c)] = interp_limit(family, lam, z, a, b, qq, t)?;
        }
        let norm = m.row(r).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        for c in 0..points.len() {
            m[(r, c)] /= norm;
        }
    }
    let sv = m.singular_values();
    Ok(sv.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Outcome of probing an elliptic object against its limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub family: LimitFamily,
    /// Closed-form valuation.
    pub val: Q,
    pub probe: ProbeResult,
    /// The limit value it should converge to.
    pub target: Complex<f64>,
    /// Relative error of the extrapolated leading coefficient.
    pub rel_err: f64,
    /// Relative error of f(p)/p^val at p = 1e−2, p = 1e−3 and the
    /// deepest ladder nome.
    pub raw_rel_err: [f64; 3],
    /// lc / target, the monomial left over when they disagree.
    pub ratio: Complex<f64>,
}

/// Nomes 10^{−8−4k}, k = 0..5: deep enough that p^{1/8} is small.
pub fn deep_ladder() -> Vec<f64> {
    (0..6).map(|k| 10f64.powi(-8 - 4 * k)).collect()
}

fn powq(x: f64, e: Q) -> f64 {
    x.powf(e.to_f64().unwrap_or(0.0))
}

impl LimitProbe {
    /// The extrapolated coefficient is within `tol` and the raw ratio
    /// approaches the target as p decreases.
    pub fn converged(&self, tol: f64) -> bool {
        self.rel_err <= tol && self.raw_rel_err[2] < self.raw_rel_err[0]
    }
}

fn finish_probe<F>(family: LimitFamily, val: Q, den: i64, target: Complex<f64>, f: F) -> Result<LimitProbe>
where
    F: Fn(f64) -> Result<Complex<f64>> + Sync,
{
    let ladder = deep_ladder();
    let probe = probe_on(&ladder, &f, den)?;
    let raw = |p: f64| -> Result<f64> { Ok(crate::scalar::rel_err(f(p)? / powq(p, val), target)) };
    Ok(LimitProbe {
        family,
        val,
        probe,
        target,
        rel_err: crate::scalar::rel_err(probe.lc, target),
        raw_rel_err: [raw(1e-2)?, raw(1e-3)?, raw(ladder[ladder.len() - 1])?],
        ratio: probe.lc / target,
    })
}

/// Probes R*_λ(z p^ζ; a p^α, b p^β)/prefactor against R*_{ε,λ}(z; a, b).
pub fn probe_interp(
    family: LimitFamily,
    lam: &Partition,
    z: &[Complex<f64>],
    a: Complex<f64>,
    b: Complex<f64>,
    qq: Complex<f64>,
    t: Complex<f64>,
) -> Result<LimitProbe> {
    let rec = FamilyRecord::of(family);
    let [ea, eb, ez] = rec.exponent;
    let n = z.len();
    let (val, pref) = limit_prefactor(family, lam, a, b, n, qq, t)?;
    let target = interp_limit(family, lam, z, a, b, qq, t)?;
    finish_probe(family, val, 8, target, |p| {
        let par = EllipticParams::new(qq, t, re(p))?;
        let zs: Vec<Complex<f64>> = z.iter().map(|&x| x * powq(p, ez)).collect();
        Ok(interp_r(lam, &zs, a * powq(p, ea), b * powq(p, eb), &par)? / pref)
    })
}

/// Probes binom(λ, μ)_{[a p^α, b p^β]} against the family's binomial limit.
#[allow(clippy::too_many_arguments)]
pub fn probe_binom(
    family: LimitFamily,
    lam: &Partition,
    mu: &Partition,
    a: Complex<f64>,
    b: Complex<f64>,
    qq: Complex<f64>,
    t: Complex<f64>,
) -> Result<LimitProbe> {
    let [ea, eb] =
        binom_exponents(family).ok_or_else(|| Error::Domain(format!("no binomial limit for family {family}")))?;
    let n = lam.len().max(mu.len());
    let target = limit_binom_with(family, lam, mu, a, b, n, qq, t)?;
    finish_probe(family, Q::zero(), 6, target, |p| {
        let par = EllipticParams::new(qq, t, re(p))?;
        let ap = a * powq(p, ea);
        gen_binom_with(lam, mu, ap, b * powq(p, eb), n, ap.sqrt(), &par)
    })
}


/// The single-term form that Ω_{λ/κ}(a, b; v) reduces to as p → 0 when the
/// exponent function f is positive (`positive`) or negative. The ratio of Ω
/// to this form has valuation 0 and leading coefficient 1.
pub fn omega_limit_form<T: Real>(
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v: [Cx<T>; 4],
    positive: bool,
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    let pq = par.pq();
    let vv = v[0] * v[1] * v[2] * v[3];
    let value = if positive {
        let xs = v.map(|x| x / b);
        c_scaled(CKind::Zero, lam, &xs, par, None)?
            / c_scaled(CKind::Zero, kappa, &xs, par, Some("omega limit"))?
            * delta0_scaled(lam, a / b, &[a * b * pq / vv], par)?
            / delta0_scaled(kappa, vv / (b * b * pq), &[vv / (a * b * pq)], par)?
            * c_scaled(CKind::Plus, lam, &[pq * a * a], par, None)?
            / c_scaled(CKind::Plus, lam, &[a / b], par, Some("omega limit"))?
            * gen_binom(lam, kappa, a / b, a * b * pq / vv, par)?
    } else {
        let xs = v.map(|x| pq * a / x);
        c_scaled(CKind::Zero, lam, &xs, par, None)?
            / c_scaled(CKind::Zero, kappa, &xs, par, Some("omega limit"))?
            * delta0_scaled(lam, pq * a * a, &[pq * a * b], par)?
            / delta0_scaled(kappa, a / b, &[(pq * a * b).inv()], par)?
            * c_scaled(CKind::Plus, kappa, &[a / b], par, None)?
            / c_scaled(CKind::Plus, kappa, &[vv / (pq * b * b)], par, Some("omega limit"))?
            * gen_binom(lam, kappa, pq * a * a, pq * a * b, par)?
    };
    Ok(value.to_cx())
}

/// Probes Ω_{λ/κ}(a p^α, b p^β; v_r p^{γ_r}) divided by its limit form.
/// The sign of f(α, β, γ) selects the form; f = 0 is rejected.
///
/// Ω at small p is a sum of products of very large and very small theta
/// values, so double precision runs out at a depth that depends on the
/// exponents. Nomes 10^{−2−k/2} are walked down until an evaluation leaves
/// that range; the probe fits the deepest eight that remain.
#[allow(clippy::too_many_arguments)]
pub fn probe_omega_limit(
    lam: &Partition,
    kappa: &Partition,
    a: Complex<f64>,
    b: Complex<f64>,
    v: [Complex<f64>; 4],
    exps: (Q, Q, [Q; 4]),
    qq: Complex<f64>,
    t: Complex<f64>,
) -> Result<ProbeResult> {
    let (ea, eb, eg) = exps;
    let f = omega_f_plain(ea, eb, eg);
    if f.is_zero() {
        return Err(Error::Domain(format!("f vanishes at ({ea}, {eb}, {eg:?}); no single-term limit")));
    }
    let den = crate::valuation::common_den(&[ea, eb, eg[0], eg[1], eg[2], eg[3]]);
    let positive = f > Q::zero();
    let ratio = |p: f64| -> Result<Complex<f64>> {
        let par = EllipticParams::new(qq, t, re(p))?;
        let (ap, bp) = (a * powq(p, ea), b * powq(p, eb));
        let vp = [0, 1, 2, 3].map(|r| v[r] * powq(p, eg[r]));
        let r = crate::interpolation::omega(lam, kappa, ap, bp, vp, &par)?
            / omega_limit_form(lam, kappa, ap, bp, vp, positive, &par)?;
        if r.is_finite() && r.norm() > 0.0 {
            Ok(r)
        } else {
            Err(Error::Evaluation { p, message: "Ω/form is not finite".into() })
        }
    };
    let mut ladder = Vec::new();
    let mut vals = Vec::new();
    for k in 0..OMEGA_MAX_STEPS {
        let p = 10f64.powf(-2.0 - 0.5 * k as f64);
        match ratio(p) {
            Ok(r) => {
                ladder.push(p);
                vals.push(r);
            }
            Err(_) => break,
        }
    }
    if ladder.len() < OMEGA_LADDER {
        return Err(Error::Evaluation {
            p: 10f64.powf(-2.0 - 0.5 * ladder.len() as f64),
            message: format!("only {} evaluable nomes for the Ω probe", ladder.len()),
        });
    }
    let skip = ladder.len() - OMEGA_LADDER;
    let (ladder, vals) = (&ladder[skip..], &vals[skip..]);
    probe_on(
        ladder,
        |p| {
            let k = ladder.iter().position(|&x| x == p).expect("ladder nome");
            Ok(vals[k])
        },
        den,
    )
}

/// Largest `lc_spread` at which an Ω probe counts as converged.
pub const OMEGA_SPREAD_MAX: f64 = 2e-3;
const OMEGA_LADDER: usize = 8;
const OMEGA_MAX_STEPS: usize = 40;
