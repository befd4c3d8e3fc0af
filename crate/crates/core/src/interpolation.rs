//! Elliptic binomial coefficients, the branching rule for the interpolation
//! functions R*, their normalized form Q*, generalized binomial coefficients
//! and the connection coefficients Ω.

use crate::csymbols::{c_den, c_elliptic, c_elliptic_multi, c_scaled, delta, delta0_scaled, shift_monomial, CKind};
use crate::error::{Error, Result};
use crate::kernels::{theta, EllipticParams};
use crate::partitions::Partition;
use crate::scalar::{ipow, modulus, Cx, Real};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Parameters (a, b) of R*(z; a, b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpParams<T: Real> {
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub base: EllipticParams<T>,
}

impl<T: Real> InterpParams<T> {
    pub fn new(a: Cx<T>, b: Cx<T>, base: EllipticParams<T>) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Domain("interpolation parameters a, b must be nonzero".into()));
        }
        Ok(InterpParams { a, b, base })
    }
}

/// Elliptic binomial coefficient binon(λ, μ)_{[a,t]}; zero unless μ ≺' λ.
pub fn binon_elliptic<T: Real>(lam: &Partition, mu: &Partition, a: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    if !lam.horizontal_strip_over(mu) {
        return Ok(Cx::zero());
    }
    let (q, t, p) = (par.q, par.t, par.p);
    let pq = par.pq();
    let lc = lam.conjugate();
    let mc = mu.conjugate();
    let mono = |eq: i64, et: i64| ipow(q, eq) * ipow(t, et);
    let mut num = Cx::<T>::one();
    let mut den = Cx::<T>::one();
    let push_den = |x: Cx<T>, den: &mut Cx<T>| -> Result<()> {
        let f = theta(x, p)?;
        if modulus(f) < T::POLE {
            return Err(Error::pole(format!("binon {lam}/{mu}"), modulus(f)));
        }
        *den = *den * f;
        Ok(())
    };
    for (i, j) in lam.boxes() {
        let (ii, jj) = (i as i64, j as i64);
        let li = lam.part(i - 1) as i64;
        let mui = mu.part(i - 1) as i64;
        let lj = lc.part(j - 1) as i64;
        let mj = mc.part(j - 1) as i64;
        if lj == mj {
            num = num * theta(mono(li + jj - 1, 2 - lj - ii) * a, p)?;
            push_den(mono(mui - jj, mj - ii) * pq, &mut den)?;
        } else {
            num = num * theta(mono(li - jj, 1 + lj - ii), p)?;
            push_den(mono(mui + jj - 1, -mj - ii) * pq * a, &mut den)?;
        }
    }
    for (i, j) in mu.boxes() {
        let (ii, jj) = (i as i64, j as i64);
        let li = lam.part(i - 1) as i64;
        let mui = mu.part(i - 1) as i64;
        let lj = lc.part(j - 1) as i64;
        let mj = mc.part(j - 1) as i64;
        if lj == mj {
            num = num * theta(mono(li - jj, lj - ii) * pq, p)?;
            push_den(mono(mui + jj - 1, 1 - mj - ii) * a, &mut den)?;
        } else {
            num = num * theta(mono(li + jj - 1, 1 - lj - ii) * pq * a, p)?;
            push_den(mono(mui - jj, 1 + mj - ii), &mut den)?;
        }
    }
    Ok(num / den)
}

/// Branching coefficient c_{λ,κ}(a, b, v) for the step from n to n + 1
/// variables (so t^n appears).
pub fn branch_coeff<T: Real>(
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v: Cx<T>,
    n: usize,
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    if !lam.horizontal_strip_over(kappa) {
        return Ok(Cx::zero());
    }
    let t = par.t;
    let tn = ipow(t, n as i64);
    let pq = par.pq();
    let bs = [tn * a * v, tn * a / v, pq * a / (b * t)];
    // Δ⁰_λ / Δ⁰_κ with the shared numerator factors cancelled box by box,
    // so that principal specializations do not produce 0/0.
    let mut num = Cx::<T>::one();
    for &x in &bs {
        num = num * c0_skew(lam, kappa, x, par)?;
    }
    let top_den: Vec<Cx<T>> = bs.iter().map(|&x| pq * tn * a / (b * x)).collect();
    let bot_den: Vec<Cx<T>> = bs.iter().map(|&x| pq * tn / t * a / (b * x)).collect();
    let ratio = c_elliptic_multi(CKind::Zero, kappa, &bot_den, par)?
        / c_den(CKind::Zero, lam, &top_den, par, "branch coefficient")?;
    Ok(binon_elliptic(lam, kappa, tn * a / b, par)? * num * ratio)
}

/// ∏ θ(q^{j−1} t^{1−i} x) over the boxes of λ/κ, i.e. C⁰_λ(x)/C⁰_κ(x).
pub fn c0_skew<T: Real>(lam: &Partition, kappa: &Partition, x: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    let mut acc = Cx::<T>::one();
    for (i, j) in lam.boxes() {
        if j <= kappa.part(i - 1) {
            continue;
        }
        acc = acc * theta(ipow(par.q, j as i64 - 1) * ipow(par.t, 1 - i as i64) * x, par.p)?;
    }
    Ok(acc)
}

/// Evaluates a branching sum Σ over chains with the supplied coefficient
/// c(λ, κ, v, n), peeling the last coordinate of `z` first. Shared by the
/// elliptic functions and all their degenerations.
pub fn branching_sum<T, F>(lam: &Partition, z: &[Cx<T>], coeff: &F) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&Partition, &Partition, Cx<T>, usize) -> Result<Cx<T>>,
{
    let mut memo: HashMap<(usize, Partition), Cx<T>> = HashMap::new();
    branch_rec(lam, z.len(), z, coeff, &mut memo)
}

fn branch_rec<T, F>(
    lam: &Partition,
    depth: usize,
    z: &[Cx<T>],
    coeff: &F,
    memo: &mut HashMap<(usize, Partition), Cx<T>>,
) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&Partition, &Partition, Cx<T>, usize) -> Result<Cx<T>>,
{
    if depth == 0 {
        return Ok(if lam.is_empty() { Cx::one() } else { Cx::zero() });
    }
    if lam.len() > depth {
        return Ok(Cx::zero());
    }
    let key = (depth, lam.clone());
    if let Some(v) = memo.get(&key) {
        return Ok(*v);
    }
    let v = z[depth - 1];
    let mut acc = Cx::<T>::zero();
    for kappa in lam.horizontal_strips() {
        if kappa.len() > depth - 1 {
            continue;
        }
        let inner = branch_rec(&kappa, depth - 1, z, coeff, memo)?;
        if inner.is_zero() {
            continue;
        }
        acc = acc + coeff(lam, &kappa, v, depth - 1)? * inner;
    }
    memo.insert(key, acc);
    Ok(acc)
}

/// R*_λ(z₁, …, z_n; a, b).
pub fn interp_r<T: Real>(lam: &Partition, z: &[Cx<T>], a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    branching_sum(lam, z, &|l, k, v, n| branch_coeff(l, k, a, b, v, n, par))
}

/// Normalization factor turning R* into Q*.
pub fn q_normalization<T: Real>(lam: &Partition, n: usize, a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    let t = par.t;
    let tn1 = ipow(t, n as i64 - 1);
    let d = delta(lam, tn1 * a / b, &[ipow(t, n as i64)], par)?;
    let num = c_elliptic(CKind::Plus, lam, tn1 * a / b, par)? * c_elliptic(CKind::Zero, lam, tn1 * a * b, par)?;
    let den = c_den(CKind::Plus, lam, &[tn1 * tn1 * a * a], par, "Q* normalization")?
        * c_den(CKind::Zero, lam, &[par.pq() * tn1 * a / b], par, "Q* normalization")?;
    Ok(d * num / den)
}

/// Q*_λ(z; a, b) = R*_λ(z; a, b) times the normalization factor.
pub fn interp_q<T: Real>(lam: &Partition, z: &[Cx<T>], a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    Ok(interp_r(lam, z, a, b, par)? * q_normalization(lam, z.len(), a, b, par)?)
}

/// The points a q^{λ_i} t^{n−i}, i = 1..n.
pub fn principal_points<T: Real>(lam: &Partition, n: usize, a: Cx<T>, q: Cx<T>, t: Cx<T>) -> Vec<Cx<T>> {
    (1..=n).map(|i| a * ipow(q, lam.part(i - 1) as i64) * ipow(t, (n - i) as i64)).collect()
}

/// binom(λ, μ)_{[a,b]} computed with an explicit number of variables and
/// choice of √a.
pub fn gen_binom_with<T: Real>(
    lam: &Partition,
    mu: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    n: usize,
    sqrt_a: Cx<T>,
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    if n < lam.len() || n < mu.len() {
        return Err(Error::Precondition(format!("n = {n} is below the lengths of {lam} and {mu}")));
    }
    if mu.is_empty() {
        return Ok(Cx::one());
    }
    let t = par.t;
    let z: Vec<Cx<T>> = (1..=n)
        .map(|i| sqrt_a * ipow(par.q, lam.part(i - 1) as i64) * ipow(t, 1 - i as i64))
        .collect();
    let d = delta(mu, a / b, &[ipow(t, n as i64), b.inv()], par)?;
    let r = interp_r(mu, &z, ipow(t, 1 - n as i64) * sqrt_a, b / sqrt_a, par)?;
    let v = d * r;
    if !modulus(v).is_finite() {
        return Err(Error::Evaluation {
            p: par.p.re.to_f64().unwrap_or(f64::NAN),
            message: format!("binom {lam}/{mu} is outside the floating-point range"),
        });
    }
    Ok(v)
}

/// binom(λ, μ)_{[a,b]} with n = max(ℓ(λ), ℓ(μ)) and the principal √a.
pub fn gen_binom<T: Real>(lam: &Partition, mu: &Partition, a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    let n = lam.len().max(mu.len());
    gen_binom_with(lam, mu, a, b, n, a.sqrt(), par)
}

/// Ω_{λ/κ}(a, b; v₁, v₂, v₃, v₄) as the double binomial sum.
pub fn omega<T: Real>(
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v: [Cx<T>; 4],
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    Ok(omega_terms(lam, kappa, a, b, v, par)?.into_iter().fold(Cx::zero(), |acc, x| acc + x))
}

/// The summands of Ω_{λ/κ}, one per κ ⊂ μ ⊂ λ in `lam.between(kappa)` order.
pub fn omega_terms<T: Real>(
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v: [Cx<T>; 4],
    par: &EllipticParams<T>,
) -> Result<Vec<Cx<T>>> {
    if !lam.contains(kappa) {
        return Ok(Vec::new());
    }
    let pq = par.pq();
    let vv = v[0] * v[1] * v[2] * v[3];
    let inner_b = a * b * pq / vv;
    let outer = delta0_scaled(lam, pq * a * a, &[pq * a * b], par)?
        / delta0_scaled(kappa, vv / (b * b * pq), &[vv / (a * b * pq)], par)?
        * c_scaled(CKind::Zero, lam, &v.map(|x| pq * a / x), par, None)?
        / c_scaled(CKind::Zero, kappa, &v.map(|x| x / b), par, Some("omega"))?;
    lam.between(kappa)
        .iter()
        .map(|mu| {
            let term = outer
                * gen_binom(lam, mu, pq * a * a, pq * a * b, par)?
                * gen_binom(mu, kappa, a / b, inner_b, par)?
                * delta0_scaled(mu, a / b, &[inner_b], par)?
                / delta0_scaled(mu, a / b, &[(pq * a * b).inv()], par)?
                * c_scaled(CKind::Zero, mu, &v.map(|x| x / b), par, None)?
                / c_scaled(CKind::Zero, mu, &v.map(|x| pq * a / x), par, Some("omega"))?;
            Ok(term.to_cx())
        })
        .collect()
}

/// Closed form of Ω_{λ/κ}(a, b; v₁, v₂, x, abpq/x).
#[allow(clippy::too_many_arguments)]
pub fn omega_eval<T: Real>(
    lam: &Partition,
    kappa: &Partition,
    a: Cx<T>,
    b: Cx<T>,
    v1: Cx<T>,
    v2: Cx<T>,
    x: Cx<T>,
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    if !lam.contains(kappa) {
        return Ok(Cx::zero());
    }
    let pq = par.pq();
    let bin = gen_binom(lam, kappa, pq * a * a, pq * a * b / (v1 * v2), par)?;
    let num = c_elliptic_multi(
        CKind::Zero,
        lam,
        &[pq * a * b / (v1 * v2), pq * a * v1, pq * a * v2, x / b, pq * a / x],
        par,
    )? * c_elliptic(CKind::Zero, kappa, pq * pq * a * a, par)?;
    let den = c_den(CKind::Zero, lam, &[pq * a * v1 * v2 / b], par, "omega_eval")?
        * c_den(
            CKind::Zero,
            kappa,
            &[pq * a * v1, pq * a * v2, v1 * v2 / (pq * a * b), x / b, a * pq / x],
            par,
            "omega_eval",
        )?;
    Ok(bin * num / den)
}

/// The monomial factor of R*(z; pa, b) relative to R*(z; a, b).
pub fn r_shift_a<T: Real>(lam: &Partition, n: usize, a: Cx<T>, par: &EllipticParams<T>) -> Cx<T> {
    let c = (a * a * ipow(par.t, n as i64 - 1)).inv();
    shift_monomial(c, lam.size(), par.q, -2 * lam.n_conj() as i64, par.t, 2 * lam.n_stat() as i64)
}

/// The monomial factor of R*(z; a, pb) relative to R*(z; a, b).
pub fn r_shift_b<T: Real>(lam: &Partition, n: usize, b: Cx<T>, par: &EllipticParams<T>) -> Cx<T> {
    let c = b * b / (ipow(par.t, n as i64 - 1) * par.q * par.q);
    shift_monomial(c, lam.size(), par.q, -2 * lam.n_conj() as i64, par.t, 2 * lam.n_stat() as i64)
}

/// The monomial factor of R*(√p z; √p a, √p b) relative to R*(z; a, b).
pub fn r_shift_sqrt_p<T: Real>(lam: &Partition, n: usize, a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Cx<T> {
    let c = b / (ipow(par.t, n as i64 - 1) * a * par.q);
    shift_monomial(c, lam.size(), par.q, -2 * lam.n_conj() as i64, par.t, 2 * lam.n_stat() as i64)
}

/// The monomial factor of R*(z; 1/a, 1/b; 1/q, 1/t) relative to R*(z; a, b; q, t).
pub fn r_inversion_factor<T: Real>(lam: &Partition, n: usize, a: Cx<T>, b: Cx<T>, par: &EllipticParams<T>) -> Cx<T> {
    let tn = ipow(par.t, n as i64 - 1);
    let c = b * b / (a * a * par.q * par.q * tn * tn);
    shift_monomial(c, lam.size(), par.q, -4 * lam.n_conj() as i64, par.t, 4 * lam.n_stat() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csymbols::{c_elliptic, delta0};
    use crate::scalar::{cx, re, rel_err};

    type C = Cx<f64>;

    fn par() -> EllipticParams<f64> {
        EllipticParams::new(cx(0.42, 0.31), cx(0.55, -0.27), re(0.04)).unwrap()
    }

    fn p(v: &[usize]) -> Partition {
        Partition::from_slice(v)
    }

    #[test]
    fn diagonal_binomial_closed_form() {
        let par = par();
        let (a, b): (C, C) = (cx(0.6, 0.3), cx(0.5, -0.4));
        for lam in [p(&[1]), p(&[2, 1]), p(&[2, 2]), p(&[3, 1])] {
            let got = gen_binom(&lam, &lam, a, b, &par).unwrap();
            let want = delta0(&lam, a / b, &[b.inv()], &par).unwrap() * c_elliptic(CKind::Plus, &lam, a, &par).unwrap()
                / (delta0(&lam, a, &[b], &par).unwrap() * c_elliptic(CKind::Plus, &lam, a / b, &par).unwrap());
            assert!(rel_err(got, want) < 1e-11, "{lam}: {got} vs {want}");
        }
    }

    #[test]
    fn binon_vanishing_and_diagonal() {
        let par = par();
        let a: C = cx(0.6, 0.3);
        assert_eq!(binon_elliptic(&p(&[]), &p(&[1]), a, &par).unwrap(), C::zero());
        let lam = p(&[2, 1]);
        let got = binon_elliptic(&lam, &lam, a, &par).unwrap();
        let want = c_elliptic(CKind::Plus, &lam, a, &par).unwrap() / c_elliptic(CKind::Plus, &lam, a / par.t, &par).unwrap();
        assert!(rel_err(got, want) < 1e-12);
    }

    #[test]
    fn binon_p_shift() {
        let par = par();
        let a: C = cx(0.6, 0.3);
        let (q, t) = (par.q, par.t);
        for (l, m) in [(p(&[2, 1]), p(&[1])), (p(&[3, 1]), p(&[2, 1])), (p(&[2, 2, 1]), p(&[2, 1]))] {
            let lhs = binon_elliptic(&l, &m, par.p * a, &par).unwrap();
            let d = l.size() as i64 - m.size() as i64;
            let f = ipow(-par.pq() * a, d)
                * ipow(q, l.n_conj() as i64 - m.n_conj() as i64)
                * ipow(t, m.n_stat() as i64 - l.n_stat() as i64 - l.size() as i64);
            let rhs = f * binon_elliptic(&l, &m, a, &par).unwrap();
            assert!(rel_err(lhs, rhs) < 1e-11, "{l}/{m}");
        }
    }

    #[test]
    fn base_cases() {
        let par = par();
        let (a, b, v): (C, C, C) = (cx(0.6, 0.3), cx(0.5, -0.4), cx(0.9, 0.2));
        assert_eq!(branch_coeff(&p(&[]), &p(&[]), a, b, v, 0, &par).unwrap(), C::one());
        assert_eq!(branch_coeff(&p(&[1]), &p(&[2]), a, b, v, 0, &par).unwrap(), C::zero());
        let r = interp_r(&p(&[1]), &[v], a, b, &par).unwrap();
        let c = branch_coeff(&p(&[1]), &p(&[]), a, b, v, 0, &par).unwrap();
        assert!(rel_err(r, c) < 1e-14);
        assert_eq!(interp_r(&p(&[]), &[v, a], a, b, &par).unwrap(), C::one());
        assert_eq!(interp_r(&p(&[1, 1, 1]), &[v, a], a, b, &par).unwrap(), C::zero());
    }

    #[test]
    fn principal_evaluation() {
        let par = par();
        let (a, b): (C, C) = (cx(0.6, 0.3), cx(0.5, -0.4));
        for (lam, n) in [(p(&[1]), 1), (p(&[2]), 1), (p(&[2, 1]), 2), (p(&[1, 1]), 3), (p(&[2, 1]), 3)] {
            let z = principal_points(&lam, n, a, par.q, par.t);
            let v = interp_q(&lam, &z, a, b, &par).unwrap();
            assert!(rel_err(v, C::one()) < 1e-9, "{lam} n={n}: {v}");
        }
    }

    fn zs() -> Vec<C> {
        vec![cx(0.7, 0.4), cx(-0.5, 0.6)]
    }

    #[test]
    fn symmetries_of_r() {
        let par = par();
        let (a, b): (C, C) = (cx(0.6, 0.3), cx(0.5, -0.4));
        let z = zs();
        for lam in [p(&[1]), p(&[2, 1]), p(&[2, 2]), p(&[3, 1])] {
            let r = interp_r(&lam, &z, a, b, &par).unwrap();
            let neg: Vec<C> = z.iter().map(|x| -x).collect();
            assert!(rel_err(interp_r(&lam, &neg, -a, -b, &par).unwrap(), r) < 1e-10, "negation {lam}");
            let swapped = vec![z[1], z[0]];
            assert!(rel_err(interp_r(&lam, &swapped, a, b, &par).unwrap(), r) < 1e-10, "swap {lam}");
            let inv = vec![z[0], z[1].inv()];
            assert!(rel_err(interp_r(&lam, &inv, a, b, &par).unwrap(), r) < 1e-10, "inverse {lam}");
            let sh = vec![z[0] * par.p, z[1]];
            assert!(rel_err(interp_r(&lam, &sh, a, b, &par).unwrap(), r) < 1e-10, "p-shift z {lam}");
            let ip = par.inverted();
            let lhs = interp_r(&lam, &z, a.inv(), b.inv(), &ip).unwrap();
            assert!(rel_err(lhs, r * r_inversion_factor(&lam, 2, a, b, &par)) < 1e-10, "inversion {lam}");
            let lhs = interp_r(&lam, &z, par.p * a, b, &par).unwrap();
            assert!(rel_err(lhs, r * r_shift_a(&lam, 2, a, &par)) < 1e-10, "pa {lam}");
            let lhs = interp_r(&lam, &z, a, par.p * b, &par).unwrap();
            assert!(rel_err(lhs, r * r_shift_b(&lam, 2, b, &par)) < 1e-10, "pb {lam}");
            let s = par.p.sqrt();
            let zz: Vec<C> = z.iter().map(|x| x * s).collect();
            let lhs = interp_r(&lam, &zz, s * a, s * b, &par).unwrap();
            assert!(rel_err(lhs, r * r_shift_sqrt_p(&lam, 2, a, b, &par)) < 1e-10, "sqrt p {lam}");
        }
    }

    #[test]
    fn binomial_properties() {
        let par = par();
        let (a, b): (C, C) = (cx(0.6, 0.3), cx(0.5, -0.4));
        for (l, m) in [(p(&[2, 1]), p(&[1])), (p(&[2, 1]), p(&[2])), (p(&[2, 2]), p(&[2, 1])), (p(&[3]), p(&[1]))] {
            let v = gen_binom(&l, &m, a, b, &par).unwrap();
            let n = l.len().max(m.len());
            let v2 = gen_binom_with(&l, &m, a, b, n + 1, a.sqrt(), &par).unwrap();
            assert!(rel_err(v2, v) < 1e-10, "n-independence {l}/{m}");
            let v3 = gen_binom_with(&l, &m, a, b, n, -a.sqrt(), &par).unwrap();
            assert!(rel_err(v3, v) < 1e-10, "branch {l}/{m}");
            assert!(rel_err(gen_binom(&l, &m, par.p * a, b, &par).unwrap(), v) < 1e-10, "pa {l}/{m}");
            assert!(rel_err(gen_binom(&l, &m, a, par.p * b, &par).unwrap(), v) < 1e-10, "pb {l}/{m}");
            let inv = gen_binom(&l, &m, a.inv(), b.inv(), &par.inverted()).unwrap();
            assert!(rel_err(inv, v) < 1e-10, "inversion {l}/{m}");
            let z = gen_binom(&m, &l, a, b, &par).unwrap();
            assert!(z.norm() < 1e-9, "vanishing {m}/{l}: {z}");
        }
    }

    #[test]
    fn omega_properties() {
        let par = par();
        let (a, b): (C, C) = (cx(0.6, 0.3), cx(0.5, -0.4));
        let v = [cx(0.7, 0.1), cx(0.4, -0.5), cx(-0.6, 0.3), cx(0.55, 0.45)];
        for (l, k) in [(p(&[1]), p(&[])), (p(&[2]), p(&[])), (p(&[2, 1]), p(&[1])), (p(&[2, 1]), p(&[]))] {
            let w = omega(&l, &k, a, b, v, &par).unwrap();
            let perm = [v[2], v[0], v[3], v[1]];
            assert!(rel_err(omega(&l, &k, a, b, perm, &par).unwrap(), w) < 1e-9, "perm {l}/{k}");
            let flip = [v[0], v[1], v[2].inv(), v[3].inv()];
            assert!(rel_err(omega(&l, &k, a, b / (v[2] * v[3]), flip, &par).unwrap(), w) < 1e-9, "flip {l}/{k}");
            assert!(rel_err(omega(&l, &k, -a, -b, v.map(|x| -x), &par).unwrap(), w) < 1e-9, "neg {l}/{k}");
            let x = v[2];
            let vv = [v[0], v[1], x, a * b * par.pq() / x];
            let direct = omega(&l, &k, a, b, vv, &par).unwrap();
            let closed = omega_eval(&l, &k, a, b, v[0], v[1], x, &par).unwrap();
            assert!(rel_err(direct, closed) < 1e-9, "eval {l}/{k}: {direct} vs {closed}");
        }
    }
}
