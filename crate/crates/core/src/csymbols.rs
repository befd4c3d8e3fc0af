//! C-symbols (products of theta functions over the boxes of a diagram)
//! and the Δ-symbols built from them.
//!
//! For a box (i, j) of λ, with arm λ_i − j and leg λ'_j − i:
//!
//! * C⁰ uses the monomial q^{j−1} t^{1−i},
//! * C⁻ uses q^{λ_i−j} t^{λ'_j−i},
//! * C⁺ uses q^{λ_i+j−1} t^{2−λ'_j−i}.
//!
//! The elliptic symbols multiply θ(m x; p); the tilde symbols multiply (1 − m x).

use crate::error::{Error, Result};
use crate::kernels::{theta, EllipticParams};
use crate::partitions::Partition;
use crate::scalar::{ipow, modulus, Cx, Real, Scaled};
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CKind {
    Zero,
    Minus,
    Plus,
}

/// The monomials q^a t^b attached to the boxes of λ for the given kind.
pub fn box_monomials<T: Real>(kind: CKind, lam: &Partition, q: Cx<T>, t: Cx<T>) -> Vec<Cx<T>> {
    let conj = lam.conjugate();
    lam.boxes()
        .map(|(i, j)| {
            let (i, j) = (i as i64, j as i64);
            let li = lam.part(i as usize - 1) as i64;
            let lj = conj.part(j as usize - 1) as i64;
            let (eq, et) = match kind {
                CKind::Zero => (j - 1, 1 - i),
                CKind::Minus => (li - j, lj - i),
                CKind::Plus => (li + j - 1, 2 - lj - i),
            };
            ipow(q, eq) * ipow(t, et)
        })
        .collect()
}

/// Elliptic C-symbol C^kind_λ(x; q, t; p).
pub fn c_elliptic<T: Real>(kind: CKind, lam: &Partition, x: Cx<T>, par: &EllipticParams<T>) -> Result<Cx<T>> {
    box_monomials(kind, lam, par.q, par.t)
        .into_iter()
        .try_fold(Cx::<T>::one(), |acc, m| Ok(acc * theta(m * x, par.p)?))
}

/// Multiplicative form C_λ(x₁, …, x_k) = ∏ C_λ(x_r).
pub fn c_elliptic_multi<T: Real>(
    kind: CKind,
    lam: &Partition,
    xs: &[Cx<T>],
    par: &EllipticParams<T>,
) -> Result<Cx<T>> {
    Ok(c_scaled(kind, lam, xs, par, None)?.to_cx())
}

/// ∏_r C_λ(x_r) with a running exponent. With a context, every factor is
/// checked against the pole threshold.
pub(crate) fn c_scaled<T: Real>(
    kind: CKind,
    lam: &Partition,
    xs: &[Cx<T>],
    par: &EllipticParams<T>,
    den_context: Option<&str>,
) -> Result<Scaled<T>> {
    let monos = box_monomials(kind, lam, par.q, par.t);
    let mut acc = Scaled::one();
    for &x in xs {
        for &m in &monos {
            let f = theta(m * x, par.p)?;
            if let Some(context) = den_context {
                if modulus(f) < T::POLE {
                    return Err(Error::pole(format!("{context}: C{kind:?}_{lam}"), modulus(f)));
                }
            }
            acc = acc * f;
        }
    }
    Ok(acc)
}

/// Tilde C-symbol, the p = 0 degeneration.
pub fn c_tilde<T: Real>(kind: CKind, lam: &Partition, x: Cx<T>, q: Cx<T>, t: Cx<T>) -> Cx<T> {
    box_monomials(kind, lam, q, t).into_iter().fold(Cx::<T>::one(), |acc, m| acc * (Cx::<T>::one() - m * x))
}

pub fn c_tilde_multi<T: Real>(kind: CKind, lam: &Partition, xs: &[Cx<T>], q: Cx<T>, t: Cx<T>) -> Cx<T> {
    xs.iter().fold(Cx::<T>::one(), |acc, &x| acc * c_tilde(kind, lam, x, q, t))
}

/// Elliptic C-symbol used as a denominator: every factor is checked.
pub(crate) fn c_den<T: Real>(
    kind: CKind,
    lam: &Partition,
    xs: &[Cx<T>],
    par: &EllipticParams<T>,
    context: &str,
) -> Result<Cx<T>> {
    Ok(c_scaled(kind, lam, xs, par, Some(context))?.to_cx())
}

/// Tilde C-symbol used as a denominator: every factor is checked.
pub(crate) fn c_tilde_den<T: Real>(
    kind: CKind,
    lam: &Partition,
    xs: &[Cx<T>],
    q: Cx<T>,
    t: Cx<T>,
    context: &str,
) -> Result<Cx<T>> {
    let monos = box_monomials(kind, lam, q, t);
    let mut acc = Cx::<T>::one();
    for &x in xs {
        for &m in &monos {
            let f = Cx::<T>::one() - m * x;
            if modulus(f) < T::POLE {
                return Err(Error::pole(format!("{context}: C~{kind:?}_{lam}"), modulus(f)));
            }
            acc = acc * f;
        }
    }
    Ok(acc)
}

/// The monomial (c)^{|λ|} q^{eq} t^{et}, which appears in every shift rule.
pub fn shift_monomial<T: Real>(c: Cx<T>, size: usize, q: Cx<T>, eq: i64, t: Cx<T>, et: i64) -> Cx<T> {
    ipow(c, size as i64) * ipow(q, eq) * ipow(t, et)
}

/// Δ⁰_λ(a | b₁, …, b_r) = ∏ C⁰_λ(b_r) / C⁰_λ(pqa/b_r).
pub fn delta0<T: Real>(lam: &Partition, a: Cx<T>, bs: &[Cx<T>], par: &EllipticParams<T>) -> Result<Cx<T>> {
    Ok(delta0_scaled(lam, a, bs, par)?.to_cx())
}

pub(crate) fn delta0_scaled<T: Real>(lam: &Partition, a: Cx<T>, bs: &[Cx<T>], par: &EllipticParams<T>) -> Result<Scaled<T>> {
    let pqa = par.pq() * a;
    let num = c_scaled(CKind::Zero, lam, bs, par, None)?;
    let dens: Vec<Cx<T>> = bs.iter().map(|&b| pqa / b).collect();
    Ok(num / c_scaled(CKind::Zero, lam, &dens, par, Some("delta0"))?)
}

/// Δ_λ(a | b₁, …, b_r): Δ⁰ times C⁰_{2λ²}(pqa) / (C⁻_λ(pq) C⁻_λ(t) C⁺_λ(a) C⁺_λ(pqa/t)).
pub fn delta<T: Real>(lam: &Partition, a: Cx<T>, bs: &[Cx<T>], par: &EllipticParams<T>) -> Result<Cx<T>> {
    let pq = par.pq();
    let d0 = delta0_scaled(lam, a, bs, par)?;
    let num = c_scaled(CKind::Zero, &lam.double_square(), &[pq * a], par, None)?;
    let den = c_scaled(CKind::Minus, lam, &[pq, par.t], par, Some("delta"))?
        * c_scaled(CKind::Plus, lam, &[a, pq * a / par.t], par, Some("delta"))?;
    Ok((d0 * num / den).to_cx())
}

/// Δ̃^{(n)}_λ(a; q, t), the q-hypergeometric weight.
pub fn delta_tilde<T: Real>(lam: &Partition, a: Cx<T>, n: usize, q: Cx<T>, t: Cx<T>) -> Result<Cx<T>> {
    let tn = ipow(t, n as i64);
    let num = c_tilde(CKind::Zero, &lam.double_square(), a * q, q, t) * c_tilde(CKind::Zero, lam, tn, q, t);
    let den = c_tilde_den(CKind::Zero, lam, &[a * q / tn], q, t, "delta_tilde")?
        * c_tilde_den(CKind::Minus, lam, &[q, t], q, t, "delta_tilde")?
        * c_tilde_den(CKind::Plus, lam, &[a, a * q / t], q, t, "delta_tilde")?;
    let c = -(a * a * q * q * ipow(t, n as i64 - 1)).inv();
    let mono = shift_monomial(c, lam.size(), q, -3 * lam.n_conj() as i64, t, 5 * lam.n_stat() as i64);
    Ok(num / den * mono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{qpoch, theta_poch};
    use crate::scalar::{cx, re, rel_err};

    type C = Cx<f64>;

    fn par() -> EllipticParams<f64> {
        EllipticParams::new(cx(0.42, 0.31), cx(0.55, -0.27), re(0.04)).unwrap()
    }

    fn p(v: &[usize]) -> Partition {
        Partition::from_slice(v)
    }

    #[test]
    fn empty_partition_gives_one() {
        let par = par();
        let x: C = cx(0.7, 0.2);
        for k in [CKind::Zero, CKind::Minus, CKind::Plus] {
            assert_eq!(c_elliptic(k, &p(&[]), x, &par).unwrap(), C::one());
            assert_eq!(c_tilde(k, &p(&[]), x, par.q, par.t), C::one());
        }
        assert_eq!(delta0(&p(&[]), x, &[x], &par).unwrap(), C::one());
        assert_eq!(delta(&p(&[]), x, &[x], &par).unwrap(), C::one());
        assert_eq!(delta_tilde(&p(&[]), x, 2, par.q, par.t).unwrap(), C::one());
    }

    #[test]
    fn one_row_is_theta_pochhammer() {
        let par = par();
        let x: C = cx(0.7, 0.2);
        let got = c_elliptic(CKind::Zero, &p(&[3]), x, &par).unwrap();
        assert!(rel_err(got, theta_poch(x, par.q, par.p, 3).unwrap()) < 1e-13);
    }

    #[test]
    fn tilde_matches_p_zero() {
        let par = par().with_p(re(0.0));
        let x: C = cx(0.6, -0.4);
        for k in [CKind::Zero, CKind::Minus, CKind::Plus] {
            let a = c_elliptic(k, &p(&[2, 1]), x, &par).unwrap();
            let b = c_tilde(k, &p(&[2, 1]), x, par.q, par.t);
            assert!(rel_err(a, b) < 1e-14);
        }
        let one_box = c_tilde(CKind::Minus, &p(&[1]), x, par.q, par.t);
        assert!(rel_err(one_box, C::one() - x) < 1e-15);
    }

    #[test]
    fn delta0_single_box() {
        let par = par();
        let (a, b): (C, C) = (cx(0.5, 0.1), cx(0.8, -0.3));
        let got = delta0(&p(&[1]), a, &[b], &par).unwrap();
        let want = theta(b, par.p).unwrap() / theta(par.pq() * a / b, par.p).unwrap();
        assert!(rel_err(got, want) < 1e-13);
    }

    #[test]
    fn delta_univariate() {
        let par = par();
        let (a, b1, b2): (C, C, C) = (cx(0.5, 0.1), cx(0.8, -0.3), cx(0.4, 0.45));
        let l = 3;
        let got = delta(&p(&[l]), a, &[b1, b2], &par).unwrap();
        let th = |x: C, m: usize| theta_poch(x, par.q, par.p, m).unwrap();
        let pq = par.pq();
        let mut want = th(pq * a, 2 * l) * th(pq * a / par.t, l)
            / (th(pq, l) * th(par.t, l) * th(a * ipow(par.q, l as i64), l));
        for b in [b1, b2] {
            want = want * th(b, l) / th(pq * a / b, l);
        }
        assert!(rel_err(got, want) < 1e-12);
    }

    #[test]
    fn delta_tilde_univariate() {
        let par = par();
        let a: C = cx(0.5, 0.1);
        let q = par.q;
        for l in 0..4usize {
            let got = delta_tilde(&p(&[l]), a, 1, q, par.t).unwrap();
            let want = (C::one() - a * ipow(q, 2 * l as i64)) / (C::one() - a) * qpoch(a, q, l) / qpoch(q, q, l)
                * ipow(-(a * a * q * q).inv(), l as i64)
                * ipow(q, -3 * (l * l.saturating_sub(1) / 2) as i64);
            assert!(rel_err(got, want) < 1e-12, "l = {l}");
        }
    }

    #[test]
    fn delta_vanishes_beyond_n() {
        let par = par();
        let a: C = cx(0.5, 0.1);
        let tn = par.t;
        let v = delta(&p(&[1, 1]), a, &[tn], &par).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn c0_p_shift() {
        let par = par();
        let x: C = cx(0.6, 0.35);
        let lam = p(&[2, 1]);
        let lhs = c_elliptic(CKind::Zero, &lam, par.p * x, &par).unwrap();
        let rhs = c_elliptic(CKind::Zero, &lam, x, &par).unwrap()
            * shift_monomial(-x.inv(), lam.size(), par.q, -(lam.n_conj() as i64), par.t, lam.n_stat() as i64);
        assert!(rel_err(lhs, rhs) < 1e-12);
    }
}
