//! q-Pochhammer symbols, theta functions and the elliptic Gamma function.

use crate::error::{Error, Result};
use crate::scalar::{modulus, Cx, Real};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Hard cap on the number of factors in any truncated infinite product.
pub const PRODUCT_CAP: usize = 2000;

/// The global bases (q, t, p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams<T: Real> {
    pub q: Cx<T>,
    pub t: Cx<T>,
    pub p: Cx<T>,
}

impl<T: Real> EllipticParams<T> {
    pub fn new(q: Cx<T>, t: Cx<T>, p: Cx<T>) -> Result<Self> {
        if q.is_zero() || t.is_zero() {
            return Err(Error::Domain("q and t must be nonzero".into()));
        }
        if modulus(p) >= 1.0 {
            return Err(Error::Domain(format!("|p| = {} is not below 1", modulus(p))));
        }
        Ok(EllipticParams { q, t, p })
    }

    /// Same q and t with a different nome.
    pub fn with_p(&self, p: Cx<T>) -> Self {
        EllipticParams { p, ..*self }
    }

    /// `pq`, the most common composite.
    pub fn pq(&self) -> Cx<T> {
        self.p * self.q
    }

    /// Inverts q and t, keeping p.
    pub fn inverted(&self) -> Self {
        EllipticParams { q: self.q.inv(), t: self.t.inv(), p: self.p }
    }
}

/// (x; q)_m = ∏_{r<m} (1 − x q^r). Defined for every q.
pub fn qpoch<T: Real>(x: Cx<T>, q: Cx<T>, m: usize) -> Cx<T> {
    let mut acc = Cx::<T>::one();
    let mut term = x;
    for _ in 0..m {
        acc = acc * (Cx::<T>::one() - term);
        term = term * q;
    }
    acc
}

/// (x; q)_∞, truncated once |x q^N| drops below the tail threshold.
pub fn qpoch_inf<T: Real>(x: Cx<T>, q: Cx<T>) -> Result<Cx<T>> {
    if modulus(q) >= 1.0 {
        return Err(Error::Domain(format!("(x;q)_inf needs |q| < 1, got {}", modulus(q))));
    }
    let mut acc = Cx::<T>::one();
    let mut term = x;
    for _ in 0..PRODUCT_CAP {
        if modulus(term) < T::TAIL {
            break;
        }
        acc = acc * (Cx::<T>::one() - term);
        term = term * q;
    }
    Ok(acc)
}

/// θ(x; p) = (x; p)_∞ (p/x; p)_∞.
pub fn theta<T: Real>(x: Cx<T>, p: Cx<T>) -> Result<Cx<T>> {
    if x.is_zero() {
        return Err(Error::Domain("theta(0; p) is undefined".into()));
    }
    Ok(qpoch_inf(x, p)? * qpoch_inf(p / x, p)?)
}

/// θ(x; q; p)_m = ∏_{r<m} θ(x q^r; p).
pub fn theta_poch<T: Real>(x: Cx<T>, q: Cx<T>, p: Cx<T>, m: usize) -> Result<Cx<T>> {
    let mut acc = Cx::<T>::one();
    let mut arg = x;
    for _ in 0..m {
        acc = acc * theta(arg, p)?;
        arg = arg * q;
    }
    Ok(acc)
}

/// Product of θ over a list of arguments, the multiplicative convention
/// θ(x₁, …, x_k; p).
pub fn theta_multi<T: Real>(xs: &[Cx<T>], p: Cx<T>) -> Result<Cx<T>> {
    xs.iter().try_fold(Cx::<T>::one(), |acc, &x| Ok(acc * theta(x, p)?))
}

/// Elliptic Gamma Γ(x; p, q) as a truncated double product.
pub fn elliptic_gamma<T: Real>(x: Cx<T>, p: Cx<T>, q: Cx<T>) -> Result<Cx<T>> {
    if modulus(p) >= 1.0 || modulus(q) >= 1.0 {
        return Err(Error::Domain("elliptic Gamma needs |p|, |q| < 1".into()));
    }
    if x.is_zero() {
        return Err(Error::Domain("elliptic Gamma at x = 0".into()));
    }
    let pq_over_x = p * q / x;
    let mut acc = Cx::<T>::one();
    let mut pi = Cx::<T>::one();
    for _ in 0..PRODUCT_CAP {
        let mut num = pi * pq_over_x;
        let mut den = pi * x;
        if modulus(num) < T::TAIL && modulus(den) < T::TAIL {
            break;
        }
        for _ in 0..PRODUCT_CAP {
            if modulus(num) < T::TAIL && modulus(den) < T::TAIL {
                break;
            }
            let d = Cx::<T>::one() - den;
            if modulus(d) < T::POLE {
                return Err(Error::pole("elliptic_gamma", modulus(d)));
            }
            acc = acc * (Cx::<T>::one() - num) / d;
            num = num * q;
            den = den * q;
        }
        pi = pi * p;
    }
    Ok(acc)
}

/// One factor of a multiplicative argument: a value, optionally carrying ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgFactor<T: Real> {
    Plain(Cx<T>),
    PlusMinus(Cx<T>),
}

/// Expands a product of factors such as `x y^{±1}` into the list of all
/// sign combinations, in binary order with `+` first.
pub fn multiplicative_expand<T: Real>(factors: &[ArgFactor<T>]) -> Vec<Cx<T>> {
    let mut out = vec![Cx::<T>::one()];
    for f in factors {
        out = match *f {
            ArgFactor::Plain(x) => out.into_iter().map(|v| v * x).collect(),
            ArgFactor::PlusMinus(x) => {
                out.into_iter().flat_map(|v| [v * x, v / x]).collect()
            }
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, re, rel_err};

    type C = Cx<f64>;

    #[test]
    fn qpoch_examples() {
        let q: C = re(0.3);
        assert_eq!(qpoch(re(0.5), q, 0), re(1.0));
        assert!(rel_err(qpoch(re(0.5), q, 1), re(0.5)) < 1e-15);
        assert!(rel_err(qpoch(re(0.5), q, 2), re(0.425)) < 1e-15);
    }

    #[test]
    fn qpoch_inf_examples() {
        assert_eq!(qpoch_inf::<f64>(re(0.0), re(0.5)).unwrap(), re(1.0));
        assert!(rel_err(qpoch_inf::<f64>(re(0.5), re(0.0)).unwrap(), re(0.5)) < 1e-15);
        // Long product oracle.
        let mut oracle = 1.0f64;
        for r in 0..200 {
            oracle *= 1.0 - 0.3 * 0.5f64.powi(r);
        }
        assert!(rel_err(qpoch_inf::<f64>(re(0.3), re(0.5)).unwrap(), re(oracle)) < 1e-14);
        assert!(qpoch_inf::<f64>(re(0.3), re(1.0)).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!(rel_err(theta::<f64>(re(0.5), re(0.0)).unwrap(), re(0.5)) < 1e-15);
        let p: C = re(0.05);
        let x: C = re(0.4);
        assert!(rel_err(theta(p * x, p).unwrap(), -theta(x, p).unwrap() / x) < 1e-13);
        let x: C = cx(0.4, 0.2);
        assert!(rel_err(theta(x.inv(), p).unwrap(), -theta(x, p).unwrap() / x) < 1e-13);
        assert!(theta::<f64>(re(0.0), p).is_err());
    }

    #[test]
    fn theta_poch_examples() {
        let (x, q, p): (C, C, C) = (cx(0.3, 0.1), cx(0.5, -0.2), re(0.04));
        assert_eq!(theta_poch(x, q, p, 0).unwrap(), re(1.0));
        assert!(rel_err(theta_poch(x, q, p, 1).unwrap(), theta(x, p).unwrap()) < 1e-15);
        assert!(rel_err(theta_poch(x, q, re(0.0), 3).unwrap(), qpoch(x, q, 3)) < 1e-14);
    }

    #[test]
    fn gamma_examples() {
        let (p, q): (C, C) = (re(0.1), re(0.2));
        let x: C = re(0.6);
        let g = elliptic_gamma(p * q / x, p, q).unwrap() * elliptic_gamma(x, p, q).unwrap();
        assert!(rel_err(g, re(1.0)) < 1e-13);
        let s = (p * q).sqrt();
        assert!(rel_err(elliptic_gamma(s, p, q).unwrap(), re(1.0)) < 1e-13);
        let g0 = elliptic_gamma(x, re(0.0), q).unwrap();
        assert!(rel_err(g0, qpoch_inf(x, q).unwrap().inv()) < 1e-13);
    }

    #[test]
    fn gamma_difference_equation() {
        // Γ(qx) = θ(x; p) Γ(x)
        let (p, q, x): (C, C, C) = (re(0.07), cx(0.3, 0.2), cx(0.5, -0.3));
        let lhs = elliptic_gamma(q * x, p, q).unwrap();
        let rhs = theta(x, p).unwrap() * elliptic_gamma(x, p, q).unwrap();
        assert!(rel_err(lhs, rhs) < 1e-12);
    }

    #[test]
    fn expand_examples() {
        let (x, y): (C, C) = (re(2.0), re(3.0));
        let v = multiplicative_expand(&[ArgFactor::Plain(x), ArgFactor::PlusMinus(y)]);
        assert_eq!(v, vec![x * y, x / y]);
        let v = multiplicative_expand(&[ArgFactor::PlusMinus(x), ArgFactor::PlusMinus(y)]);
        let want = [x * y, x / y, y / x, (x * y).inv()];
        for w in want {
            assert!(v.iter().any(|u| rel_err(*u, w) < 1e-15));
        }
        assert_eq!(multiplicative_expand(&[ArgFactor::Plain(x)]), vec![x]);
    }

    #[test]
    fn single_precision_theta() {
        let p = Cx::<f32>::new(0.05, 0.0);
        let x = Cx::<f32>::new(0.4, 0.1);
        let lhs = theta(p * x, p).unwrap();
        let rhs = -theta(x, p).unwrap() / x;
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-5);
    }
}
