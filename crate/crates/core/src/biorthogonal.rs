//! The biorthogonal functions R̃_λ, their expansions in interpolation
//! functions, the discrete inner product and the difference operators.

use crate::csymbols::{c_den, c_elliptic_multi, delta, delta0, CKind};
use crate::error::{guard, Error, Result};
use crate::interpolation::{gen_binom, interp_r, omega};
use crate::kernels::{theta, theta_multi, EllipticParams};
use crate::partitions::Partition;
use crate::scalar::{ipow, modulus, Cx, Real};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Relative tolerance on the balancing condition.
pub const BALANCING_TOL: f64 = 1e-12;
/// Relative tolerance on the discrete specialization t₀t₁ = q^{−m}t^{1−n}.
pub const SPECIALIZATION_TOL: f64 = 1e-10;

/// Parameters t₀..t₃, u₀, u₁ with t^{2(n−1)} t₀t₁t₂t₃u₀u₁ = pq.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiorthoParams<T: Real> {
    pub n: usize,
    pub t: [Cx<T>; 4],
    pub u: [Cx<T>; 2],
    pub base: EllipticParams<T>,
}

fn check_nonzero<T: Real>(xs: &[Cx<T>]) -> Result<()> {
    if xs.iter().any(|x| x.is_zero()) {
        return Err(Error::Domain("biorthogonal parameters must be nonzero".into()));
    }
    Ok(())
}

impl<T: Real> BiorthoParams<T> {
    /// Solves u₁ from the balancing condition.
    pub fn new(n: usize, t: [Cx<T>; 4], u0: Cx<T>, base: EllipticParams<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        check_nonzero(&t)?;
        check_nonzero(&[u0])?;
        let tt = ipow(base.t, 2 * (n as i64 - 1));
        let u1 = base.pq() / (tt * t[0] * t[1] * t[2] * t[3] * u0);
        Ok(BiorthoParams { n, t, u: [u0, u1], base })
    }

    /// Takes u₁ as given and verifies the balancing condition.
    pub fn with_u1(n: usize, t: [Cx<T>; 4], u: [Cx<T>; 2], base: EllipticParams<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        check_nonzero(&t)?;
        check_nonzero(&u)?;
        let ps = BiorthoParams { n, t, u, base };
        let residual = ps.balancing_residual();
        let tol = BALANCING_TOL.max(1e3 * T::epsilon().to_f64().unwrap_or(0.0));
        if residual > tol {
            return Err(Error::Balancing { residual });
        }
        Ok(ps)
    }

    /// The discrete specialization: t₁ = q^{−m} t^{1−n} / t₀, u₁ from balancing.
    pub fn specialized(
        n: usize,
        m: usize,
        t0: Cx<T>,
        t2: Cx<T>,
        t3: Cx<T>,
        u0: Cx<T>,
        base: EllipticParams<T>,
    ) -> Result<Self> {
        check_nonzero(&[t0])?;
        let t1 = ipow(base.q, -(m as i64)) * ipow(base.t, 1 - n as i64) / t0;
        Self::new(n, [t0, t1, t2, t3], u0, base)
    }

    /// |t^{2(n−1)} t₀t₁t₂t₃u₀u₁ − pq| / |pq|.
    pub fn balancing_residual(&self) -> f64 {
        let pq = self.base.pq();
        let lhs = self.tn1() * self.tn1() * self.t[0] * self.t[1] * self.t[2] * self.t[3] * self.u[0] * self.u[1];
        modulus(lhs - pq) / modulus(pq)
    }

    /// t^{n−1}.
    pub fn tn1(&self) -> Cx<T> {
        ipow(self.base.t, self.n as i64 - 1)
    }

    /// The same parameters with u₀ and u₁ exchanged.
    pub fn swap_u(&self) -> Self {
        BiorthoParams { u: [self.u[1], self.u[0]], ..*self }
    }

    /// Exchanges t₀ and t_r.
    pub fn swap_t0(&self, r: usize) -> Self {
        let mut t = self.t;
        t.swap(0, r);
        BiorthoParams { t, ..*self }
    }

    /// Multiplies t₀..t₃, u₀, u₁ by the given factors, keeping n and the bases.
    pub fn scaled(&self, ft: [Cx<T>; 4], fu: [Cx<T>; 2]) -> Self {
        let t = [0, 1, 2, 3].map(|r| self.t[r] * ft[r]);
        let u = [0, 1].map(|r| self.u[r] * fu[r]);
        BiorthoParams { t, u, ..*self }
    }

    /// The specialization level m if t₀t₁ = q^{−m} t^{1−n} holds for it.
    pub fn check_specialization(&self, m: usize) -> Result<()> {
        let want = ipow(self.base.q, -(m as i64)) * ipow(self.base.t, 1 - self.n as i64);
        let got = self.t[0] * self.t[1];
        let residual = modulus(got - want) / modulus(want);
        if residual.is_nan() || residual > SPECIALIZATION_TOL {
            return Err(Error::Specialization { residual });
        }
        Ok(())
    }

    /// The points t₀ t^{n−i} q^{μ_i}.
    pub fn points(&self, mu: &Partition) -> Vec<Cx<T>> {
        let (q, t) = (self.base.q, self.base.t);
        (1..=self.n).map(|i| self.t[0] * ipow(t, (self.n - i) as i64) * ipow(q, mu.part(i - 1) as i64)).collect()
    }
}

fn check_len<T: Real>(lam: &Partition, z: &[Cx<T>], ps: &BiorthoParams<T>) -> Result<()> {
    if z.len() != ps.n {
        return Err(Error::Precondition(format!("expected {} variables, got {}", ps.n, z.len())));
    }
    if lam.len() > ps.n {
        return Err(Error::Precondition(format!("ℓ({lam}) exceeds n = {}", ps.n)));
    }
    Ok(())
}

/// R̃_λ(z; t₀:t₁,t₂,t₃; u₀,u₁) as the sum over μ ⊂ λ of binomials times R*_μ(z; t₀, u₀).
pub fn biortho_r<T: Real>(lam: &Partition, z: &[Cx<T>], ps: &BiorthoParams<T>) -> Result<Cx<T>> {
    check_len(lam, z, ps)?;
    let par = &ps.base;
    let [t0, t1, t2, t3] = ps.t;
    let [u0, u1] = ps.u;
    let tn = ps.tn1();
    let ba = (u0 * u1).inv();
    let bb = (tn * t0 * u1).inv();
    let mut acc = Cx::<T>::zero();
    for mu in lam.subpartitions() {
        let bin = gen_binom(lam, &mu, ba, bb, par)?;
        let r = interp_r(&mu, z, t0, u0, par)?;
        let d = delta0(&mu, tn * t0 / u0, &[tn * t0 * t1, tn * t0 * t2, tn * t0 * t3, tn * t0 * u1], par)?;
        acc = acc + bin * r / guard(d, format!("R̃ weight Δ⁰_{mu}"))?;
    }
    Ok(acc)
}

/// The C⁰ prefactor of the expansion in R*_ν(z; v, u₀).
pub fn omega_prefactor<T: Real>(lam: &Partition, ps: &BiorthoParams<T>, v: Cx<T>) -> Result<Cx<T>> {
    let par = &ps.base;
    let pq = par.pq();
    let [t0, t1, t2, t3] = ps.t;
    let [u0, u1] = ps.u;
    let tn = ps.tn1();
    let num = c_elliptic_multi(CKind::Zero, lam, &[pq * tn * t0 / u0], par)?;
    let den = c_den(
        CKind::Zero,
        lam,
        &[pq / (v * u0), tn * t0 * t1, tn * t0 * t2, tn * t0 * t3, (tn * t0 * u1).inv()],
        par,
        "omega expansion prefactor",
    )?;
    Ok(num / den)
}

/// The ν-sum of the Ω-expansion, without the C⁰ prefactor. Symmetric in t₀..t₃.
pub fn omega_sum<T: Real>(lam: &Partition, z: &[Cx<T>], ps: &BiorthoParams<T>, v: Cx<T>) -> Result<Cx<T>> {
    check_len(lam, z, ps)?;
    if v.is_zero() {
        return Err(Error::Domain("expansion point v must be nonzero".into()));
    }
    let par = &ps.base;
    let pq = par.pq();
    let [u0, u1] = ps.u;
    let tn = ps.tn1();
    let s = (pq * u0 * u1).sqrt().inv();
    let vs = [
        pq * s / (ps.t[0] * ps.t[1] * tn),
        pq * s / (ps.t[0] * ps.t[2] * tn),
        pq * s / (ps.t[0] * ps.t[3] * tn),
        u0 * v * s,
    ];
    let b = u0 * s / (tn * ps.t[0]);
    let cargs = ps.t.map(|tr| pq / (u0 * tr));
    // At v = t₀ the product v₁v₂v₃v₄ equals abpq and the double sum is 0/0;
    // at v = t_r the pair (v_r, v₄) multiplies to abpq. Flipping a pair
    // (v_i, v₄) → (1/v_i, 1/v₄), b → b/(v_i v₄) avoids both.
    let abpq = s * b * pq;
    let i = (0..3)
        .max_by(|&x, &y| {
            let dx = modulus(vs[x] * vs[3] / abpq - Cx::<T>::one());
            let dy = modulus(vs[y] * vs[3] / abpq - Cx::<T>::one());
            dx.partial_cmp(&dy).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let fb = b / (vs[i] * vs[3]);
    let mut fv = vs;
    fv[i] = vs[i].inv();
    fv[3] = vs[3].inv();
    let mut acc = Cx::<T>::zero();
    for nu in lam.subpartitions() {
        let w = omega(lam, &nu, s, fb, fv, par)?;
        let c = c_elliptic_multi(CKind::Zero, &nu, &cargs, par)?;
        acc = acc + w * c * interp_r(&nu, z, v, u0, par)?;
    }
    Ok(acc)
}

/// R̃_λ through its expansion in R*_ν(z; v, u₀).
pub fn biortho_r_via_omega<T: Real>(lam: &Partition, z: &[Cx<T>], ps: &BiorthoParams<T>, v: Cx<T>) -> Result<Cx<T>> {
    Ok(omega_prefactor(lam, ps, v)? * omega_sum(lam, z, ps, v)?)
}

/// Weight of the point t₀t^{n−i}q^{μ_i} in the discrete inner product.
pub fn discrete_weight<T: Real>(mu: &Partition, m: usize, ps: &BiorthoParams<T>) -> Result<Cx<T>> {
    let par = &ps.base;
    let pq = par.pq();
    let [t0, t1, t2, t3] = ps.t;
    let [u0, u1] = ps.u;
    let tn = ps.tn1();
    let num = delta(
        mu,
        tn * tn * t0 * t0,
        &[tn * par.t, tn * t0 * t1, tn * t0 * t2, tn * t0 * t3, tn * t0 * u0, tn * t0 * u1],
        par,
    )?;
    let rect = Partition::rectangle(m, ps.n);
    let den = delta0(&rect, tn * t1 / u0, &[t1 / t0, pq / (u0 * t2), pq / (u0 * t3), pq / (u0 * u1)], par)?;
    Ok(num / guard(den, "discrete inner product normalization")?)
}

/// ⟨f, g⟩ under the discrete measure supported on μ ⊂ mⁿ.
pub fn discrete_inner_product<T, F, G>(f: F, g: G, ps: &BiorthoParams<T>, m: usize) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
    G: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    ps.check_specialization(m)?;
    let mut acc = Cx::<T>::zero();
    for mu in Partition::rectangle(m, ps.n).subpartitions() {
        let x = ps.points(&mu);
        acc = acc + f(&x)? * g(&x)? * discrete_weight(&mu, m, ps)?;
    }
    Ok(acc)
}

/// 1/Δ_λ(1/u₀u₁ | tⁿ, t^{n−1}t₀t₁, t^{n−1}t₀t₂, t^{n−1}t₀t₃, 1/t^{n−1}t₀u₀, 1/t^{n−1}t₀u₁).
pub fn norm_formula<T: Real>(lam: &Partition, ps: &BiorthoParams<T>) -> Result<Cx<T>> {
    let par = &ps.base;
    let [t0, t1, t2, t3] = ps.t;
    let [u0, u1] = ps.u;
    let tn = ps.tn1();
    let d = delta(
        lam,
        (u0 * u1).inv(),
        &[tn * par.t, tn * t0 * t1, tn * t0 * t2, tn * t0 * t3, (tn * t0 * u0).inv(), (tn * t0 * u1).inv()],
        par,
    )?;
    Ok(guard(d, format!("norm of {lam}"))?.inv())
}

/// Parameters of the dual side of the evaluation duality. `branch` picks the
/// sign of t̂₀ = ±√(t₀t₁t₂t₃/pq).
pub fn dual_params<T: Real>(ps: &BiorthoParams<T>, branch: bool) -> BiorthoParams<T> {
    let [t0, t1, t2, t3] = ps.t;
    let root = (t0 * t1 * t2 * t3 / ps.base.pq()).sqrt();
    let h0 = if branch { root } else { -root };
    BiorthoParams {
        n: ps.n,
        t: [h0, t0 * t1 / h0, t0 * t2 / h0, t0 * t3 / h0],
        u: [h0 * ps.u[0] / t0, h0 * ps.u[1] / t0],
        base: ps.base,
    }
}

/// The three difference operators acting on BCₙ-symmetric functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiffOp<T: Real> {
    /// Rescaled D_q(v₀, v₁, v₂), the fourth parameter fixed by t^{n−1}v₀v₁v₂v₃ = p.
    Dq { v: [Cx<T>; 3] },
    /// D⁻(u₀) = raw D_q(u₀, qu₀, p/u₀, 1/(t^{n−1}u₀q)).
    Dminus { u0: Cx<T> },
    /// D⁺(v₀ : v₁ : v₂, v₃, v₄), v₅ fixed by t^{n−1}v₀⋯v₅ = p²q.
    Dplus { v: [Cx<T>; 5] },
}

fn signed_shift_sum<T, F>(
    z: &[Cx<T>],
    par: &EllipticParams<T>,
    numer: &[Cx<T>],
    extra_den: Option<Cx<T>>,
    f: &F,
) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    let n = z.len();
    let (p, t) = (par.p, par.t);
    let qh = par.q.sqrt();
    let mut acc = Cx::<T>::zero();
    for mask in 0..(1usize << n) {
        let zs: Vec<Cx<T>> = (0..n).map(|i| if mask >> i & 1 == 0 { z[i] } else { z[i].inv() }).collect();
        let mut w = Cx::<T>::one();
        for &x in &zs {
            let args: Vec<Cx<T>> = numer.iter().map(|&v| v * x).collect();
            w = w * theta_multi(&args, p)?;
            w = w / guard(theta(x * x, p)?, "difference operator: θ(z²)")?;
            if let Some(v0) = extra_den {
                w = w / guard(theta(par.pq() * x / v0, p)?, "difference operator: θ(pqz/v₀)")?;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let x = zs[i] * zs[j];
                w = w * theta(t * x, p)? / guard(theta(x, p)?, "difference operator: θ(z_i z_j)")?;
            }
        }
        let shifted: Vec<Cx<T>> = (0..n).map(|i| if mask >> i & 1 == 0 { z[i] * qh } else { z[i] / qh }).collect();
        acc = acc + w * f(&shifted)?;
    }
    Ok(acc)
}

/// Raw D_q(v₀, v₁, v₂, v₃) f at z.
pub fn dq_raw<T, F>(v: [Cx<T>; 4], f: &F, z: &[Cx<T>], par: &EllipticParams<T>) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    signed_shift_sum(z, par, &v, None, f)
}

/// Applies a difference operator to f at z.
pub fn difference_apply<T, F>(op: &DiffOp<T>, f: &F, z: &[Cx<T>], par: &EllipticParams<T>) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(&[Cx<T>]) -> Result<Cx<T>>,
{
    let n = z.len() as i64;
    let (p, q, t) = (par.p, par.q, par.t);
    let tn = ipow(t, n - 1);
    match *op {
        DiffOp::Dq { v: [v0, v1, v2] } => {
            let v3 = p / (tn * v0 * v1 * v2);
            let raw = dq_raw([v0, v1, v2, v3], f, z, par)?;
            let mut norm = Cx::<T>::one();
            for i in 1..=n {
                let ti = ipow(t, n - i);
                norm = norm * theta_multi(&[ti * v0 * v1, ti * v0 * v2, ti * v1 * v2], p)?;
            }
            Ok(raw / guard(norm, "D_q normalization")?)
        }
        DiffOp::Dminus { u0 } => dq_raw([u0, q * u0, p / u0, (tn * u0 * q).inv()], f, z, par),
        DiffOp::Dplus { v } => {
            let [v0, v1, v2, v3, v4] = v;
            let v5 = p * p * q / (tn * v0 * v1 * v2 * v3 * v4);
            let numer = [v1, v2, v3, v4, v5];
            let sum = signed_shift_sum(z, par, &numer, Some(v0), f)?;
            let mut pre = Cx::<T>::one();
            for i in 1..=n {
                let ti = ipow(t, n - i);
                let den = theta_multi(&[v2 * ti * v1, v3 * ti * v1, v4 * ti * v1, v5 * ti * v1], p)?;
                pre = pre * theta(par.pq() * ti * v1 / v0, p)? / guard(den, "D⁺ normalization")?;
            }
            Ok(pre * sum)
        }
    }
}

/// The eigenvalue product relating D⁻ R̃_{λ+1ⁿ} (shifted parameters) to R̃_λ.
pub fn dminus_eigenvalue<T: Real>(lam: &Partition, ps: &BiorthoParams<T>) -> Result<Cx<T>> {
    let par = &ps.base;
    let (p, q, t) = (par.p, par.q, par.t);
    let [t0, t1, t2, t3] = ps.t;
    let [u0, u1] = ps.u;
    let n = ps.n as i64;
    let mut acc = Cx::<T>::one();
    for i in 1..=n {
        let ti = ipow(t, n - i);
        let tmi = ti.inv();
        let tw = ipow(t, 2 - n - i);
        let li = lam.part(i as usize - 1) as i64;
        let num = theta_multi(
            &[
                ti * u0 * t0,
                ti * u0 * t1,
                ti * u0 * t2,
                ti * u0 * t3,
                q * u0 * tmi / t0,
                u0 * tmi / t0,
                tw * ipow(q, li - 1) / (u0 * u1),
                tmi * ipow(q, -li - 1),
            ],
            p,
        )?;
        let den = theta_multi(
            &[
                ti * t0 * t1 / q,
                ti * t0 * t2 / q,
                ti * t0 * t3 / q,
                tw * ipow(q, li) / (u1 * t0),
                u0 * ipow(q, -li) * tmi / t0,
            ],
            p,
        )?;
        acc = acc * num / guard(den, "D⁻ eigenvalue")?;
    }
    Ok(acc)
}
