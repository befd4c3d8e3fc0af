//! One-variable cases checked against closed products of theta Pochhammer
//! symbols, independent of the box-by-box and branching machinery.

use ellip_core::biorthogonal::{biortho_r, BiorthoParams};
use ellip_core::interpolation::interp_r;
use ellip_core::kernels::{theta_poch, EllipticParams};
use ellip_core::scalar::{cx, re, rel_err};
use ellip_core::{Partition, C64};

fn tp(xs: &[C64], par: &EllipticParams<f64>, k: usize) -> C64 {
    xs.iter().map(|&x| theta_poch(x, par.q, par.p, k).unwrap()).product()
}

fn rstar(k: usize, z: C64, a: C64, b: C64, par: &EllipticParams<f64>) -> C64 {
    let pq = par.pq();
    tp(&[a * z, a / z], par, k) / tp(&[pq * z / b, pq / (b * z)], par, k)
}

fn binom(l: usize, k: usize, a: C64, b: C64, par: &EllipticParams<f64>) -> C64 {
    let pq = par.pq();
    let ql = par.q.powi(l as i32);
    let d = tp(&[b.inv()], par, k) * tp(&[pq * a / b], par, 2 * k)
        / (tp(&[pq * a, pq], par, k) * tp(&[par.q.powi(k as i32) * a / b], par, k));
    d * tp(&[a * ql, ql.inv()], par, k) / tp(&[pq * a * ql / b, pq / (ql * b)], par, k)
}

fn base() -> EllipticParams<f64> {
    EllipticParams::new(cx(0.42, 0.31), cx(0.55, -0.27), re(0.04)).unwrap()
}

#[test]
fn interpolation_function_one_variable() {
    let par = base();
    let (a, b, z) = (cx(0.6, 0.3), cx(0.5, -0.4), cx(0.7, 0.4));
    for k in 0..4 {
        let lam = Partition::from_slice(&[k]);
        let v = interp_r(&lam, &[z], a, b, &par).unwrap();
        assert!(rel_err(v, rstar(k, z, a, b, &par)) < 1e-11, "k = {k}");
    }
}

#[test]
fn biorthogonal_function_one_variable() {
    let par = base();
    let t = [cx(0.5, 0.2), cx(0.6, -0.1), cx(0.45, 0.3), cx(0.7, 0.05)];
    let ps = BiorthoParams::new(1, t, cx(0.55, -0.25), par).unwrap();
    let [u0, u1] = ps.u;
    let pq = par.pq();
    let z = cx(-0.5, 0.6);
    for l in 0..4 {
        let mut sum = C64::new(0.0, 0.0);
        for k in 0..=l {
            let bs = [t[0] * t[1], t[0] * t[2], t[0] * t[3], t[0] * u1];
            let d0 = tp(&bs, &par, k) / tp(&bs.map(|x| pq * t[0] / (u0 * x)), &par, k);
            sum += binom(l, k, (u0 * u1).inv(), (t[0] * u1).inv(), &par) * rstar(k, z, t[0], u0, &par) / d0;
        }
        let v = biortho_r(&Partition::from_slice(&[l]), &[z], &ps).unwrap();
        assert!(rel_err(v, sum) < 1e-10, "l = {l}: {v} vs {sum}");
    }
}
