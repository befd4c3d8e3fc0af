//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs without the test harness so the lines are always printed:
//! `cargo test -p ellip-core --test acceptance`.

use ellip_core::pastro::{pastro_gram, pastro_norm, PastroParams};
use ellip_core::scalar::rel_err;
use ellip_core::verify::{suite_cases, Case, Suite, VerifyConfig};
use ellip_core::{Partition, C64};
use std::time::Instant;

const SEED: u64 = 0;

struct Outcome {
    cases: usize,
    failures: Vec<String>,
    max_err: f64,
}

impl Outcome {
    fn new() -> Self {
        Outcome { cases: 0, failures: Vec::new(), max_err: 0.0 }
    }

    fn add(&mut self, c: &Case, tol: f64) {
        self.cases += 1;
        if c.err.is_finite() {
            self.max_err = self.max_err.max(c.err);
        }
        if !c.passes(tol) {
            self.failures.push(format!("{} err {:.3e}", c.id, c.err));
        }
    }

    fn check(&mut self, id: &str, err: f64, tol: f64) {
        self.cases += 1;
        if err.is_finite() {
            self.max_err = self.max_err.max(err);
        }
        if err.is_nan() || err > tol {
            self.failures.push(format!("{id} err {err:.3e}"));
        }
    }
}

fn cases(suite: Suite, trials: usize) -> Vec<Case> {
    let cfg = VerifyConfig { seed: SEED, trials: Some(trials), ..Default::default() };
    suite_cases(suite, &cfg).unwrap_or_else(|e| panic!("{suite} suite did not run: {e}"))
}

fn collect(out: &mut Outcome, suite: Suite, trials: usize, keep: impl Fn(&str) -> bool) {
    for c in cases(suite, trials).iter().filter(|c| keep(c.name())) {
        out.add(c, suite.default_tol());
    }
}

fn report(num: usize, title: &str, min_cases: usize, run: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    run(&mut out);
    let ok = out.failures.is_empty() && out.cases >= min_cases;
    println!(
        "{} {num:>2} {title}: {} cases, {} failures, max err {:.2e} ({:.1} s)",
        if ok { "PASS" } else { "FAIL" },
        out.cases,
        out.failures.len(),
        out.max_err,
        start.elapsed().as_secs_f64()
    );
    if out.cases < min_cases {
        println!("        expected at least {min_cases} cases");
    }
    for f in out.failures.iter().take(10) {
        println!("        {f}");
    }
    ok
}

fn pastro_gram_two_variables(out: &mut Outcome) {
    let c = |re, im| C64::new(re, im);
    let pp = PastroParams::new(2, c(0.25, 0.1), c(-0.2, 0.15), c(0.3, 0.2), c(0.35, -0.15)).expect("parameters");
    let lams: Vec<Partition> = [&[][..], &[1], &[2], &[1, 1]].iter().map(|p| Partition::from_slice(p)).collect();
    let gram = pastro_gram(&lams, &pp, 256).expect("quadrature");
    let norms: Vec<C64> = lams.iter().map(|l| pastro_norm(l, &pp).expect("norm")).collect();
    for (i, l) in lams.iter().enumerate() {
        for (j, k) in lams.iter().enumerate() {
            let id = format!("gram2:{l}{k}");
            if i == j {
                out.check(&id, rel_err(gram[i][j], norms[i]), 1e-4);
            } else {
                let scale = (norms[i].norm() * norms[j].norm()).sqrt();
                out.check(&id, gram[i][j].norm() / scale, 1e-4);
            }
        }
    }
}

fn main() {
    let binom = |id: &str| id.starts_with("binom:");
    let mut ok = Vec::new();

    ok.push(report(1, "kernel identities", 200, |o| collect(o, Suite::Kernels, 200, |_| true)));
    ok.push(report(2, "C and Delta shifts", 50, |o| collect(o, Suite::Csymbols, 50, |_| true)));
    ok.push(report(3, "interpolation core", 50, |o| collect(o, Suite::Interpolation, 50, |id| !binom(id))));
    ok.push(report(4, "binomial coefficients", 50, |o| collect(o, Suite::Interpolation, 50, binom)));
    ok.push(report(5, "Omega symmetries and closed form", 25, |o| collect(o, Suite::Omega, 25, |_| true)));
    ok.push(report(6, "biorthogonal functions and duality", 10, |o| {
        collect(o, Suite::Biortho, 3, |id| id.starts_with('R'));
        collect(o, Suite::Duality, 3, |_| true);
    }));
    ok.push(report(7, "discrete biorthogonality", 10, |o| collect(o, Suite::Biortho, 3, |id| id.starts_with("gram:"))));
    ok.push(report(8, "difference operators", 6, |o| {
        collect(o, Suite::Biortho, 3, |id| id.starts_with("Dq") || id.starts_with("D+") || id.starts_with("D-"))
    }));
    ok.push(report(9, "valuation calculus", 100, |o| {
        let all = cases(Suite::Limits, 17);
        let closed: Vec<&Case> = all.iter().filter(|c| !c.name().starts_with("four-f") && !c.name().starts_with("omega-limit")).collect();
        for c in &all {
            o.add(c, Suite::Limits.default_tol());
        }
        // Each closed-form probe contributes a val case and an lc case.
        if closed.len() < 2 * 50 {
            o.failures.push(format!("only {} closed-form probe cases", closed.len()));
        }
        if !all.iter().any(|c| c.name().starts_with("four-f-grid")) {
            o.failures.push("four-f grid check missing".into());
        }
        for sign in ["f>0", "f<0"] {
            if !all.iter().any(|c| c.name().contains(sign)) {
                o.failures.push(format!("no Omega-limit probe with {sign}"));
            }
        }
    }));
    ok.push(report(10, "degenerations", 20, |o| collect(o, Suite::Degenerations, 2, |_| true)));
    ok.push(report(11, "Pastro polynomials", 20, |o| {
        collect(o, Suite::Pastro, 3, |_| true);
        pastro_gram_two_variables(o);
    }));

    let failed: Vec<usize> = ok.iter().enumerate().filter(|(_, &k)| !k).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
}
