//! Seeded property suites behind `qsd selftest`.
//!
//! Each suite draws random instances, checks one family of inequalities and
//! records the smallest margin (bound − value) it saw. The rendered report
//! contains no timings, so a fixed seed always produces the same bytes.

use std::fmt::Write as _;

use serde_json::json;

use crate::bounds::{audenaert_bound, bin_spectrum, one_shot_lower, one_shot_upper, pgm_error};
use crate::error::QsdError;
use crate::io::ensemble_to_json;
use crate::matcore::{herm_eig, vec_norm, ComplexMatrix};
use crate::measurement::{construct, error_probability, validate_povm, weighted_forms};
use crate::random::Sampler;
use crate::spectra::{
    overlap, projector, spectral_decompose, trace_overlap, Subspace, WeightedState, DEFAULT_CLUSTER_TOL,
};
use crate::subtraction::{check_lemma2, check_lemma3, eps_subtract, min_eigenvalue};

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub instances: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub counterexample: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self { name, instances: 0, violations: 0, worst_margin: f64::INFINITY, counterexample: None }
    }

    /// Records one check; a negative margin is a violation.
    fn check(&mut self, margin: f64, counterexample: impl FnOnce() -> String) {
        self.worst_margin = self.worst_margin.min(margin);
        if margin < 0.0 || margin.is_nan() {
            self.violations += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(counterexample());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qsd selftest seed={}", self.seed);
        for s in &self.suites {
            let status = if s.passed() { "pass" } else { "FAIL" };
            let margin = if s.worst_margin.is_finite() { format!("{:.6e}", s.worst_margin) } else { "inf".into() };
            let _ = writeln!(
                out,
                "{:<22} {status} instances={} violations={} worst_margin={margin}",
                s.name, s.instances, s.violations
            );
            if let Some(ce) = &s.counterexample {
                let _ = writeln!(out, "counterexample {}: {ce}", s.name);
            }
        }
        let _ = writeln!(out, "overall {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

fn basis_json(s: &Subspace) -> serde_json::Value {
    json!(s.basis().iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Largest ‖(I − P)v‖ over the basis of `sub`, P the projector onto `outer`.
fn containment_residual(outer: &Subspace, sub: &Subspace) -> f64 {
    let p = projector(outer);
    sub.basis()
        .iter()
        .map(|v| {
            let pv = p.mul_vec(v);
            vec_norm(&v.iter().zip(&pv).map(|(a, b)| a - b).collect::<Vec<_>>())
        })
        .fold(0.0, f64::max)
}

fn lemma1_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("lemma1_subtraction");
    for _ in 0..count {
        let dim = rng.int(2, 6);
        let (k1, k2) = (rng.int(1, dim), rng.int(1, dim));
        let s1 = rng.subspace(dim, k1);
        let s2 = rng.subspace(dim, k2);
        let eps = rng.uniform(0.05, 1.0);
        let ce = || json!({"s1": basis_json(&s1), "s2": basis_json(&s2), "eps": eps}).to_string();
        res.instances += 1;
        let Ok(out) = eps_subtract(&s1, &s2, eps) else {
            res.check(-1.0, ce);
            continue;
        };
        res.check(1e-8 - containment_residual(&s1, &out.reduced), ce);
        let order_gap = min_eigenvalue(&projector(&s1).sub(&projector(&out.reduced))).unwrap_or(f64::NEG_INFINITY);
        res.check(order_gap + 1e-8, ce);
        res.check(eps + 1e-8 - overlap(&out.reduced, &s2), ce);
        res.check(trace_overlap(&s1, &s2) / (eps * eps) + 1e-8 - out.removed_rank as f64, ce);
        let bigger = eps + rng.uniform(0.0, 1.0 - eps);
        if let Ok(out2) = eps_subtract(&s1, &s2, bigger) {
            res.check(out.removed_rank as f64 - out2.removed_rank as f64, ce);
        }
    }
    res
}

fn lemma2_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("lemma2_bounded_overlap");
    let dim = 8;
    for _ in 0..count {
        let v_ranks: Vec<usize> = (0..rng.int(1, 3)).map(|_| rng.int(1, 2)).collect();
        let w_ranks: Vec<usize> = (0..rng.int(1, 3)).map(|_| rng.int(1, 2)).collect();
        let v = rng.orthogonal_parts(dim, &v_ranks);
        let w = rng.orthogonal_parts(dim, &w_ranks);
        let mut delta: f64 = 0.0;
        for a in &v {
            for b in &w {
                delta = delta.max(overlap(a, b));
            }
        }
        let ce = || {
            json!({
                "v": v.iter().map(basis_json).collect::<Vec<_>>(),
                "w": w.iter().map(basis_json).collect::<Vec<_>>(),
                "delta": delta,
            })
            .to_string()
        };
        res.instances += 1;
        match check_lemma2(&v, &w, delta) {
            Ok(o) => res.check(((v.len() * w.len()) as f64).sqrt() * delta + 1e-8 - o, ce),
            Err(_) => res.check(-1.0, ce),
        }
    }
    res
}

fn lemma3_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("lemma3_projector_bound");
    let dim = 6;
    for _ in 0..count {
        let r = rng.int(2, 4);
        let limit = 1.0 / (2.0 * (r - 1) as f64);
        let mut noise = rng.uniform(0.01, 0.4);
        let (subs, delta) = loop {
            let subs = rng.near_orthogonal_lines(r, dim, noise);
            let mut delta: f64 = 0.0;
            for i in 0..r {
                for j in i + 1..r {
                    delta = delta.max(overlap(&subs[i], &subs[j]));
                }
            }
            if delta < limit {
                break (subs, delta);
            }
            noise *= 0.5;
        };
        let ce = || json!({"subspaces": subs.iter().map(basis_json).collect::<Vec<_>>(), "delta": delta}).to_string();
        res.instances += 1;
        match check_lemma3(&subs, delta).and_then(|d| min_eigenvalue(&d)) {
            Ok(m) => res.check(m + 1e-8, ce),
            Err(_) => res.check(-1.0, ce),
        }
    }
    res
}

fn eq6_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("overlap_vs_audenaert");
    for _ in 0..count {
        let dim = rng.int(2, 3);
        let ens = rng.ensemble(2, dim);
        let ce = || ensemble_to_json(&ens);
        res.instances += 1;
        match weighted_forms(&ens) {
            Ok(forms) => {
                let lhs = crate::bounds::pairwise_overlap_sum(&forms);
                res.check(audenaert_bound(&forms[0], &forms[1]) + 1e-9 - lhs, ce);
            }
            Err(_) => res.check(-1.0, ce),
        }
    }
    res
}

fn binning_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("spectrum_binning");
    for _ in 0..count {
        let dim = rng.int(2, 6);
        let a = rng.wide_psd(dim);
        let ce = || {
            json!({"matrix": a.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>()}).to_string()
        };
        res.instances += 1;
        let Ok(form) = spectral_decompose(&a, DEFAULT_CLUSTER_TOL) else {
            res.check(-1.0, ce);
            continue;
        };
        let Ok(b) = bin_spectrum(&form) else {
            res.check(-1.0, ce);
            continue;
        };
        let a_dense = form.to_dense();
        let a_prime = b.binned.to_dense();
        let lo = min_eigenvalue(&a_prime.sub(&a_dense)).unwrap_or(f64::NEG_INFINITY);
        let hi = min_eigenvalue(&a_dense.scale(2.0).sub(&a_prime)).unwrap_or(f64::NEG_INFINITY);
        let comm = a_dense.matmul(&a_prime).sub(&a_prime.matmul(&a_dense)).frobenius_norm();
        res.check(lo + 1e-8, ce);
        res.check(hi + 1e-8, ce);
        res.check(1e-8 - comm, ce);
        res.check(b.levels_bound as f64 - b.binned.num_levels() as f64, ce);
        let (lmax, lmin) = (form.max_eigenvalue().unwrap(), form.min_eigenvalue().unwrap());
        let expected = (2.0 * lmax / lmin).log2().floor() as usize;
        res.check(if expected == b.levels_bound { 0.0 } else { -1.0 }, ce);
    }
    res
}

fn sandwich_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("one_shot_sandwich");
    for _ in 0..count {
        let r = rng.int(2, 4);
        let dim = rng.int(2, 4);
        let ens = rng.ensemble(r, dim);
        let ce = || ensemble_to_json(&ens);
        res.instances += 1;
        let mats: Vec<ComplexMatrix> = ens.iter().map(WeightedState::weighted).collect();
        let outcome = weighted_forms(&ens).and_then(|forms| {
            let c = construct(&forms, None)?;
            let p_e = error_probability(&mats, &c.measurement);
            let pgm = pgm_error(&mats)?;
            let povm = validate_povm(&c.measurement.projectors())?;
            Ok((one_shot_lower(&forms), one_shot_upper(&forms), p_e, pgm, povm))
        });
        match outcome {
            Ok((lower, upper, p_e, pgm, povm)) => {
                res.check(p_e.min(pgm) + 1e-9 - lower, ce);
                res.check(upper + 1e-9 - p_e, ce);
                res.check(1e-8 - povm.completeness.max(povm.max_cross).max(povm.idempotency), ce);
                res.check(povm.min_eigenvalue + 1e-8, ce);
            }
            Err(_) => res.check(-1.0, ce),
        }
    }
    res
}

fn guard_suite() -> SuiteResult {
    let mut res = SuiteResult::new("epsilon_guard");
    let states: Vec<WeightedState> = [[0.7, 0.3, 0.0], [0.0, 0.6, 0.4], [0.5, 0.0, 0.5]]
        .iter()
        .map(|d| WeightedState::new(1.0 / 3.0, ComplexMatrix::from_real_diagonal(d)).expect("valid state"))
        .collect();
    res.instances += 1;
    let outcome = weighted_forms(&states).and_then(|f| construct(&f, Some(0.9)));
    let ok = matches!(outcome, Err(QsdError::EpsilonTooLarge { r: 3, t: 2, .. }));
    res.check(if ok { 0.0 } else { -1.0 }, || ensemble_to_json(&states));
    res
}

fn eigensolver_suite(rng: &mut Sampler, count: usize) -> SuiteResult {
    let mut res = SuiteResult::new("hermitian_eigensolver");
    for _ in 0..count {
        let dim = rng.int(2, 12);
        let h = rng.hermitian(dim);
        let ce = || json!({"dim": dim}).to_string();
        res.instances += 1;
        match herm_eig(&h) {
            Ok(e) => {
                let scale = h.frobenius_norm().max(1.0);
                let rec = e.reconstruct_with(|x| x).sub(&h).frobenius_norm();
                let orth = e
                    .eigenvectors
                    .adjoint()
                    .matmul(&e.eigenvectors)
                    .sub(&ComplexMatrix::identity(dim))
                    .frobenius_norm();
                res.check(1e-10 * scale - rec, ce);
                res.check(1e-10 * dim as f64 - orth, ce);
            }
            Err(_) => res.check(-1.0, ce),
        }
    }
    res
}

/// Runs every suite from one seed.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = Sampler::new(seed);
    let suites = vec![
        eigensolver_suite(&mut rng, 100),
        lemma1_suite(&mut rng, 1000),
        lemma2_suite(&mut rng, 1000),
        lemma3_suite(&mut rng, 1000),
        eq6_suite(&mut rng, 500),
        binning_suite(&mut rng, 200),
        sandwich_suite(&mut rng, 200),
        guard_suite(),
    ];
    SelftestReport { seed, suites }
}
