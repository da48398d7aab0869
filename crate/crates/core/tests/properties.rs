use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use qsd_core::bounds::{
    audenaert_bound, chernoff_distance, helstrom_error, one_shot_lower, one_shot_upper, pairwise_overlap_sum,
    PowerTrace, GRID_POINTS,
};
use qsd_core::exponent::state_forms;
use qsd_core::io::{ensemble_to_json, parse_ensemble};
use qsd_core::matcore::{herm_eig, tensor_power_dense, tensor_product, ComplexMatrix};
use qsd_core::measurement::{construct, error_probability, validate_povm, weighted_forms};
use qsd_core::random::{conjugate, Sampler};
use qsd_core::spectra::{
    overlap, spectral_decompose, tensor_power, Level, SpectralForm, WeightedState, DEFAULT_CLUSTER_TOL,
};
use qsd_core::Complex64;

fn weighted_mats(ens: &[WeightedState]) -> Vec<ComplexMatrix> {
    ens.iter().map(WeightedState::weighted).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn herm_eig_residuals(seed in any::<u64>(), dim in 2usize..=32) {
        let h = Sampler::new(seed).hermitian(dim);
        let e = herm_eig(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(e.reconstruct_with(|x| x).sub(&h).frobenius_norm() <= 1e-10 * scale);
        let gram = e.eigenvectors.adjoint().matmul(&e.eigenvectors);
        prop_assert!(gram.sub(&ComplexMatrix::identity(dim)).frobenius_norm() <= 1e-10 * dim as f64);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn herm_eig_deterministic(seed in any::<u64>(), dim in 2usize..=12) {
        let h = Sampler::new(seed).hermitian(dim);
        prop_assert_eq!(herm_eig(&h).unwrap(), herm_eig(&h).unwrap());
    }

    #[test]
    fn tensor_product_associative(seed in any::<u64>(), da in 1usize..=3, db in 1usize..=3, dc in 1usize..=3) {
        let mut rng = Sampler::new(seed);
        // dyadic entries: every product is exact, so both groupings agree bit for bit
        let mut dyadic = |d: usize| {
            let rows = (0..d)
                .map(|_| (0..d).map(|_| Complex64::new(rng.int(0, 16) as f64 / 8.0 - 1.0, rng.int(0, 16) as f64 / 8.0 - 1.0)).collect())
                .collect();
            ComplexMatrix::from_rows(rows).unwrap()
        };
        let (a, b, c) = (dyadic(da), dyadic(db), dyadic(dc));
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        // general entries: the groupings differ only by rounding
        let (a, b, c) = (rng.hermitian(da), rng.hermitian(db), rng.hermitian(dc));
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((x - y).norm() <= 8.0 * f64::EPSILON * x.norm());
        }
    }

    #[test]
    fn spectral_form_reconstructs(seed in any::<u64>(), dim in 1usize..=8) {
        let a = Sampler::new(seed).wide_psd(dim);
        let form = spectral_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert!(form.to_dense().sub(&a).frobenius_norm() <= 1e-8);
        prop_assert!(form.eigenvalues().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn tensor_power_matches_dense(seed in any::<u64>(), dim in 2usize..=4, n in 1usize..=3) {
        let mut rng = Sampler::new(seed);
        let rank = rng.int(1, dim);
        let rho = rng.density_matrix(dim, rank);
        let form = spectral_decompose(&rho, DEFAULT_CLUSTER_TOL).unwrap();
        let power = tensor_power(&form, n, 64, DEFAULT_CLUSTER_TOL).unwrap();
        let dense = tensor_power_dense(&rho, n, 64).unwrap();
        prop_assert!(power.to_dense().sub(&dense).frobenius_norm() <= 1e-8);
    }

    #[test]
    fn overlap_symmetric(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = Sampler::new(seed);
        let (k1, k2) = (rng.int(1, dim), rng.int(1, dim));
        let (s1, s2) = (rng.subspace(dim, k1), rng.subspace(dim, k2));
        let (a, b) = (overlap(&s1, &s2), overlap(&s2, &s1));
        prop_assert!((a - b).abs() <= 1e-10);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn sandwich_and_intermediate_bounds(seed in any::<u64>(), r in 2usize..=4, dim in 2usize..=4) {
        let ens = Sampler::new(seed).ensemble(r, dim);
        let mats = weighted_mats(&ens);
        let forms = weighted_forms(&ens).unwrap();
        let c = construct(&forms, None).unwrap();
        let p_e = error_probability(&mats, &c.measurement);
        let sum = pairwise_overlap_sum(&forms);
        prop_assert!(one_shot_lower(&forms) <= p_e + 1e-9);
        prop_assert!(p_e <= one_shot_upper(&forms) + 1e-9);

        // Σ_i tr Ã_i (I − Π_i) against its own prefactor
        let x = (r - 1) as f64 * c.t_max as f64 * c.measurement.eps;
        let second = c.dug.approx_error(&c.measurement);
        prop_assert!(second <= (1.0 - x) / (1.0 - 2.0 * x) * sum + 1e-9);
        // Σ_i tr (A_i − Ã_i) against 1/ε²
        let eps = c.measurement.eps;
        prop_assert!(c.dug.trace_deficit(&forms) <= sum / (eps * eps) + 1e-9);

        let res = validate_povm(&c.measurement.projectors()).unwrap();
        prop_assert!(res.is_projective(1e-8), "{:?}", res);

        // the residual outcome is orthogonal to every kept eigenspace
        let residual = c.measurement.residual_projector();
        for spaces in &c.measurement.outcome_spaces {
            for s in spaces {
                for v in s.basis() {
                    let leak: f64 = residual.mul_vec(v).iter().map(|z| z.norm_sqr()).sum();
                    prop_assert!(leak.sqrt() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn projectors_ignore_basis_phases(seed in any::<u64>(), r in 2usize..=3, dim in 2usize..=4) {
        let mut rng = Sampler::new(seed);
        let ens = rng.ensemble(r, dim);
        let forms = weighted_forms(&ens).unwrap();
        let rephased: Vec<SpectralForm> = forms
            .iter()
            .map(|f| SpectralForm {
                levels: f
                    .levels
                    .iter()
                    .map(|l| Level { eigenvalue: l.eigenvalue, basis: rng.rephase(&l.basis) })
                    .collect(),
                ..f.clone()
            })
            .collect();
        let p = construct(&forms, None).unwrap().measurement.projectors();
        let q = construct(&rephased, None).unwrap().measurement.projectors();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!(a.sub(b).frobenius_norm() <= 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_invariance(seed in any::<u64>(), dim in 2usize..=4) {
        let mut rng = Sampler::new(seed);
        let ens = rng.ensemble(2, dim);
        let u = rng.unitary(dim);
        let moved: Vec<WeightedState> = ens
            .iter()
            .map(|w| WeightedState::new(w.prior(), conjugate(&u, w.state())).unwrap())
            .collect();
        let (f, g) = (weighted_forms(&ens).unwrap(), weighted_forms(&moved).unwrap());
        let (sf, sg) = (state_forms(&ens).unwrap(), state_forms(&moved).unwrap());
        let (m, n) = (weighted_mats(&ens), weighted_mats(&moved));
        let pairs = [
            (pairwise_overlap_sum(&f), pairwise_overlap_sum(&g)),
            (one_shot_upper(&f), one_shot_upper(&g)),
            (one_shot_lower(&f), one_shot_lower(&g)),
            (helstrom_error(&m[0], &m[1]).unwrap(), helstrom_error(&n[0], &n[1]).unwrap()),
            (chernoff_distance(&sf[0], &sf[1]), chernoff_distance(&sg[0], &sg[1])),
        ];
        for (a, b) in pairs {
            prop_assert!(a == b || (a - b).abs() <= 1e-8, "{} vs {}", a, b);
        }
    }

    #[test]
    fn chernoff_additive_over_copies(seed in any::<u64>(), n in 2usize..=4) {
        let ens = Sampler::new(seed).ensemble(2, 2);
        let base = state_forms(&ens).unwrap();
        let one = chernoff_distance(&base[0], &base[1]);
        let powers: Vec<SpectralForm> =
            base.iter().map(|b| tensor_power(b, n, 64, DEFAULT_CLUSTER_TOL).unwrap()).collect();
        let many = chernoff_distance(&powers[0], &powers[1]);
        let expected = n as f64 * one;
        prop_assert!(
            (many - expected).abs() <= 1e-6 * expected.abs() + 1e-12,
            "{} vs {}", many, expected
        );
    }

    #[test]
    fn power_trace_minimum_below_grid(seed in any::<u64>(), dim in 2usize..=4) {
        let ens = Sampler::new(seed).ensemble(2, dim);
        let forms = weighted_forms(&ens).unwrap();
        let pt = PowerTrace::new(&forms[0], &forms[1]);
        let (_, best) = pt.minimize();
        for j in 0..GRID_POINTS {
            prop_assert!(best <= pt.eval(j as f64 / (GRID_POINTS - 1) as f64));
        }
        prop_assert!(pairwise_overlap_sum(&forms) <= audenaert_bound(&forms[0], &forms[1]) + 1e-9);
    }

    #[test]
    fn ensemble_json_round_trip(seed in any::<u64>(), r in 2usize..=4, dim in 1usize..=4) {
        let ens = Sampler::new(seed).ensemble(r, dim);
        let back = parse_ensemble(&ensemble_to_json(&ens), false).unwrap();
        for (a, b) in ens.iter().zip(&back) {
            prop_assert_eq!(a.prior(), b.prior());
            prop_assert!(a.state().sub(b.state()).frobenius_norm() <= 1e-15);
        }
    }
}

#[test]
fn identical_inputs_identical_reports() {
    let ens = Sampler::new(3).ensemble(3, 3);
    let a = qsd_core::bound_report(&ens).unwrap();
    let b = qsd_core::bound_report(&ens).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_abs_diff_eq!(a.lower_eq4 * 2.0 * 2.0, a.overlap_sum, epsilon = 1e-15);
}
