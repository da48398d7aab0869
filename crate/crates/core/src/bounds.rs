//! Closed-form bounds on the optimal discrimination error and exact oracles.
//!
//! All overlap-type quantities are built from the kernel
//!
//! ```text
//! Σ_{i<j} Σ_{k,ℓ} min{λ_ik, λ_jℓ} · tr Q_ik Q_jℓ
//! ```
//!
//! evaluated on weighted spectral forms (priors folded into the eigenvalues).

use serde::Serialize;

use crate::error::{QsdError, Result};
use crate::io::{serialize_ext, serialize_ext_matrix, serialize_opt_ext};
use crate::matcore::{herm_eig, trace_norm, ComplexMatrix};
use crate::measurement::{construct, error_probability, povm_error, validate_povm, weighted_forms, PovmResiduals};
use crate::spectra::{
    spectral_decompose, trace_overlap, Level, SpectralForm, Subspace, WeightedState, DEFAULT_CLUSTER_TOL,
};

/// Grid resolution for minimizing s ↦ tr A^s B^{1−s} on [0, 1].
pub const GRID_POINTS: usize = 1025;
/// Golden-section refinement stops once the bracket is narrower than this.
pub const GOLDEN_TOL: f64 = 1e-8;
/// Traces at or below this are treated as zero when taking −log.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

const DIAGONAL_TOL: f64 = 1e-10;
const DUAL_TOL: f64 = 1e-8;

/// Σ_{i<j} Σ_{k,ℓ} min{λ_ik, λ_jℓ}·‖B_ik†B_jℓ‖_F².
pub fn pairwise_overlap_sum(forms: &[SpectralForm]) -> f64 {
    let mut total = 0.0;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            total += pair_overlap_sum(&forms[i], &forms[j]);
        }
    }
    total
}

fn pair_overlap_sum(a: &SpectralForm, b: &SpectralForm) -> f64 {
    let mut acc = 0.0;
    for la in &a.levels {
        for lb in &b.levels {
            acc += la.eigenvalue.min(lb.eigenvalue) * trace_overlap(&la.basis, &lb.basis);
        }
    }
    acc
}

/// f(r, T) = 25(r−1)²T²/4 + 3, the constant obtained with ε = 2/(5(r−1)T).
pub fn theorem_constant(r: usize, t: usize) -> f64 {
    let x = ((r - 1) * t) as f64;
    25.0 * x * x / 4.0 + 3.0
}

/// 10(r−1)²T², the rounded constant that f(r, T) stays below.
pub fn rounded_constant(r: usize, t: usize) -> f64 {
    let x = ((r - 1) * t) as f64;
    10.0 * x * x
}

/// 1/ε² + (1−(r−1)Tε)/(1−2(r−1)Tε): the upper-bound constant for an arbitrary
/// admissible ε. Equals [`theorem_constant`] at the default ε.
pub fn error_constant(r: usize, t: usize, eps: f64) -> f64 {
    let x = (r - 1) as f64 * t as f64 * eps;
    1.0 / (eps * eps) + (1.0 - x) / (1.0 - 2.0 * x)
}

/// h(r, L) = 40(r−1)²L².
pub fn binned_constant(r: usize, l: usize) -> f64 {
    let x = ((r - 1) * l) as f64;
    40.0 * x * x
}

fn t_max(forms: &[SpectralForm]) -> usize {
    forms.iter().map(SpectralForm::num_levels).max().unwrap_or(0).max(1)
}

/// f(r, T)·overlap sum with T = max_i T_i.
pub fn one_shot_upper(forms: &[SpectralForm]) -> f64 {
    theorem_constant(forms.len(), t_max(forms)) * pairwise_overlap_sum(forms)
}

/// overlap sum / (2(r−1)).
pub fn one_shot_lower(forms: &[SpectralForm]) -> f64 {
    pairwise_overlap_sum(forms) / (2.0 * (forms.len() - 1) as f64)
}

/// A′ = Σ_m 2^m λ_min·Proj(⊕ levels in bin m), where bin m collects the
/// eigenvalues in [2^{m−1}λ_min, 2^m λ_min).
#[derive(Debug, Clone)]
pub struct BinnedState {
    pub original: SpectralForm,
    pub binned: SpectralForm,
    /// ⌊log₂(2λ_max/λ_min)⌋, the index of the top bin.
    pub levels_bound: usize,
}

fn bin_index(lambda: f64, lambda_min: f64) -> usize {
    let mut m = 1;
    let mut upper = 2.0 * lambda_min;
    while lambda >= upper {
        m += 1;
        upper *= 2.0;
    }
    m
}

pub fn bin_spectrum(form: &SpectralForm) -> Result<BinnedState> {
    let lambda_min = form
        .min_eigenvalue()
        .ok_or_else(|| QsdError::PreconditionViolated("binning needs a positive eigenvalue".into()))?;
    // levels are in decreasing order, so bins come out in decreasing order too
    let mut bins: Vec<(usize, Vec<Subspace>)> = Vec::new();
    for level in &form.levels {
        let m = bin_index(level.eigenvalue, lambda_min);
        match bins.last_mut() {
            Some((last, parts)) if *last == m => parts.push(level.basis.clone()),
            _ => bins.push((m, vec![level.basis.clone()])),
        }
    }
    let levels_bound = bins.first().map_or(0, |b| b.0);
    let levels = bins
        .into_iter()
        .map(|(m, parts)| Level {
            eigenvalue: 2f64.powi(m as i32) * lambda_min,
            basis: Subspace::direct_sum(form.dim, &parts),
        })
        .collect();
    let binned = SpectralForm { dim: form.dim, levels, kernel_dim: form.kernel_dim };
    Ok(BinnedState { original: form.clone(), binned, levels_bound })
}

/// L = max_i ⌊log₂(2λ_max(A_i)/λ_min(A_i))⌋ over states with nonzero support.
pub fn binning_level_bound(forms: &[SpectralForm]) -> usize {
    forms.iter().filter_map(|f| bin_spectrum(f).ok()).map(|b| b.levels_bound).max().unwrap_or(1).max(1)
}

/// h(r, L)·overlap sum of the original levels.
pub fn one_shot_upper_binned(forms: &[SpectralForm]) -> f64 {
    binned_constant(forms.len(), binning_level_bound(forms)) * pairwise_overlap_sum(forms)
}

/// s ↦ tr A^s B^{1−s} = Σ_{k,ℓ} λ_k^s μ_ℓ^{1−s} tr Q_k R_ℓ, with powers taken on
/// the supports.
#[derive(Debug, Clone)]
pub struct PowerTrace {
    terms: Vec<(f64, f64, f64)>,
}

impl PowerTrace {
    pub fn new(a: &SpectralForm, b: &SpectralForm) -> Self {
        let mut terms = Vec::new();
        for la in &a.levels {
            for lb in &b.levels {
                let w = trace_overlap(&la.basis, &lb.basis);
                if w > 0.0 {
                    terms.push((la.eigenvalue, lb.eigenvalue, w));
                }
            }
        }
        Self { terms }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms.iter().map(|&(l, m, w)| l.powf(s) * m.powf(1.0 - s) * w).sum()
    }

    /// Grid search followed by golden-section refinement; returns (s*, value).
    pub fn minimize(&self) -> (f64, f64) {
        minimize_unit_interval(|s| self.eval(s))
    }
}

/// Minimizes f over [0, 1]: samples [`GRID_POINTS`] points, then refines the
/// bracket around the best sample by golden-section search.
pub fn minimize_unit_interval(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let last = GRID_POINTS - 1;
    let mut best = (0.0, f(0.0));
    let mut best_idx = 0;
    for j in 1..GRID_POINTS {
        let s = j as f64 / last as f64;
        let v = f(s);
        if v < best.1 {
            best = (s, v);
            best_idx = j;
        }
    }
    let mut lo = best_idx.saturating_sub(1) as f64 / last as f64;
    let mut hi = (best_idx + 1).min(last) as f64 / last as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    for (s, v) in [(x1, f1), (x2, f2), (mid, fm)] {
        if v < best.1 {
            best = (s, v);
        }
    }
    best
}

/// min_{0≤s≤1} tr A₁^s A₂^{1−s}.
pub fn audenaert_bound(a1: &SpectralForm, a2: &SpectralForm) -> f64 {
    PowerTrace::new(a1, a2).minimize().1
}

/// max_s −log tr ρ₁^s ρ₂^{1−s}; +∞ for orthogonal supports.
pub fn chernoff_distance(rho1: &SpectralForm, rho2: &SpectralForm) -> f64 {
    let (_, min_trace) = PowerTrace::new(rho1, rho2).minimize();
    if min_trace <= UNDERFLOW_FLOOR {
        f64::INFINITY
    } else {
        (-min_trace.ln()).max(0.0)
    }
}

/// Symmetric matrix of pairwise Chernoff distances, zero diagonal.
pub fn chernoff_matrix(states: &[SpectralForm]) -> Vec<Vec<f64>> {
    let r = states.len();
    let mut out = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let c = chernoff_distance(&states[i], &states[j]);
            out[i][j] = c;
            out[j][i] = c;
        }
    }
    out
}

/// min over pairs i ≠ j of C(ρ_i, ρ_j).
pub fn multiple_chernoff(states: &[SpectralForm]) -> f64 {
    let m = chernoff_matrix(states);
    let mut best = f64::INFINITY;
    for (i, row) in m.iter().enumerate() {
        for &c in &row[i + 1..] {
            best = best.min(c);
        }
    }
    best
}

/// (tr(A₁+A₂) − ‖A₁−A₂‖₁)/2, the optimal error for two hypotheses.
pub fn helstrom_error(a1: &ComplexMatrix, a2: &ComplexMatrix) -> Result<f64> {
    let total = a1.trace().re + a2.trace().re;
    Ok(0.5 * (total - trace_norm(&a1.sub(a2))?))
}

pub fn is_diagonal(m: &ComplexMatrix) -> bool {
    m.off_diagonal_norm() <= DIAGONAL_TOL
}

/// tr ΣA_i − Σ_x max_i (A_i)_xx for simultaneously diagonal A_i.
pub fn diagonal_oracle(mats: &[ComplexMatrix]) -> Result<f64> {
    for (index, m) in mats.iter().enumerate() {
        let offdiag = m.off_diagonal_norm();
        if offdiag > DIAGONAL_TOL {
            return Err(QsdError::NotCommuting { index, offdiag });
        }
    }
    let dim = mats.first().map_or(0, ComplexMatrix::dim);
    let total: f64 = mats.iter().map(|m| m.trace().re).sum();
    let best: f64 = (0..dim).map(|x| mats.iter().map(|m| m[(x, x)].re).fold(f64::NEG_INFINITY, f64::max)).sum();
    Ok(total - best)
}

/// M_i = S^{−1/2} A_i S^{−1/2} with S = Σ A_j (inverse on the support of S).
/// The kernel of S goes to the last outcome so the POVM is complete.
pub fn pretty_good_measurement(mats: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let dim = mats.first().map_or(0, ComplexMatrix::dim);
    let mut s = ComplexMatrix::zeros(dim);
    for m in mats {
        s = s.add(m);
    }
    let eig = herm_eig(&s)?;
    let cutoff = 1e-12 * dim as f64 * eig.max_eigenvalue().max(0.0);
    let inv_sqrt = eig.reconstruct_with(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let kernel = eig.reconstruct_with(|l| if l > cutoff { 0.0 } else { 1.0 });
    let mut povm: Vec<ComplexMatrix> = mats.iter().map(|a| inv_sqrt.matmul(a).matmul(&inv_sqrt)).collect();
    if let Some(last) = povm.last_mut() {
        *last = last.add(&kernel);
    }
    Ok(povm)
}

pub fn pgm_error(mats: &[ComplexMatrix]) -> Result<f64> {
    Ok(povm_error(mats, &pretty_good_measurement(mats)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualCertificate {
    pub feasible: bool,
    /// tr ΣA_i − tr X, a lower bound on the optimal error when feasible.
    pub lower_bound: Option<f64>,
    /// min_i λ_min(X − A_i).
    pub min_slack: f64,
}

/// Checks X ⪰ A_i for all i.
pub fn dual_feasibility(x: &ComplexMatrix, mats: &[ComplexMatrix]) -> Result<DualCertificate> {
    let mut min_slack = f64::INFINITY;
    for a in mats {
        if a.dim() != x.dim() {
            return Err(QsdError::DimensionMismatch { expected: x.dim(), found: a.dim() });
        }
        min_slack = min_slack.min(herm_eig(&x.sub(a))?.min_eigenvalue());
    }
    let feasible = min_slack >= -DUAL_TOL;
    let total: f64 = mats.iter().map(|m| m.trace().re).sum();
    Ok(DualCertificate { feasible, lower_bound: feasible.then(|| total - x.trace().re), min_slack })
}

/// Everything `qsd bounds` reports for one ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub r: usize,
    pub dim: usize,
    pub t_max: usize,
    pub l_max: usize,
    pub eps: f64,
    pub overlap_sum: f64,
    pub theorem_constant: f64,
    pub binned_constant: f64,
    pub upper_thm2: f64,
    pub upper_binned: f64,
    pub lower_eq4: f64,
    pub measurement_error: Option<f64>,
    /// Error of the same construction run on the binned states A′_i.
    pub binned_measurement_error: Option<f64>,
    pub helstrom: Option<f64>,
    pub audenaert: Option<f64>,
    pub diagonal_oracle: Option<f64>,
    pub pgm_error: f64,
    #[serde(serialize_with = "serialize_ext_matrix")]
    pub chernoff_matrix: Vec<Vec<f64>>,
    #[serde(serialize_with = "serialize_ext")]
    pub multiple_chernoff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement_residuals: Option<PovmResiduals>,
    #[serde(serialize_with = "serialize_opt_ext", skip_serializing_if = "Option::is_none")]
    pub dual_lower_bound: Option<f64>,
}

impl BoundReport {
    /// The tighter of the two closed-form upper bounds.
    pub fn best_upper(&self) -> f64 {
        self.upper_thm2.min(self.upper_binned)
    }
}

/// Computes the full report for a validated ensemble.
pub fn bound_report(ensemble: &[WeightedState]) -> Result<BoundReport> {
    let r = ensemble.len();
    if r < 2 {
        return Err(QsdError::TooFewStates { min: 2, found: r });
    }
    let dim = ensemble[0].dim();
    let mats: Vec<ComplexMatrix> = ensemble.iter().map(WeightedState::weighted).collect();
    let forms = weighted_forms(ensemble)?;
    let states: Vec<SpectralForm> =
        ensemble.iter().map(|w| spectral_decompose(w.state(), DEFAULT_CLUSTER_TOL)).collect::<Result<_>>()?;

    let t = t_max(&forms);
    let l = binning_level_bound(&forms);
    let overlap_sum = pairwise_overlap_sum(&forms);

    let construction = construct(&forms, None)?;
    let measurement_error = error_probability(&mats, &construction.measurement);
    let residuals = validate_povm(&construction.measurement.projectors())?;

    let binned: Vec<SpectralForm> = forms
        .iter()
        .map(|f| if f.num_levels() == 0 { Ok(f.clone()) } else { bin_spectrum(f).map(|b| b.binned) })
        .collect::<Result<_>>()?;
    let binned_measurement = construct(&binned, None)?.measurement;
    let binned_measurement_error = error_probability(&mats, &binned_measurement);

    let (helstrom, audenaert) = if r == 2 {
        (Some(helstrom_error(&mats[0], &mats[1])?), Some(audenaert_bound(&forms[0], &forms[1])))
    } else {
        (None, None)
    };
    let diagonal = if mats.iter().all(is_diagonal) { Some(diagonal_oracle(&mats)?) } else { None };
    let dual_lower_bound = if diagonal.is_some() {
        let maxima: Vec<f64> =
            (0..dim).map(|x| mats.iter().map(|m| m[(x, x)].re).fold(f64::NEG_INFINITY, f64::max)).collect();
        dual_feasibility(&ComplexMatrix::from_real_diagonal(&maxima), &mats)?.lower_bound
    } else {
        None
    };

    let chernoff = chernoff_matrix(&states);
    let multiple = multiple_chernoff(&states);

    Ok(BoundReport {
        r,
        dim,
        t_max: t,
        l_max: l,
        eps: construction.measurement.eps,
        overlap_sum,
        theorem_constant: theorem_constant(r, t),
        binned_constant: binned_constant(r, l),
        upper_thm2: theorem_constant(r, t) * overlap_sum,
        upper_binned: binned_constant(r, l) * overlap_sum,
        lower_eq4: overlap_sum / (2.0 * (r - 1) as f64),
        measurement_error: Some(measurement_error),
        binned_measurement_error: Some(binned_measurement_error),
        helstrom,
        audenaert,
        diagonal_oracle: diagonal,
        pgm_error: pgm_error(&mats)?,
        chernoff_matrix: chernoff,
        multiple_chernoff: multiple,
        measurement_residuals: Some(residuals),
        dual_lower_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn zero_state() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
    }

    fn plus_state() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![c(0.5), c(0.5)], vec![c(0.5), c(0.5)]]).unwrap()
    }

    fn form(m: &ComplexMatrix) -> SpectralForm {
        spectral_decompose(m, DEFAULT_CLUSTER_TOL).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(theorem_constant(2, 2), 28.0);
        assert_eq!(binned_constant(2, 1), 40.0);
        for r in 2..8 {
            for t in 1..20 {
                assert!(theorem_constant(r, t) < rounded_constant(r, t));
                let eps = crate::measurement::default_epsilon(r, t);
                assert_abs_diff_eq!(
                    error_constant(r, t, eps),
                    theorem_constant(r, t),
                    epsilon = 1e-9 * theorem_constant(r, t)
                );
            }
        }
    }

    #[test]
    fn orthogonal_supports_give_zero() {
        let forms = [
            form(&ComplexMatrix::from_real_diagonal(&[0.5, 0.0])),
            form(&ComplexMatrix::from_real_diagonal(&[0.0, 0.5])),
        ];
        assert_eq!(pairwise_overlap_sum(&forms), 0.0);
        assert_eq!(one_shot_upper(&forms), 0.0);
        assert_eq!(one_shot_lower(&forms), 0.0);
        assert_eq!(one_shot_upper_binned(&forms), 0.0);
        assert_eq!(audenaert_bound(&forms[0], &forms[1]), 0.0);
    }

    #[test]
    fn identical_states_overlap_sum() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.6, 0.3, 0.1]);
        let p = 0.3;
        let forms = [form(&rho.scale(p)), form(&rho.scale(1.0 - p))];
        assert_abs_diff_eq!(pairwise_overlap_sum(&forms), p, epsilon = 1e-12);
    }

    #[test]
    fn identical_qubit_states_lower_bound() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        let forms = [form(&rho.scale(0.5)), form(&rho.scale(0.5))];
        assert_abs_diff_eq!(one_shot_lower(&forms), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(audenaert_bound(&forms[0], &forms[1]), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn chernoff_examples() {
        let z = form(&zero_state());
        let p = form(&plus_state());
        let one = form(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0]));
        assert_abs_diff_eq!(chernoff_distance(&z, &z), 0.0, epsilon = 1e-12);
        assert_eq!(chernoff_distance(&z, &one), f64::INFINITY);
        assert_abs_diff_eq!(chernoff_distance(&z, &p), std::f64::consts::LN_2, epsilon = 1e-12);
        assert_eq!(multiple_chernoff(&[z.clone(), z.clone(), p.clone()]), 0.0);
        assert_eq!(multiple_chernoff(&[z, one]), f64::INFINITY);
    }

    #[test]
    fn helstrom_examples() {
        let h = helstrom_error(&zero_state().scale(0.5), &plus_state().scale(0.5)).unwrap();
        assert_abs_diff_eq!(h, (1.0 - 0.5f64.sqrt()) / 2.0, epsilon = 1e-12);
        let one = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert_abs_diff_eq!(helstrom_error(&zero_state().scale(0.3), &one.scale(0.7)).unwrap(), 0.0, epsilon = 1e-14);
        let half = plus_state().scale(0.5);
        assert_abs_diff_eq!(helstrom_error(&half, &half).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_oracle_examples() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.2, 0.8]);
        assert_abs_diff_eq!(diagonal_oracle(&[rho.scale(0.3), rho.scale(0.7)]).unwrap(), 0.3, epsilon = 1e-15);
        let a = ComplexMatrix::from_real_diagonal(&[0.5, 0.0]);
        let b = ComplexMatrix::from_real_diagonal(&[0.0, 0.5]);
        assert_eq!(diagonal_oracle(&[a, b]).unwrap(), 0.0);
        assert!(matches!(diagonal_oracle(&[plus_state(), zero_state()]), Err(QsdError::NotCommuting { index: 0, .. })));
    }

    #[test]
    fn dual_feasibility_examples() {
        let a1 = zero_state().scale(0.5);
        let a2 = plus_state().scale(0.5);
        let sum = a1.add(&a2);
        let cert = dual_feasibility(&sum, &[a1.clone(), a2.clone()]).unwrap();
        assert!(cert.feasible);
        assert_abs_diff_eq!(cert.lower_bound.unwrap(), 0.0, epsilon = 1e-15);
        let cert = dual_feasibility(&a1, &[a1.clone(), a2]).unwrap();
        assert!(!cert.feasible);
        assert!(cert.lower_bound.is_none());
    }

    #[test]
    fn pgm_examples() {
        let a = ComplexMatrix::from_real_diagonal(&[0.5, 0.0]);
        let b = ComplexMatrix::from_real_diagonal(&[0.0, 0.5]);
        assert_abs_diff_eq!(pgm_error(&[a, b]).unwrap(), 0.0, epsilon = 1e-14);
        let a1 = zero_state().scale(0.5);
        let a2 = plus_state().scale(0.5);
        let povm = pretty_good_measurement(&[a1.clone(), a2.clone()]).unwrap();
        assert!(validate_povm(&povm).unwrap().is_valid_povm(1e-10));
        assert!(pgm_error(&[a1.clone(), a2.clone()]).unwrap() >= helstrom_error(&a1, &a2).unwrap() - 1e-12);
    }

    #[test]
    fn binning_by_hand() {
        // λ = {4, 2, 1}·λ_min → bins 3, 2, 1 and L = ⌊log₂ 8⌋ = 3
        let f = form(&ComplexMatrix::from_real_diagonal(&[0.4, 0.2, 0.1]));
        let b = bin_spectrum(&f).unwrap();
        assert_eq!(b.levels_bound, 3);
        assert_eq!(b.binned.num_levels(), 3);
        let got = b.binned.eigenvalues();
        for (g, e) in got.iter().zip([0.8, 0.4, 0.2]) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn flat_spectrum_single_bin() {
        let f = form(&ComplexMatrix::from_real_diagonal(&[0.25; 4]));
        let b = bin_spectrum(&f).unwrap();
        assert_eq!(b.levels_bound, 1);
        assert_eq!(b.binned.num_levels(), 1);
        assert_abs_diff_eq!(b.binned.levels[0].eigenvalue, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn minimizer_finds_interior_minimum() {
        let (s, v) = minimize_unit_interval(|s| (s - 0.3141592).powi(2) + 1.0);
        assert_abs_diff_eq!(s, 0.3141592, epsilon = 1e-7);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }
}
