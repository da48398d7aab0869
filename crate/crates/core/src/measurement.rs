//! Construction of the projective measurement for r hypotheses.
//!
//! 1. All eigenvalues λ_{ik} of all A_i are put in one non-increasing order g.
//! 2. Each eigenspace S_{g(m)} is ε-subtracted by every earlier eigenspace
//!    S_{g(0)}, …, S_{g(m−1)} (left-associative fold), giving S̃_{g(m)}.
//! 3. The S̃ are orthogonalized in order by Gram–Schmidt, giving Ŝ_{g(m)}.
//!
//! Π_i = Σ_k Proj(Ŝ_{ik}); the leftover I − Σ_i Π_i is assigned to the last
//! hypothesis.

use std::cmp::Ordering;

use num_complex::Complex64;

use serde::Serialize;

use crate::error::{QsdError, Result};
use crate::matcore::{herm_eig, ComplexMatrix};
use crate::spectra::{gram_schmidt_extend, projector, SpectralForm, Subspace, WeightedState, DEFAULT_CLUSTER_TOL};
use crate::subtraction::eps_subtract;

/// Anything we can take ⟨v|A|v⟩ and tr A of.
pub trait Observable {
    fn expectation(&self, v: &[Complex64]) -> f64;
    fn total_trace(&self) -> f64;
}

impl Observable for ComplexMatrix {
    fn expectation(&self, v: &[Complex64]) -> f64 {
        self.quadratic_form(v)
    }

    fn total_trace(&self) -> f64 {
        self.trace().re
    }
}

impl Observable for SpectralForm {
    fn expectation(&self, v: &[Complex64]) -> f64 {
        SpectralForm::expectation(self, v)
    }

    fn total_trace(&self) -> f64 {
        self.trace()
    }
}

/// Position m ↦ (state i, level k), both zero-based. The sentinel g(0) of the
/// construction is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingMap {
    pub entries: Vec<(usize, usize)>,
    pub eigenvalues: Vec<f64>,
}

impl OrderingMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Sorts every (i, k) by λ_{ik} descending; ties go to the smaller (i, k).
pub fn order_eigenvalues(forms: &[SpectralForm]) -> OrderingMap {
    let mut all: Vec<(f64, usize, usize)> = forms
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.levels.iter().enumerate().map(move |(k, l)| (l.eigenvalue, i, k)))
        .collect();
    all.sort_by(|a, b| match b.0.partial_cmp(&a.0).expect("finite eigenvalues") {
        Ordering::Equal => (a.1, a.2).cmp(&(b.1, b.2)),
        other => other,
    });
    OrderingMap {
        entries: all.iter().map(|&(_, i, k)| (i, k)).collect(),
        eigenvalues: all.iter().map(|&(l, _, _)| l).collect(),
    }
}

/// The reduced eigenspaces S̃_{g(m)} and the approximations Ã_i.
#[derive(Debug, Clone)]
pub struct DugEnsemble {
    pub dim: usize,
    pub num_states: usize,
    pub ordering: OrderingMap,
    /// S̃_{g(m)}, aligned with `ordering`.
    pub reduced: Vec<Subspace>,
}

impl DugEnsemble {
    /// Ã_i = Σ_k λ_{ik}·Proj(S̃_{ik}).
    pub fn approx_state(&self, i: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (m, &(state, _)) in self.ordering.entries.iter().enumerate() {
            if state == i {
                out.add_assign_scaled(&projector(&self.reduced[m]), self.ordering.eigenvalues[m]);
            }
        }
        out
    }

    /// Σ_i tr(A_i − Ã_i) = Σ_m λ_{g(m)}·(rank S_{g(m)} − rank S̃_{g(m)}).
    pub fn trace_deficit(&self, forms: &[SpectralForm]) -> f64 {
        self.ordering
            .entries
            .iter()
            .zip(&self.reduced)
            .zip(&self.ordering.eigenvalues)
            .map(|((&(i, k), red), &l)| l * (forms[i].levels[k].rank() - red.rank()) as f64)
            .sum()
    }

    /// Σ_i tr Ã_i(I − Π_i) for a measurement built from this ensemble.
    pub fn approx_error(&self, measurement: &ProjectiveMeasurement) -> f64 {
        let mut total = 0.0;
        for (m, &(i, _)) in self.ordering.entries.iter().enumerate() {
            let lambda = self.ordering.eigenvalues[m];
            let captured: f64 = self.reduced[m]
                .basis()
                .iter()
                .map(|v| measurement.outcome_spaces[i].iter().map(|s| s.weight_of(v)).sum::<f64>())
                .sum();
            total += lambda * (self.reduced[m].rank() as f64 - captured);
        }
        total
    }
}

/// Step 1: S̃_{g(m)} = S_{g(m)} ⊖_ε S_{g(1)} ⊖_ε ⋯ ⊖_ε S_{g(m−1)}.
pub fn dig_eigenspaces(forms: &[SpectralForm], ordering: &OrderingMap, eps: f64) -> Result<DugEnsemble> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(QsdError::InvalidEpsilon(eps));
    }
    let dim = forms.first().map_or(0, |f| f.dim);
    let originals: Vec<&Subspace> = ordering.entries.iter().map(|&(i, k)| &forms[i].levels[k].basis).collect();
    let mut reduced = Vec::with_capacity(originals.len());
    for (m, &current) in originals.iter().enumerate() {
        let mut s = current.clone();
        for &earlier in &originals[..m] {
            if s.is_zero() {
                break;
            }
            s = eps_subtract(&s, earlier, eps)?.reduced;
        }
        reduced.push(s);
    }
    Ok(DugEnsemble { dim, num_states: forms.len(), ordering: ordering.clone(), reduced })
}

/// Step 2: Ŝ_{g(m)} is the orthogonal complement of S̃_{g(1)}+⋯+S̃_{g(m−1)}
/// inside S̃_{g(1)}+⋯+S̃_{g(m)}.
pub fn orthogonalize(dug: &DugEnsemble) -> Vec<Subspace> {
    let mut accumulated: Vec<Vec<Complex64>> = Vec::new();
    dug.reduced
        .iter()
        .map(|s| {
            let start = accumulated.len();
            gram_schmidt_extend(&mut accumulated, s.basis());
            Subspace::from_orthonormal(dug.dim, accumulated[start..].to_vec())
        })
        .collect()
}

/// Π_1, …, Π_r held as subspaces; the residual I − ΣΠ_i belongs to outcome r.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    pub dim: usize,
    pub eps: f64,
    /// Ŝ_{ik} for each hypothesis i, in level order k.
    pub outcome_spaces: Vec<Vec<Subspace>>,
}

impl ProjectiveMeasurement {
    pub fn num_outcomes(&self) -> usize {
        self.outcome_spaces.len()
    }

    /// Orthonormal basis of the range of Π_i (residual excluded).
    pub fn outcome_basis(&self, i: usize) -> Subspace {
        Subspace::direct_sum(self.dim, &self.outcome_spaces[i])
    }

    pub fn outcome_rank(&self, i: usize) -> usize {
        self.outcome_spaces[i].iter().map(Subspace::rank).sum()
    }

    /// Π_1, …, Π_r before the residual is folded in.
    pub fn raw_projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.num_outcomes()).map(|i| projector(&self.outcome_basis(i))).collect()
    }

    /// Π_{r+1} = I − Σ_i Π_i.
    pub fn residual_projector(&self) -> ComplexMatrix {
        let mut res = ComplexMatrix::identity(self.dim);
        for p in self.raw_projectors() {
            res = res.sub(&p);
        }
        res
    }

    /// {Π_1, …, Π_{r−1}, Π_r + Π_{r+1}}.
    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        let mut ps = self.raw_projectors();
        let r = ps.len();
        let mut last = ComplexMatrix::identity(self.dim);
        for p in &ps[..r - 1] {
            last = last.sub(p);
        }
        ps[r - 1] = last;
        ps
    }
}

/// ε = 2/(5(r−1)T).
pub fn default_epsilon(r: usize, t: usize) -> f64 {
    2.0 / (5.0 * (r - 1) as f64 * t.max(1) as f64)
}

/// Everything produced along the way to the measurement.
#[derive(Debug, Clone)]
pub struct Construction {
    pub t_max: usize,
    pub ordering: OrderingMap,
    pub dug: DugEnsemble,
    /// Ŝ_{g(m)}, aligned with `ordering`.
    pub orthogonal: Vec<Subspace>,
    pub measurement: ProjectiveMeasurement,
}

/// Runs the three steps on weighted spectral forms (priors already folded in).
///
/// Without `eps` the default 2/(5(r−1)T) is used. A supplied `eps` must
/// satisfy (r−1)·T·ε < 1/2.
pub fn construct(forms: &[SpectralForm], eps: Option<f64>) -> Result<Construction> {
    let r = forms.len();
    if r < 2 {
        return Err(QsdError::TooFewStates { min: 2, found: r });
    }
    let dim = forms[0].dim;
    if let Some(f) = forms.iter().find(|f| f.dim != dim) {
        return Err(QsdError::DimensionMismatch { expected: dim, found: f.dim });
    }
    let t_max = forms.iter().map(SpectralForm::num_levels).max().unwrap_or(0).max(1);
    let eps = match eps {
        None => default_epsilon(r, t_max),
        Some(e) => {
            if !(e > 0.0 && e < 1.0) {
                return Err(QsdError::InvalidEpsilon(e));
            }
            let product = (r - 1) as f64 * t_max as f64 * e;
            if product >= 0.5 {
                return Err(QsdError::EpsilonTooLarge { eps: e, r, t: t_max, product });
            }
            e
        }
    };

    let ordering = order_eigenvalues(forms);
    let dug = dig_eigenspaces(forms, &ordering, eps)?;
    let orthogonal = orthogonalize(&dug);

    let mut outcome_spaces: Vec<Vec<Subspace>> =
        forms.iter().map(|f| vec![Subspace::zero(dim); f.num_levels()]).collect();
    for (&(i, k), s) in ordering.entries.iter().zip(&orthogonal) {
        outcome_spaces[i][k] = s.clone();
    }
    let measurement = ProjectiveMeasurement { dim, eps, outcome_spaces };
    Ok(Construction { t_max, ordering, dug, orthogonal, measurement })
}

/// Spectral forms of p_i·ω_i.
pub fn weighted_forms(ensemble: &[WeightedState]) -> Result<Vec<SpectralForm>> {
    ensemble.iter().map(|w| crate::spectra::spectral_decompose(&w.weighted(), DEFAULT_CLUSTER_TOL)).collect()
}

pub fn build_measurement(ensemble: &[WeightedState], eps: Option<f64>) -> Result<ProjectiveMeasurement> {
    let forms = weighted_forms(ensemble)?;
    Ok(construct(&forms, eps)?.measurement)
}

/// Σ_i tr A_i(I − M_i) for the constructed measurement, where the last outcome
/// is M_r = I − Σ_{j<r} Π_j.
pub fn error_probability<O: Observable>(ensemble: &[O], m: &ProjectiveMeasurement) -> f64 {
    let r = ensemble.len();
    assert_eq!(r, m.num_outcomes(), "ensemble and measurement disagree on r");
    let last = &ensemble[r - 1];
    let mut err = 0.0;
    for (a, spaces) in ensemble[..r - 1].iter().zip(&m.outcome_spaces) {
        let mut captured = 0.0;
        let mut leaked = 0.0;
        for s in spaces {
            for v in s.basis() {
                captured += a.expectation(v);
                leaked += last.expectation(v);
            }
        }
        err += a.total_trace() - captured + leaked;
    }
    err
}

/// Σ_i tr A_i(I − M_i) for an arbitrary POVM.
pub fn povm_error(ensemble: &[ComplexMatrix], povm: &[ComplexMatrix]) -> f64 {
    assert_eq!(ensemble.len(), povm.len(), "ensemble and POVM disagree on r");
    ensemble.iter().zip(povm).map(|(a, m)| a.trace().re - a.trace_product(m).re).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PovmResiduals {
    /// ‖Σ M_i − I‖_F
    pub completeness: f64,
    /// max_{i≠j} ‖M_i M_j‖_F
    pub max_cross: f64,
    /// min over i of λ_min(M_i)
    pub min_eigenvalue: f64,
    /// max_i ‖M_i² − M_i‖_F
    pub idempotency: f64,
}

impl PovmResiduals {
    pub fn is_valid_povm(&self, tol: f64) -> bool {
        self.completeness <= tol && self.min_eigenvalue >= -tol
    }

    pub fn is_projective(&self, tol: f64) -> bool {
        self.is_valid_povm(tol) && self.max_cross <= tol && self.idempotency <= tol
    }
}

pub fn validate_povm(povm: &[ComplexMatrix]) -> Result<PovmResiduals> {
    let dim = povm.first().map_or(0, ComplexMatrix::dim);
    let mut sum = ComplexMatrix::zeros(dim);
    let mut min_eigenvalue = f64::INFINITY;
    let mut idempotency: f64 = 0.0;
    for m in povm {
        sum = sum.add(m);
        min_eigenvalue = min_eigenvalue.min(herm_eig(m)?.min_eigenvalue());
        idempotency = idempotency.max(m.matmul(m).sub(m).frobenius_norm());
    }
    let mut max_cross: f64 = 0.0;
    for i in 0..povm.len() {
        for j in 0..povm.len() {
            if i != j {
                max_cross = max_cross.max(povm[i].matmul(&povm[j]).frobenius_norm());
            }
        }
    }
    Ok(PovmResiduals {
        completeness: sum.sub(&ComplexMatrix::identity(dim)).frobenius_norm(),
        max_cross,
        min_eigenvalue,
        idempotency,
    })
}
