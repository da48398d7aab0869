//! Eigenspace-level spectral forms of PSD matrices.
//!
//! A [`SpectralForm`] groups the eigenvectors of a PSD matrix into levels of
//! distinct positive eigenvalues, each carrying an orthonormal basis of its
//! eigenspace. Everything downstream (subtraction, the measurement
//! construction, the overlap bounds) works with these explicit bases rather
//! than with projector matrices.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QsdError, Result};
use crate::matcore::{herm_eig, inner, kron_vec, vec_norm, ComplexMatrix, ZERO};

/// Relative gap (w.r.t. the largest eigenvalue) below which eigenvalues merge.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

const PSD_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-9;
const RANK_CUTOFF_FACTOR: f64 = 1e-12;

/// Residual norm below which a Gram–Schmidt candidate is treated as dependent.
pub const GS_DROP_TOL: f64 = 1e-10;

/// A subspace of ℂ^dim held as an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Complex64>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect();
        Self { ambient_dim, basis }
    }

    /// Wraps vectors that the caller guarantees are orthonormal.
    pub fn from_orthonormal(ambient_dim: usize, basis: Vec<Vec<Complex64>>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == ambient_dim));
        Self { ambient_dim, basis }
    }

    /// Orthonormal basis of span{vectors}, by modified Gram–Schmidt with one
    /// re-orthogonalization pass. Candidates whose residual norm falls below
    /// [`GS_DROP_TOL`] are dropped.
    pub fn span_of(ambient_dim: usize, vectors: &[Vec<Complex64>]) -> Self {
        let mut basis = Vec::new();
        gram_schmidt_extend(&mut basis, vectors);
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<Complex64>> {
        self.basis
    }

    /// Concatenation of bases. Only a valid subspace when the parts are
    /// mutually orthogonal.
    pub fn direct_sum(ambient_dim: usize, parts: &[Subspace]) -> Self {
        let basis = parts.iter().flat_map(|p| p.basis.iter().cloned()).collect();
        Self { ambient_dim, basis }
    }

    /// ‖B†B − I‖_F.
    pub fn orthonormality_residual(&self) -> f64 {
        let k = self.rank();
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                let g = inner(&self.basis[i], &self.basis[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (g - target).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Σ_b |⟨b|v⟩|² = ⟨v|P|v⟩.
    pub fn weight_of(&self, v: &[Complex64]) -> f64 {
        self.basis.iter().map(|b| inner(b, v).norm_sqr()).sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        projector(self)
    }
}

pub(crate) fn unit_vector(dim: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// Appends to `accumulated` an orthonormal basis for the part of
/// span{candidates} orthogonal to it; returns how many vectors were added.
pub(crate) fn gram_schmidt_extend(accumulated: &mut Vec<Vec<Complex64>>, candidates: &[Vec<Complex64>]) -> usize {
    let before = accumulated.len();
    for cand in candidates {
        let mut w = cand.clone();
        let norm0 = vec_norm(&w);
        if norm0 == 0.0 {
            continue;
        }
        for _pass in 0..2 {
            for q in accumulated.iter() {
                let proj = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let norm = vec_norm(&w);
        if norm < GS_DROP_TOL * norm0.max(1.0) {
            continue;
        }
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        accumulated.push(w);
    }
    accumulated.len() - before
}

/// ⟨a_i|b_j⟩ for every pair of basis vectors.
pub(crate) fn cross_gram(a: &Subspace, b: &Subspace) -> Vec<Vec<Complex64>> {
    a.basis.iter().map(|u| b.basis.iter().map(|v| inner(u, v)).collect()).collect()
}

/// tr(P_a P_b) = ‖B_a†B_b‖_F².
pub fn trace_overlap(a: &Subspace, b: &Subspace) -> f64 {
    let mut acc = 0.0;
    for u in &a.basis {
        for v in &b.basis {
            acc += inner(u, v).norm_sqr();
        }
    }
    acc
}

/// Largest singular value of B₁†B₂: the maximal |⟨v₁|v₂⟩| over unit vectors
/// v₁ ∈ S₁, v₂ ∈ S₂. Zero if either subspace is {0}.
pub fn overlap(s1: &Subspace, s2: &Subspace) -> f64 {
    assert_eq!(s1.ambient_dim, s2.ambient_dim, "overlap of subspaces in different spaces");
    if s1.is_zero() || s2.is_zero() {
        return 0.0;
    }
    // Work in the smaller of the two local dimensions.
    let (small, large) = if s1.rank() <= s2.rank() { (s1, s2) } else { (s2, s1) };
    let c = cross_gram(large, small); // rank(large) × rank(small)
    let k = small.rank();
    let mut m = ComplexMatrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let v: Complex64 = c.iter().map(|row| row[a].conj() * row[b]).sum();
            m[(a, b)] = v;
            m[(b, a)] = v.conj();
        }
    }
    let lmax = herm_eig(&m).expect("Gram matrix is Hermitian").max_eigenvalue();
    lmax.max(0.0).sqrt().min(1.0)
}

/// B·B†.
pub fn projector(s: &Subspace) -> ComplexMatrix {
    let n = s.ambient_dim;
    let mut p = ComplexMatrix::zeros(n);
    for b in &s.basis {
        for i in 0..n {
            if b[i] == ZERO {
                continue;
            }
            for j in 0..n {
                p[(i, j)] += b[i] * b[j].conj();
            }
        }
    }
    p
}

/// One eigenvalue of a [`SpectralForm`] and its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub eigenvalue: f64,
    pub basis: Subspace,
}

impl Level {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

/// A = Σ_k λ_k·Proj(S_k), λ strictly decreasing, λ_k > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralForm {
    pub dim: usize,
    pub levels: Vec<Level>,
    pub kernel_dim: usize,
}

impl SpectralForm {
    /// Number of distinct nonzero eigenvalues (T).
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.eigenvalue).collect()
    }

    pub fn max_eigenvalue(&self) -> Option<f64> {
        self.levels.first().map(|l| l.eigenvalue)
    }

    /// Smallest nonzero eigenvalue.
    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.levels.last().map(|l| l.eigenvalue)
    }

    pub fn trace(&self) -> f64 {
        self.levels.iter().map(|l| l.eigenvalue * l.rank() as f64).sum()
    }

    pub fn rank(&self) -> usize {
        self.levels.iter().map(Level::rank).sum()
    }

    /// Multiplies every eigenvalue by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        let levels =
            self.levels.iter().map(|l| Level { eigenvalue: l.eigenvalue * factor, basis: l.basis.clone() }).collect();
        Self { dim: self.dim, levels, kernel_dim: self.kernel_dim }
    }

    /// Σ_k λ_k·Proj(S_k) as a dense matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for l in &self.levels {
            out.add_assign_scaled(&projector(&l.basis), l.eigenvalue);
        }
        out
    }

    /// A^s by spectral calculus on the support (0^s := 0, so s = 0 gives the
    /// support projector).
    pub fn power(&self, s: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for l in &self.levels {
            out.add_assign_scaled(&projector(&l.basis), l.eigenvalue.powf(s));
        }
        out
    }

    /// ⟨v|A|v⟩ = Σ_k λ_k ‖B_k†v‖².
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        self.levels.iter().map(|l| l.eigenvalue * l.basis.weight_of(v)).sum()
    }

    pub fn support(&self) -> Subspace {
        let parts: Vec<Subspace> = self.levels.iter().map(|l| l.basis.clone()).collect();
        Subspace::direct_sum(self.dim, &parts)
    }
}

/// A_i = p_i·ω_i: a prior and a PSD matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedState {
    prior: f64,
    state: ComplexMatrix,
    normalized: bool,
}

impl WeightedState {
    /// Prior in (0, 1] and a density matrix (PSD, unit trace).
    pub fn new(prior: f64, state: ComplexMatrix) -> Result<Self> {
        if !(prior > 0.0 && prior <= 1.0) {
            return Err(QsdError::validation("PriorRange", format!("prior {prior} not in (0, 1]")));
        }
        validate_psd(&state)?;
        let tr = state.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QsdError::validation("TraceNotOne", format!("trace is {tr}")));
        }
        Ok(Self { prior, state, normalized: true })
    }

    /// Positive weight and an arbitrary PSD matrix.
    pub fn unnormalized(prior: f64, state: ComplexMatrix) -> Result<Self> {
        if !(prior > 0.0 && prior.is_finite()) {
            return Err(QsdError::validation("PriorRange", format!("prior {prior} must be positive")));
        }
        validate_psd(&state)?;
        Ok(Self { prior, state, normalized: false })
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn state(&self) -> &ComplexMatrix {
        &self.state
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    /// p·ω.
    pub fn weighted(&self) -> ComplexMatrix {
        self.state.scale(self.prior)
    }
}

fn validate_psd(m: &ComplexMatrix) -> Result<()> {
    let eig = herm_eig(m).map_err(|e| match e {
        QsdError::NonHermitian { residual } => {
            QsdError::validation("NotHermitian", format!("‖H − H†‖_F = {residual:e}"))
        }
        other => other,
    })?;
    let lmax = eig.max_eigenvalue();
    let lmin = eig.min_eigenvalue();
    if lmin < -PSD_TOL * lmax.max(1.0) {
        return Err(QsdError::validation("NotPSD", format!("minimum eigenvalue {lmin:e}")));
    }
    Ok(())
}

/// Groups the eigenvectors of a PSD matrix into levels of distinct eigenvalues.
///
/// Eigenvalues ≤ 10⁻¹²·dim·λ_max belong to the kernel. Consecutive eigenvalues
/// whose gap is ≤ `cluster_tol`·λ_max share a level whose eigenvalue is the
/// cluster mean.
pub fn spectral_decompose(a: &ComplexMatrix, cluster_tol: f64) -> Result<SpectralForm> {
    let dim = a.dim();
    let eig = herm_eig(a)?;
    let lmax = eig.max_eigenvalue();
    let rank_cutoff = RANK_CUTOFF_FACTOR * dim as f64 * lmax.max(0.0);
    let psd_floor = rank_cutoff.max(PSD_TOL * lmax.max(1.0));
    if eig.min_eigenvalue() < -psd_floor {
        return Err(QsdError::NotPsd { min_eigenvalue: eig.min_eigenvalue() });
    }

    let merge_gap = cluster_tol * lmax;
    let mut clusters: Vec<(Vec<f64>, Vec<Vec<Complex64>>)> = Vec::new();
    let mut prev: Option<f64> = None;
    for j in (0..dim).rev() {
        let lambda = eig.eigenvalues[j];
        if lambda <= rank_cutoff {
            break;
        }
        let vec = eig.eigenvector(j);
        match (prev, clusters.last_mut()) {
            (Some(p), Some(cluster)) if p - lambda <= merge_gap => {
                cluster.0.push(lambda);
                cluster.1.push(vec);
            }
            _ => clusters.push((vec![lambda], vec![vec])),
        }
        prev = Some(lambda);
    }

    let rank: usize = clusters.iter().map(|c| c.1.len()).sum();
    let levels = clusters
        .into_iter()
        .map(|(values, basis)| Level {
            eigenvalue: values.iter().sum::<f64>() / values.len() as f64,
            basis: Subspace::from_orthonormal(dim, basis),
        })
        .collect();
    Ok(SpectralForm { dim, levels, kernel_dim: dim - rank })
}

/// Spectral form of A^{⊗n}, assembled combinatorially from the levels of A.
///
/// Every product basis vector b_{k₁,a₁} ⊗ ⋯ ⊗ b_{kₙ,aₙ} is an eigenvector with
/// eigenvalue Π_t λ_{k_t}; vectors are grouped by type (the multiset of level
/// indices), and types whose products agree within `cluster_tol`·λ_max are
/// merged into one level.
pub fn tensor_power(s: &SpectralForm, n: usize, cap: usize, cluster_tol: f64) -> Result<SpectralForm> {
    assert!(n >= 1, "tensor power needs n >= 1");
    let exponent = u32::try_from(n).unwrap_or(u32::MAX);
    let dim = s.dim.saturating_pow(exponent);
    if dim > cap {
        return Err(QsdError::DimensionOverflow { dim, cap });
    }

    let t = s.num_levels();
    let flat: Vec<(usize, &Vec<Complex64>)> =
        s.levels.iter().enumerate().flat_map(|(k, l)| l.basis.basis().iter().map(move |b| (k, b))).collect();

    let mut by_type: BTreeMap<Vec<usize>, Vec<Vec<Complex64>>> = BTreeMap::new();
    if !flat.is_empty() {
        let mut counts = vec![0usize; t];
        collect_products(&flat, n, vec![Complex64::new(1.0, 0.0)], &mut counts, &mut by_type);
    }

    // Type eigenvalue Π_k λ_k^{c_k}, multiplied in a fixed order.
    let mut typed: Vec<(f64, Vec<Vec<Complex64>>)> = by_type
        .into_iter()
        .map(|(counts, vecs)| {
            let mut value = 1.0;
            for (k, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    value *= s.levels[k].eigenvalue;
                }
            }
            (value, vecs)
        })
        .collect();
    typed.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));

    let lmax = typed.first().map_or(0.0, |x| x.0);
    let merge_gap = cluster_tol * lmax;
    // (product eigenvalues with their multiplicities, eigenvectors) per merged level
    type Merged = (Vec<(f64, usize)>, Vec<Vec<Complex64>>);
    let mut merged: Vec<Merged> = Vec::new();
    let mut prev: Option<f64> = None;
    for (value, vecs) in typed {
        let weight = vecs.len();
        match (prev, merged.last_mut()) {
            (Some(p), Some(level)) if p - value <= merge_gap => {
                level.0.push((value, weight));
                level.1.extend(vecs);
            }
            _ => merged.push((vec![(value, weight)], vecs)),
        }
        prev = Some(value);
    }

    let rank: usize = merged.iter().map(|m| m.1.len()).sum();
    let levels = merged
        .into_iter()
        .map(|(values, basis)| {
            let total: usize = values.iter().map(|v| v.1).sum();
            let mean = values.iter().map(|&(v, w)| v * w as f64).sum::<f64>() / total as f64;
            Level { eigenvalue: mean, basis: Subspace::from_orthonormal(dim, basis) }
        })
        .collect();
    Ok(SpectralForm { dim, levels, kernel_dim: dim - rank })
}

fn collect_products(
    flat: &[(usize, &Vec<Complex64>)],
    remaining: usize,
    prefix: Vec<Complex64>,
    counts: &mut Vec<usize>,
    out: &mut BTreeMap<Vec<usize>, Vec<Vec<Complex64>>>,
) {
    if remaining == 0 {
        out.entry(counts.clone()).or_default().push(prefix);
        return;
    }
    for &(k, b) in flat {
        counts[k] += 1;
        collect_products(flat, remaining - 1, kron_vec(&prefix, b), counts, out);
        counts[k] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::tensor_power_dense;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus_state() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![c(0.5), c(0.5)], vec![c(0.5), c(0.5)]]).unwrap()
    }

    #[test]
    fn degenerate_spectrum_single_level() {
        let f = spectral_decompose(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(f.num_levels(), 1);
        assert_eq!(f.levels[0].rank(), 2);
        assert_abs_diff_eq!(f.levels[0].eigenvalue, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn two_levels_descending() {
        let f = spectral_decompose(&ComplexMatrix::from_real_diagonal(&[0.25, 0.75]), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(f.eigenvalues(), vec![0.75, 0.25]);
        assert_eq!(f.kernel_dim, 0);
    }

    #[test]
    fn pure_state_has_kernel() {
        let f = spectral_decompose(&plus_state(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(f.num_levels(), 1);
        assert_abs_diff_eq!(f.levels[0].eigenvalue, 1.0, epsilon = 1e-14);
        assert_eq!(f.levels[0].rank(), 1);
        assert_eq!(f.kernel_dim, 1);
    }

    #[test]
    fn not_psd_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
        assert!(matches!(spectral_decompose(&m, DEFAULT_CLUSTER_TOL), Err(QsdError::NotPsd { .. })));
    }

    #[test]
    fn zero_matrix_is_all_kernel() {
        let f = spectral_decompose(&ComplexMatrix::zeros(3), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(f.num_levels(), 0);
        assert_eq!(f.kernel_dim, 3);
    }

    #[test]
    fn tensor_power_of_pure_state() {
        let f = spectral_decompose(&plus_state(), DEFAULT_CLUSTER_TOL).unwrap();
        let p = tensor_power(&f, 3, 4096, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(p.num_levels(), 1);
        assert_eq!(p.levels[0].rank(), 1);
        assert_eq!(p.kernel_dim, 7);
    }

    #[test]
    fn tensor_power_qubit_types() {
        // enumerated by hand over the 8 product eigenvalues
        let f = spectral_decompose(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25]), DEFAULT_CLUSTER_TOL).unwrap();
        let p = tensor_power(&f, 3, 4096, DEFAULT_CLUSTER_TOL).unwrap();
        let expected = [(0.421875, 1), (0.140625, 3), (0.046875, 3), (0.015625, 1)];
        assert_eq!(p.num_levels(), 4);
        for (level, &(value, rank)) in p.levels.iter().zip(&expected) {
            assert_abs_diff_eq!(level.eigenvalue, value, epsilon = 1e-15);
            assert_eq!(level.rank(), rank);
        }
    }

    #[test]
    fn tensor_power_overflow() {
        let f = spectral_decompose(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25]), DEFAULT_CLUSTER_TOL).unwrap();
        assert!(matches!(tensor_power(&f, 13, 4096, DEFAULT_CLUSTER_TOL), Err(QsdError::DimensionOverflow { .. })));
    }

    #[test]
    fn colliding_products_merge() {
        // λ₁λ₃ = λ₂² for (0.5, 0.25, 0.125) up to normalization
        let diag = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        let f = spectral_decompose(&ComplexMatrix::from_real_diagonal(&diag), DEFAULT_CLUSTER_TOL).unwrap();
        let p = tensor_power(&f, 2, 4096, DEFAULT_CLUSTER_TOL).unwrap();
        // products 16,8,4,2,1 (/49): types {11},{12},{13,22},{23},{33}
        assert_eq!(p.num_levels(), 5);
        assert_eq!(p.levels.iter().map(Level::rank).collect::<Vec<_>>(), vec![1, 2, 3, 2, 1]);
        let dense = tensor_power_dense(&ComplexMatrix::from_real_diagonal(&diag), 2, 4096).unwrap();
        assert!(p.to_dense().sub(&dense).frobenius_norm() < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let e1 = Subspace::from_orthonormal(2, vec![unit_vector(2, 0)]);
        let e2 = Subspace::from_orthonormal(2, vec![unit_vector(2, 1)]);
        let s = 0.5f64.sqrt();
        let plus = Subspace::from_orthonormal(2, vec![vec![c(s), c(s)]]);
        assert_abs_diff_eq!(overlap(&e1, &e1), 1.0, epsilon = 1e-12);
        assert_eq!(overlap(&e1, &e2), 0.0);
        assert_abs_diff_eq!(overlap(&e1, &plus), s, epsilon = 1e-12);
        assert_eq!(overlap(&Subspace::zero(2), &e1), 0.0);
    }

    #[test]
    fn projector_examples() {
        assert_eq!(projector(&Subspace::zero(3)), ComplexMatrix::zeros(3));
        assert_eq!(projector(&Subspace::full(3)), ComplexMatrix::identity(3));
        let s = 0.5f64.sqrt();
        let p = projector(&Subspace::from_orthonormal(2, vec![vec![c(s), c(s)]]));
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(p[(i, j)].re, 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn weighted_state_validation() {
        assert!(WeightedState::new(0.5, plus_state()).is_ok());
        let err = WeightedState::new(0.5, ComplexMatrix::from_real_diagonal(&[1.2, -0.2])).unwrap_err();
        assert!(matches!(err, QsdError::Validation { ref invariant, .. } if invariant == "NotPSD"));
        let err = WeightedState::new(0.5, ComplexMatrix::from_real_diagonal(&[0.5, 0.4])).unwrap_err();
        assert!(matches!(err, QsdError::Validation { ref invariant, .. } if invariant == "TraceNotOne"));
        assert!(WeightedState::new(0.0, plus_state()).is_err());
        assert!(WeightedState::unnormalized(3.0, ComplexMatrix::from_real_diagonal(&[2.0, 0.0])).is_ok());
    }

    #[test]
    fn span_of_drops_dependent_vectors() {
        let v = vec![vec![c(1.0), c(1.0)], vec![c(2.0), c(2.0)], vec![c(1.0), c(0.0)]];
        let s = Subspace::span_of(2, &v);
        assert_eq!(s.rank(), 2);
        assert!(s.orthonormality_residual() < 1e-14);
    }
}
