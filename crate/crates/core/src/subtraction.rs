//! ε-subtraction of subspaces and checkable forms of the three subspace
//! lemmas the measurement construction relies on.

use num_complex::Complex64;

use crate::error::{QsdError, Result};
use crate::matcore::{herm_eig, ComplexMatrix};
use crate::spectra::{cross_gram, gram_schmidt_extend, overlap, projector, Subspace};

/// Eigenvalues of B₁†P₂B₁ at or below this count as zero.
pub const PROJECTOR_RANK_CUTOFF: f64 = 1e-12;

/// Eigenvalues within this distance of ε² are removed.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SubtractionResult {
    pub reduced: Subspace,
    pub removed_rank: usize,
    /// Eigenvalues of P₁P₂P₁ (on S₁) whose eigenvectors were removed.
    pub eigenvalues_removed: Vec<f64>,
}

/// S₁ ⊖_ε S₂: removes from S₁ every eigenvector of P₁P₂P₁ whose eigenvalue is
/// ≥ ε² (and nonzero). The eigenproblem is solved on S₁'s own coordinates,
/// i.e. for the rank(S₁)×rank(S₁) matrix B₁†P₂B₁.
pub fn eps_subtract(s1: &Subspace, s2: &Subspace, eps: f64) -> Result<SubtractionResult> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(QsdError::InvalidEpsilon(eps));
    }
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(QsdError::DimensionMismatch { expected: s1.ambient_dim(), found: s2.ambient_dim() });
    }
    let unchanged = || SubtractionResult { reduced: s1.clone(), removed_rank: 0, eigenvalues_removed: Vec::new() };
    if s1.is_zero() || s2.is_zero() {
        return Ok(unchanged());
    }

    let k = s1.rank();
    let c = cross_gram(s2, s1); // rank(S₂) × rank(S₁), entries ⟨b₂|b₁⟩
    let mut local = ComplexMatrix::zeros(k);
    let mut any_nonzero = false;
    for a in 0..k {
        for b in a..k {
            let v: Complex64 = c.iter().map(|row| row[a].conj() * row[b]).sum();
            any_nonzero |= v.norm() > 0.0;
            local[(a, b)] = v;
            local[(b, a)] = v.conj();
        }
    }
    if !any_nonzero {
        return Ok(unchanged());
    }

    let cutoff = PROJECTOR_RANK_CUTOFF * k as f64;
    let eps2 = eps * eps;
    let threshold = if eps2 > cutoff { (eps2 - BOUNDARY_SLACK).max(cutoff) } else { cutoff };

    let eig = herm_eig(&local)?;
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= threshold {
            removed.push(lambda);
        } else {
            let coeffs = eig.eigenvector(j);
            let mut v = vec![Complex64::new(0.0, 0.0); s1.ambient_dim()];
            for (basis_vec, &coef) in s1.basis().iter().zip(&coeffs) {
                for (vi, bi) in v.iter_mut().zip(basis_vec) {
                    *vi += coef * bi;
                }
            }
            kept.push(v);
        }
    }
    Ok(SubtractionResult {
        reduced: Subspace::from_orthonormal(s1.ambient_dim(), kept),
        removed_rank: removed.len(),
        eigenvalues_removed: removed,
    })
}

fn max_pairwise_overlap(a: &[Subspace], b: &[Subspace]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in a {
        for y in b {
            worst = worst.max(overlap(x, y));
        }
    }
    worst
}

fn check_mutually_orthogonal(parts: &[Subspace], what: &str) -> Result<()> {
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let o = overlap(&parts[i], &parts[j]);
            if o > 1e-8 {
                return Err(QsdError::PreconditionViolated(format!(
                    "{what} parts {i} and {j} are not orthogonal (overlap {o:e})"
                )));
            }
        }
    }
    Ok(())
}

/// Overlap of V = ⊕V_parts and W = ⊕W_parts, whose part-wise overlaps are
/// all ≤ δ. The caller compares the result with √(T₁T₂)·δ.
pub fn check_lemma2(v_parts: &[Subspace], w_parts: &[Subspace], delta: f64) -> Result<f64> {
    let dim = v_parts.iter().chain(w_parts).map(Subspace::ambient_dim).next().unwrap_or(0);
    check_mutually_orthogonal(v_parts, "V")?;
    check_mutually_orthogonal(w_parts, "W")?;
    let worst = max_pairwise_overlap(v_parts, w_parts);
    if worst > delta + 1e-10 {
        return Err(QsdError::PreconditionViolated(format!("part overlap {worst} exceeds δ = {delta}")));
    }
    let v = Subspace::direct_sum(dim, v_parts);
    let w = Subspace::direct_sum(dim, w_parts);
    Ok(overlap(&v, &w))
}

/// (1−(r−1)δ)/(1−2(r−1)δ).
pub fn projector_bound_factor(r: usize, delta: f64) -> f64 {
    let rm1 = r.saturating_sub(1) as f64;
    (1.0 - rm1 * delta) / (1.0 - 2.0 * rm1 * delta)
}

/// D = factor·Σ Proj(S_i) − Proj(S₁+⋯+S_r). The caller checks D ⪰ 0.
pub fn check_lemma3(subspaces: &[Subspace], delta: f64) -> Result<ComplexMatrix> {
    let r = subspaces.len();
    if r == 0 {
        return Err(QsdError::TooFewStates { min: 1, found: 0 });
    }
    if r >= 2 && delta >= 1.0 / (2.0 * (r - 1) as f64) {
        return Err(QsdError::DeltaTooLarge { delta, r });
    }
    for i in 0..r {
        for j in i + 1..r {
            let o = overlap(&subspaces[i], &subspaces[j]);
            if o > delta + 1e-10 {
                return Err(QsdError::PreconditionViolated(format!("subspaces {i} and {j} overlap {o} > δ = {delta}")));
            }
        }
    }
    let dim = subspaces[0].ambient_dim();
    let factor = projector_bound_factor(r, delta);
    let mut d = ComplexMatrix::zeros(dim);
    let mut sum_basis = Vec::new();
    for s in subspaces {
        d.add_assign_scaled(&projector(s), factor);
        gram_schmidt_extend(&mut sum_basis, s.basis());
    }
    let p = projector(&Subspace::from_orthonormal(dim, sum_basis));
    Ok(d.sub(&p))
}

/// Smallest eigenvalue of a Hermitian matrix, used for the ⪰ 0 checks.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(h)?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::unit_vector;
    use approx::assert_abs_diff_eq;

    fn span(dim: usize, vecs: Vec<Vec<f64>>) -> Subspace {
        let v: Vec<Vec<Complex64>> =
            vecs.into_iter().map(|x| x.into_iter().map(|r| Complex64::new(r, 0.0)).collect()).collect();
        Subspace::span_of(dim, &v)
    }

    #[test]
    fn subtracting_zero_is_identity() {
        let s1 = span(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]]);
        let r = eps_subtract(&s1, &Subspace::zero(3), 0.3).unwrap();
        assert_eq!(r.reduced, s1);
        assert_eq!(r.removed_rank, 0);
    }

    #[test]
    fn subtracting_self_empties() {
        let s = span(2, vec![vec![1., 0.]]);
        let r = eps_subtract(&s, &s, 0.5).unwrap();
        assert!(r.reduced.is_zero());
        assert_eq!(r.removed_rank, 1);
        assert_abs_diff_eq!(r.eigenvalues_removed[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn small_overlap_kept() {
        // P₁P₂P₁ restricted to span{e₁} is cos²θ = 0.36 < 0.49
        let s1 = span(2, vec![vec![1., 0.]]);
        let s2 = span(2, vec![vec![0.6, 0.8]]);
        let r = eps_subtract(&s1, &s2, 0.7).unwrap();
        assert_eq!(r.removed_rank, 0);
        assert_eq!(r.reduced.rank(), 1);
        let r = eps_subtract(&s1, &s2, 0.5).unwrap();
        assert_eq!(r.removed_rank, 1);
    }

    #[test]
    fn boundary_eigenvalue_is_removed() {
        let s1 = span(2, vec![vec![1., 0.]]);
        let s2 = span(2, vec![vec![0.6, 0.8]]);
        let r = eps_subtract(&s1, &s2, 0.6).unwrap();
        assert_eq!(r.removed_rank, 1);
    }

    #[test]
    fn zero_eps_keeps_kernel_only() {
        let s1 = span(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]]);
        let s2 = span(3, vec![vec![1., 0., 1.]]);
        let r = eps_subtract(&s1, &s2, 0.0).unwrap();
        assert_eq!(r.removed_rank, 1);
        assert_eq!(r.reduced.rank(), 1);
        assert!(overlap(&r.reduced, &s2) < 1e-12);
    }

    #[test]
    fn invalid_epsilon() {
        let s = span(2, vec![vec![1., 0.]]);
        assert!(matches!(eps_subtract(&s, &s, 1.5), Err(QsdError::InvalidEpsilon(_))));
        assert!(matches!(eps_subtract(&s, &s, -0.1), Err(QsdError::InvalidEpsilon(_))));
    }

    #[test]
    fn lemma2_single_parts() {
        let v = vec![span(2, vec![vec![1., 0.]])];
        let w = vec![span(2, vec![vec![0.6, 0.8]])];
        let o = check_lemma2(&v, &w, 0.6).unwrap();
        assert_abs_diff_eq!(o, 0.6, epsilon = 1e-12);
        assert!(check_lemma2(&v, &w, 0.5).is_err());
    }

    #[test]
    fn lemma2_orthogonal() {
        let v = vec![
            Subspace::from_orthonormal(4, vec![unit_vector(4, 0)]),
            Subspace::from_orthonormal(4, vec![unit_vector(4, 1)]),
        ];
        let w = vec![
            Subspace::from_orthonormal(4, vec![unit_vector(4, 2)]),
            Subspace::from_orthonormal(4, vec![unit_vector(4, 3)]),
        ];
        assert_eq!(check_lemma2(&v, &w, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn lemma2_rejects_non_orthogonal_parts() {
        let v = vec![span(2, vec![vec![1., 0.]]), span(2, vec![vec![1., 1.]])];
        let w = vec![span(2, vec![vec![0., 1.]])];
        assert!(matches!(check_lemma2(&v, &w, 1.0), Err(QsdError::PreconditionViolated(_))));
    }

    #[test]
    fn lemma3_orthogonal_subspaces() {
        let subs: Vec<Subspace> = (0..3).map(|i| Subspace::from_orthonormal(3, vec![unit_vector(3, i)])).collect();
        let d = check_lemma3(&subs, 0.0).unwrap();
        assert!(d.frobenius_norm() < 1e-14);
    }

    #[test]
    fn lemma3_delta_too_large() {
        let s = span(2, vec![vec![1., 0.]]);
        assert!(matches!(check_lemma3(&[s.clone(), s], 1.0), Err(QsdError::DeltaTooLarge { .. })));
    }
}
