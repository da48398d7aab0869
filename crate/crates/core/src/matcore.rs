//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is a row-major square matrix of `Complex64`. The only
//! decomposition provided is a cyclic Jacobi eigensolver for Hermitian
//! matrices ([`herm_eig`]), which is deterministic: the sweep order and the
//! rotation sign convention are fixed, so bit-identical input always yields
//! bit-identical output.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{QsdError, Result};

/// Default cap on the dimension of any tensor product we are willing to form.
pub const DEFAULT_DIM_CAP: usize = 4096;

const MAX_SWEEPS: usize = 100;
const JACOBI_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row vectors. Fails unless the rows form a square
    /// array of finite entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(QsdError::validation("NotSquare", "matrix has no rows"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(QsdError::validation(
                    "NotSquare",
                    format!("row {i} has {} entries, expected {dim}", row.len()),
                ));
            }
            data.extend(row);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QsdError::validation("NonFinite", "matrix contains NaN or Inf"));
        }
        Ok(Self { dim, data })
    }

    /// Rank-one projector |v⟩⟨v| (no normalization is applied).
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "sub dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, data }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n).map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Real part of ⟨v|self|v⟩.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        inner(v, &self.mul_vec(v)).re
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// ⟨u|v⟩, conjugate-linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product of two vectors, first factor major.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| x * y));
    }
    out
}

/// Eigendecomposition H = V·diag(λ)·V† of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column j is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// V·diag(g(λ))·V†.
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = g(lambda);
            if w == 0.0 {
                continue;
            }
            for a in 0..n {
                let va = self.eigenvectors[(a, j)] * w;
                for b in 0..n {
                    out[(a, b)] += va * self.eigenvectors[(b, j)].conj();
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is first replaced by its Hermitian part (H + H†)/2; it must be
/// within 10⁻⁹·max(1, ‖H‖_F) of Hermitian. Sweeps run in row-major (p, q)
/// order until the off-diagonal Frobenius norm is ≤ 10⁻¹²·‖H‖_F.
pub fn herm_eig(h: &ComplexMatrix) -> Result<EigDecomposition> {
    let scale = h.frobenius_norm();
    if !scale.is_finite() {
        return Err(QsdError::validation("NonFinite", "matrix contains NaN or Inf"));
    }
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL * scale.max(1.0) {
        return Err(QsdError::NonHermitian { residual });
    }

    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= tol {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off_norm = a.off_diagonal_norm();
        if off_norm > tol {
            return Err(QsdError::NoConvergence { sweeps: MAX_SWEEPS, off_norm });
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep sweep order
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).expect("finite eigenvalues"));

    let eigenvalues = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, new_j)] = v[(row, old_j)];
        }
    }
    Ok(EigDecomposition { eigenvalues, eigenvectors })
}

/// One complex Jacobi rotation annihilating a[p][q].
///
/// G = D·J with D = diag(1, e^{-iφ}) on (p, q), φ = arg a[p][q], and J the
/// real rotation [[c, s], [−s, c]]; then a ← G†·a·G and v ← v·G.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let conj_phase = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = conj_phase * (-s);
    let g_qq = conj_phase * c;

    let n = a.dim();
    // a ← a·G
    for k in 0..n {
        let xp = a[(k, p)];
        let xq = a[(k, q)];
        a[(k, p)] = xp * g_pp + xq * g_qp;
        a[(k, q)] = xp * g_pq + xq * g_qq;
    }
    // a ← G†·a
    for k in 0..n {
        let xp = a[(p, k)];
        let xq = a[(q, k)];
        a[(p, k)] = g_pp.conj() * xp + g_qp.conj() * xq;
        a[(q, k)] = g_pq.conj() * xp + g_qq.conj() * xq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let xp = v[(k, p)];
        let xq = v[(k, q)];
        v[(k, p)] = xp * g_pp + xq * g_qp;
        v[(k, q)] = xp * g_pq + xq * g_qq;
    }
}

/// A ⊗ B with the default dimension cap.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_product_capped(a, b, DEFAULT_DIM_CAP)
}

/// (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l], row index i·dim(B) + k.
pub fn tensor_product_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .filter(|&d| d <= cap)
        .ok_or(QsdError::DimensionOverflow { dim: da.saturating_mul(db), cap })?;
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// n-fold tensor power of a matrix.
pub fn tensor_power_dense(a: &ComplexMatrix, n: usize, cap: usize) -> Result<ComplexMatrix> {
    assert!(n >= 1, "tensor power needs n >= 1");
    let mut out = a.clone();
    for _ in 1..n {
        out = tensor_product_capped(&out, a, cap)?;
    }
    Ok(out)
}

/// Σ|λ_i| of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(h)?.eigenvalues.iter().map(|l| l.abs()).sum())
}
