//! Seeded generators for random states, subspaces and ensembles.
//!
//! Everything is driven by a ChaCha8 stream so a seed fixes the output on
//! every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::ComplexMatrix;
use crate::spectra::{Subspace, WeightedState};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Uniform in lo..=hi.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn vector(&mut self, dim: usize) -> Vec<Complex64> {
        (0..dim).map(|_| self.complex_gaussian()).collect()
    }

    pub fn vectors(&mut self, dim: usize, count: usize) -> Vec<Vec<Complex64>> {
        (0..count).map(|_| self.vector(dim)).collect()
    }

    /// Haar-distributed subspace of the given rank.
    pub fn subspace(&mut self, dim: usize, rank: usize) -> Subspace {
        loop {
            let s = Subspace::span_of(dim, &self.vectors(dim, rank));
            if s.rank() == rank {
                return s;
            }
        }
    }

    /// Haar-distributed unitary (columns of an orthonormalized Ginibre matrix).
    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        let cols = self.subspace(dim, dim);
        let mut u = ComplexMatrix::zeros(dim);
        for (j, col) in cols.basis().iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                u[(i, j)] = z;
            }
        }
        u
    }

    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            h[(i, i)] = Complex64::new(self.gaussian(), 0.0);
            for j in i + 1..dim {
                let z = self.complex_gaussian();
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        h
    }

    /// Σ_a w_a |v_a⟩⟨v_a|, Hermitian by construction.
    pub fn gram(&mut self, vectors: &[Vec<Complex64>], weights: &[f64]) -> ComplexMatrix {
        let dim = vectors.first().map_or(0, Vec::len);
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let z: Complex64 = vectors.iter().zip(weights).map(|(v, &w)| v[i] * v[j].conj() * w).sum();
                m[(i, j)] = if i == j { Complex64::new(z.re, 0.0) } else { z };
                if i != j {
                    m[(j, i)] = z.conj();
                }
            }
        }
        m
    }

    /// Random density matrix of the given rank (Wishart, normalized).
    pub fn density_matrix(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let vs = self.vectors(dim, rank);
        let m = self.gram(&vs, &vec![1.0; rank]);
        let tr = m.trace().re;
        m.scale(1.0 / tr)
    }

    /// Normalized projector onto a random subspace: a flat spectrum.
    pub fn flat_state(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let s = self.subspace(dim, rank);
        self.gram(s.basis(), &vec![1.0 / rank as f64; rank])
    }

    /// PSD matrix with eigenvalues spread over several orders of magnitude and
    /// occasional exact degeneracies.
    pub fn wide_psd(&mut self, dim: usize) -> ComplexMatrix {
        let rank = self.int(1, dim);
        let s = self.subspace(dim, rank);
        let mut weights: Vec<f64> = (0..rank).map(|_| 10f64.powf(self.uniform(-3.0, 1.0))).collect();
        if rank > 1 && self.coin(0.3) {
            weights[1] = weights[0];
        }
        self.gram(s.basis(), &weights)
    }

    /// Priors drawn uniformly from the simplex interior, bounded away from 0.
    pub fn priors(&mut self, r: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..r).map(|_| self.uniform(0.05, 1.0)).collect();
        let total: f64 = raw.iter().sum();
        raw.iter().map(|x| x / total).collect()
    }

    /// r states of random rank (occasionally with a flat spectrum).
    pub fn ensemble(&mut self, r: usize, dim: usize) -> Vec<WeightedState> {
        let priors = self.priors(r);
        priors
            .into_iter()
            .map(|p| {
                let rank = self.int(1, dim);
                let rho = if self.coin(0.2) { self.flat_state(dim, rank) } else { self.density_matrix(dim, rank) };
                WeightedState::new(p, rho).expect("sampled state is valid")
            })
            .collect()
    }

    /// r simultaneously diagonal states with random supports.
    pub fn diagonal_ensemble(&mut self, r: usize, dim: usize) -> Vec<WeightedState> {
        let priors = self.priors(r);
        priors
            .into_iter()
            .map(|p| {
                let mut diag: Vec<f64> =
                    (0..dim).map(|_| if self.coin(0.25) { 0.0 } else { self.uniform(0.0, 1.0) }).collect();
                if diag.iter().all(|&x| x == 0.0) {
                    let k = self.int(0, dim - 1);
                    diag[k] = 1.0;
                }
                let total: f64 = diag.iter().sum();
                diag.iter_mut().for_each(|x| *x /= total);
                WeightedState::new(p, ComplexMatrix::from_real_diagonal(&diag)).expect("sampled state is valid")
            })
            .collect()
    }

    /// Rank-one subspaces e_i + (small noise), nearly orthogonal.
    pub fn near_orthogonal_lines(&mut self, count: usize, dim: usize, noise: f64) -> Vec<Subspace> {
        (0..count)
            .map(|i| {
                let mut v = self.vector(dim);
                v.iter_mut().for_each(|z| *z *= noise);
                v[i % dim] += Complex64::new(1.0, 0.0);
                Subspace::span_of(dim, &[v])
            })
            .collect()
    }

    /// Mutually orthogonal parts: a random orthonormal frame split into blocks.
    pub fn orthogonal_parts(&mut self, dim: usize, ranks: &[usize]) -> Vec<Subspace> {
        let total: usize = ranks.iter().sum();
        let frame = self.subspace(dim, total).into_basis();
        let mut out = Vec::new();
        let mut start = 0;
        for &k in ranks {
            out.push(Subspace::from_orthonormal(dim, frame[start..start + k].to_vec()));
            start += k;
        }
        out
    }

    /// Multiplies each basis vector by a random unit phase.
    pub fn rephase(&mut self, s: &Subspace) -> Subspace {
        let basis = s
            .basis()
            .iter()
            .map(|v| {
                let phase = Complex64::from_polar(1.0, self.uniform(0.0, std::f64::consts::TAU));
                v.iter().map(|z| z * phase).collect()
            })
            .collect();
        Subspace::from_orthonormal(s.ambient_dim(), basis)
    }
}

/// U·M·U†.
pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    let out = u.matmul(m).matmul(&u.adjoint());
    // restore exact Hermiticity lost to rounding
    out.add(&out.adjoint()).scale(0.5)
}
