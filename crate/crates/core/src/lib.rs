//! Multi-hypothesis quantum state discrimination.
//!
//! Given weighted states A_i = p_i·ρ_i, this crate builds an explicit
//! projective measurement from the eigenspaces of the A_i, evaluates its
//! error, and brackets the optimal error between the one-shot lower bound
//!
//! ```text
//! (1/(2(r−1))) · Σ_{i<j} Σ_{k,ℓ} min{λ_ik, λ_jℓ} tr Q_ik Q_jℓ
//! ```
//!
//! and the same sum times f(r, T) = 25(r−1)²T²/4 + 3. It also provides the
//! quantum Chernoff distance, the Helstrom, diagonal and pretty-good-measurement
//! oracles, and a tensor-power harness for error exponents.

pub mod bounds;
pub mod error;
pub mod exponent;
pub mod io;
pub mod matcore;
pub mod measurement;
pub mod random;
pub mod selftest;
pub mod spectra;
pub mod subtraction;

pub use bounds::{
    audenaert_bound, bin_spectrum, bound_report, chernoff_distance, chernoff_matrix, diagonal_oracle, dual_feasibility,
    helstrom_error, multiple_chernoff, one_shot_lower, one_shot_upper, one_shot_upper_binned, pairwise_overlap_sum,
    pgm_error, BinnedState, BoundReport,
};
pub use error::{QsdError, Result};
pub use exponent::{run_exponent, EpsPolicy, ExponentReport, ExponentRow};
pub use io::{load_ensemble, parse_ensemble, EnsembleFile};
pub use matcore::{herm_eig, tensor_product, trace_norm, ComplexMatrix, EigDecomposition, DEFAULT_DIM_CAP};
pub use measurement::{build_measurement, error_probability, validate_povm, ProjectiveMeasurement};
pub use spectra::{overlap, projector, spectral_decompose, tensor_power, SpectralForm, Subspace, WeightedState};
pub use subtraction::{check_lemma2, check_lemma3, eps_subtract, SubtractionResult};

pub use num_complex::Complex64;
