//! Ensemble files and serialization helpers.
//!
//! An ensemble file is JSON:
//!
//! ```json
//! {"states": [
//!   {"prior": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "label": "zero"},
//!   {"prior": 0.5, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
//! ]}
//! ```
//!
//! Matrices are row-major; every entry is an `[re, im]` pair.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QsdError, Result};
use crate::matcore::ComplexMatrix;
use crate::spectra::WeightedState;

const PRIOR_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub prior: f64,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub states: Vec<StateEntry>,
}

impl EnsembleFile {
    pub fn from_states(states: &[WeightedState]) -> Self {
        let states = states
            .iter()
            .map(|w| StateEntry {
                prior: w.prior(),
                matrix: w
                    .state()
                    .rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
                label: None,
            })
            .collect();
        Self { states }
    }

    /// Validates every state and, unless `unnormalized`, that priors sum to 1.
    pub fn into_states(self, unnormalized: bool) -> Result<Vec<WeightedState>> {
        let n = self.states.len();
        if n < 2 {
            return Err(QsdError::validation("TooFewStates", format!("need at least 2 states, got {n}")));
        }
        if !unnormalized {
            let total: f64 = self.states.iter().map(|s| s.prior).sum();
            if (total - 1.0).abs() > PRIOR_SUM_TOL {
                return Err(QsdError::validation("PriorSum", format!("priors sum to {total}, expected 1")));
            }
        }
        let mut dim = None;
        let mut out = Vec::with_capacity(n);
        for (i, entry) in self.states.into_iter().enumerate() {
            let rows: Vec<Vec<Complex64>> = entry
                .matrix
                .into_iter()
                .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect();
            let m = ComplexMatrix::from_rows(rows).map_err(|e| tag_state(i, e))?;
            match dim {
                None => dim = Some(m.dim()),
                Some(d) if d != m.dim() => {
                    return Err(QsdError::validation(
                        "DimensionMismatch",
                        format!("state {i} has dimension {}, expected {d}", m.dim()),
                    ))
                }
                _ => {}
            }
            let w = if unnormalized {
                WeightedState::unnormalized(entry.prior, m)
            } else {
                WeightedState::new(entry.prior, m)
            };
            out.push(w.map_err(|e| tag_state(i, e))?);
        }
        Ok(out)
    }
}

fn tag_state(i: usize, e: QsdError) -> QsdError {
    match e {
        QsdError::Validation { invariant, message } => {
            QsdError::Validation { invariant, message: format!("state {i}: {message}") }
        }
        other => other,
    }
}

pub fn parse_ensemble(text: &str, unnormalized: bool) -> Result<Vec<WeightedState>> {
    let file: EnsembleFile = serde_json::from_str(text).map_err(|e| QsdError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_states(unnormalized)
}

/// Reads and validates an ensemble file; states keep file order.
pub fn load_ensemble(path: impl AsRef<Path>, unnormalized: bool) -> Result<Vec<WeightedState>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| QsdError::Io(format!("{}: {e}", path.display())))?;
    parse_ensemble(&text, unnormalized)
}

pub fn ensemble_to_json(states: &[WeightedState]) -> String {
    serde_json::to_string_pretty(&EnsembleFile::from_states(states)).expect("ensemble serializes")
}

/// A real that may be ±∞; infinities serialize as the strings "inf"/"-inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            serializer.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

pub fn serialize_ext<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    ExtReal(*x).serialize(s)
}

pub fn serialize_opt_ext<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.map(ExtReal).serialize(s)
}

pub fn serialize_ext_matrix<S: Serializer>(m: &[Vec<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let wrapped: Vec<Vec<ExtReal>> = m.iter().map(|row| row.iter().copied().map(ExtReal).collect()).collect();
    wrapped.serialize(s)
}

/// CSV cell: 17 significant digits, empty for non-finite values.
pub fn csv_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_QUBITS: &str = r#"{"states": [
        {"prior": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "label": "zero"},
        {"prior": 0.5, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
    ]}"#;

    #[test]
    fn loads_fixture() {
        let states = parse_ensemble(TWO_QUBITS, false).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(states[0].dim(), 2);
    }

    #[test]
    fn prior_sum_checked() {
        let text = TWO_QUBITS.replace("\"prior\": 0.5, \"matrix\": [[[1", "\"prior\": 0.4, \"matrix\": [[[1");
        let err = parse_ensemble(&text, false).unwrap_err();
        assert!(matches!(err, QsdError::Validation { ref invariant, .. } if invariant == "PriorSum"));
        assert!(parse_ensemble(&text, true).is_ok());
    }

    #[test]
    fn not_psd_named() {
        let text = r#"{"states": [
            {"prior": 0.5, "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]},
            {"prior": 0.5, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
        ]}"#;
        let err = parse_ensemble(text, false).unwrap_err();
        assert!(matches!(err, QsdError::Validation { ref invariant, .. } if invariant == "NotPSD"), "{err}");
    }

    #[test]
    fn parse_error_has_position() {
        let err = parse_ensemble("{\"states\": [\n  {\"prior\": }\n]}", false).unwrap_err();
        assert!(matches!(err, QsdError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn ext_real_json() {
        assert_eq!(serde_json::to_string(&ExtReal(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&ExtReal(0.25)).unwrap(), "0.25");
        assert_eq!(csv_real(f64::INFINITY), "");
        assert_eq!(csv_real(0.5), "5.0000000000000000e-1");
    }
}
