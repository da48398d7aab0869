//! Error exponents of tensor-power ensembles {p_i ρ_i^{⊗n}}.
//!
//! For each n the spectral forms of ρ_i^{⊗n} are assembled by type counting,
//! the measurement is built and evaluated, and the one-shot upper and lower
//! bounds are turned into exponents −log(·)/n to be compared with the
//! multiple Chernoff distance of the single-copy states.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bounds::{error_constant, multiple_chernoff, pairwise_overlap_sum, theorem_constant};
use crate::error::{QsdError, Result};
use crate::io::csv_real;
use crate::measurement::{construct, error_probability};
use crate::spectra::{spectral_decompose, tensor_power, SpectralForm, WeightedState, DEFAULT_CLUSTER_TOL};

/// How ε is chosen for each n.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsPolicy {
    /// 2/(5(r−1)T_n), recomputed for every n.
    Default,
    Fixed(f64),
    /// `steps` evenly spaced values from `lo` to `hi` inclusive.
    Sweep {
        lo: f64,
        hi: f64,
        steps: usize,
    },
}

impl EpsPolicy {
    /// One entry per CSV block; `None` means the default ε.
    pub fn values(&self) -> Vec<Option<f64>> {
        match *self {
            EpsPolicy::Default => vec![None],
            EpsPolicy::Fixed(e) => vec![Some(e)],
            EpsPolicy::Sweep { lo, hi, steps } => {
                if steps == 1 {
                    return vec![Some(lo)];
                }
                (0..steps).map(|k| Some(lo + (hi - lo) * k as f64 / (steps - 1) as f64)).collect()
            }
        }
    }
}

impl FromStr for EpsPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "default" {
            return Ok(EpsPolicy::Default);
        }
        if let Some(rest) = s.strip_prefix("sweep:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("expected sweep:<lo>:<hi>:<steps>, got {s:?}"));
            }
            let lo: f64 = parts[0].parse().map_err(|_| format!("bad sweep lower bound {:?}", parts[0]))?;
            let hi: f64 = parts[1].parse().map_err(|_| format!("bad sweep upper bound {:?}", parts[1]))?;
            let steps: usize = parts[2].parse().map_err(|_| format!("bad sweep step count {:?}", parts[2]))?;
            if steps == 0 || !(lo > 0.0 && hi < 1.0 && lo <= hi) {
                return Err(format!("sweep needs 0 < lo <= hi < 1 and steps >= 1, got {s:?}"));
            }
            return Ok(EpsPolicy::Sweep { lo, hi, steps });
        }
        let e: f64 =
            s.parse().map_err(|_| format!("expected default, a number, or sweep:<lo>:<hi>:<steps>, got {s:?}"))?;
        if !(e > 0.0 && e < 1.0) {
            return Err(format!("ε must lie in (0, 1), got {e}"));
        }
        Ok(EpsPolicy::Fixed(e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRow {
    pub n: usize,
    pub dim: usize,
    pub t_max: usize,
    pub eps: f64,
    pub p_e_measured: f64,
    pub upper: f64,
    pub lower: f64,
    pub exp_measured: f64,
    pub exp_upper: f64,
    pub exp_lower: f64,
    /// exp_upper − exp_lower.
    pub exp_gap: f64,
    /// (2d·log(n+1) + log(10(r−1)²·C(r,2)·max p))/n.
    pub analytic_deficit: f64,
    /// The prefactor relating `upper` to the overlap sum.
    pub upper_constant: f64,
}

/// Rows for n = 1..=n_max at one ε policy; `chernoff` is the target exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    pub r: usize,
    pub base_dim: usize,
    pub eps: Option<f64>,
    pub chernoff: f64,
    pub rows: Vec<ExponentRow>,
}

pub const CSV_HEADER: &str =
    "n,dim,t_max,eps,p_e_measured,ub,lb,exp_measured,exp_ub,exp_lb,exp_gap,analytic_deficit,chernoff";

impl ExponentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                row.n,
                row.dim,
                row.t_max,
                csv_real(row.eps),
                csv_real(row.p_e_measured),
                csv_real(row.upper),
                csv_real(row.lower),
                csv_real(row.exp_measured),
                csv_real(row.exp_upper),
                csv_real(row.exp_lower),
                csv_real(row.exp_gap),
                csv_real(row.analytic_deficit),
                csv_real(self.chernoff),
            );
        }
        out
    }
}

fn neg_log_rate(x: f64, n: usize) -> f64 {
    if x > 0.0 {
        -x.ln() / n as f64
    } else {
        f64::INFINITY
    }
}

/// −log(x)/n with the n-copy bound written as 10(r−1)²C(r,2)(n+1)^{2d}·max p·e^{−nC}.
pub fn analytic_deficit(r: usize, d: usize, max_prior: f64, n: usize) -> f64 {
    let rm1 = (r - 1) as f64;
    let pairs = (r * (r - 1)) as f64 / 2.0;
    (2.0 * d as f64 * ((n + 1) as f64).ln() + (10.0 * rm1 * rm1 * pairs * max_prior).ln()) / n as f64
}

/// Single-copy spectral forms of the (unweighted) states.
pub fn state_forms(ensemble: &[WeightedState]) -> Result<Vec<SpectralForm>> {
    ensemble.iter().map(|w| spectral_decompose(w.state(), DEFAULT_CLUSTER_TOL)).collect()
}

/// Weighted spectral forms of p_i ρ_i^{⊗n}.
pub fn tensor_power_forms(
    ensemble: &[WeightedState],
    base: &[SpectralForm],
    n: usize,
    cap: usize,
) -> Result<Vec<SpectralForm>> {
    ensemble
        .iter()
        .zip(base)
        .map(|(w, f)| Ok(tensor_power(f, n, cap, DEFAULT_CLUSTER_TOL)?.scaled(w.prior())))
        .collect()
}

/// Runs n = 1..=n_max at a single ε (None = default per n).
pub fn exponent_experiment(
    ensemble: &[WeightedState],
    n_max: usize,
    eps: Option<f64>,
    cap: usize,
) -> Result<ExponentReport> {
    let r = ensemble.len();
    if r < 2 {
        return Err(QsdError::TooFewStates { min: 2, found: r });
    }
    let d = ensemble[0].dim();
    let exponent = u32::try_from(n_max).unwrap_or(u32::MAX);
    let top = d.saturating_pow(exponent);
    if top > cap {
        return Err(QsdError::DimensionOverflow { dim: top, cap });
    }
    let base = state_forms(ensemble)?;
    let chernoff = multiple_chernoff(&base);
    let max_prior = ensemble.iter().map(WeightedState::prior).fold(0.0, f64::max);

    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let forms = tensor_power_forms(ensemble, &base, n, cap)?;
        let c = construct(&forms, eps)?;
        let p_e = error_probability(&forms, &c.measurement);
        let sum = pairwise_overlap_sum(&forms);
        let upper_constant = match eps {
            None => theorem_constant(r, c.t_max),
            Some(e) => error_constant(r, c.t_max, e),
        };
        let upper = upper_constant * sum;
        let lower = sum / (2.0 * (r - 1) as f64);
        let exp_upper = neg_log_rate(upper, n);
        let exp_lower = neg_log_rate(lower, n);
        rows.push(ExponentRow {
            n,
            dim: forms[0].dim,
            t_max: c.t_max,
            eps: c.measurement.eps,
            p_e_measured: p_e,
            upper,
            lower,
            exp_measured: neg_log_rate(p_e, n),
            exp_upper,
            exp_lower,
            exp_gap: exp_upper - exp_lower,
            analytic_deficit: analytic_deficit(r, d, max_prior, n),
            upper_constant,
        });
    }
    Ok(ExponentReport { r, base_dim: d, eps, chernoff, rows })
}

/// One report per ε value of the policy.
pub fn run_exponent(
    ensemble: &[WeightedState],
    n_max: usize,
    policy: &EpsPolicy,
    cap: usize,
) -> Result<Vec<ExponentReport>> {
    policy.values().into_iter().map(|eps| exponent_experiment(ensemble, n_max, eps, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_policies() {
        assert_eq!("default".parse::<EpsPolicy>().unwrap(), EpsPolicy::Default);
        assert_eq!("0.1".parse::<EpsPolicy>().unwrap(), EpsPolicy::Fixed(0.1));
        assert_eq!("sweep:0.01:0.1:4".parse::<EpsPolicy>().unwrap(), EpsPolicy::Sweep { lo: 0.01, hi: 0.1, steps: 4 });
        assert!("1.5".parse::<EpsPolicy>().is_err());
        assert!("sweep:0.1:0.2".parse::<EpsPolicy>().is_err());
        assert!("sweep:0.2:0.1:3".parse::<EpsPolicy>().is_err());
    }

    #[test]
    fn sweep_values_inclusive() {
        let v = EpsPolicy::Sweep { lo: 0.1, hi: 0.3, steps: 3 }.values();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], Some(0.1));
        assert!((v[2].unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn deficit_formula() {
        // r = 2, d = 2, max p = 1/2, n = 1: (4 log 2 + log 5)/1
        let got = analytic_deficit(2, 2, 0.5, 1);
        assert!((got - (4.0 * 2f64.ln() + 5f64.ln())).abs() < 1e-14);
    }
}
