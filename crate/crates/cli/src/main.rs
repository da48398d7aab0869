use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qsd_core::bounds::{bound_report, chernoff_matrix, multiple_chernoff};
use qsd_core::exponent::{run_exponent, state_forms, EpsPolicy};
use qsd_core::io::{load_ensemble, ExtReal};
use qsd_core::measurement::{construct, error_probability, validate_povm, weighted_forms};
use qsd_core::selftest::run_selftest;
use qsd_core::{ComplexMatrix, QsdError, WeightedState, DEFAULT_DIM_CAP};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "qsd", version, about = "Bounds and measurements for quantum state discrimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Ensemble JSON file
    file: PathBuf,
    /// Accept priors that do not sum to 1
    #[arg(long)]
    unnormalized: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Upper and lower bounds, oracles and Chernoff distances as JSON
    Bounds {
        #[command(flatten)]
        input: Input,
    },
    /// Build the eigenspace measurement and report its projectors and error
    Measure {
        #[command(flatten)]
        input: Input,
        /// ε in (0, 1); defaults to 2/(5(r−1)T)
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Error exponents of n-copy ensembles as CSV
    Exponent {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n_max: usize,
        /// default | <value> | sweep:<lo>:<hi>:<steps>
        #[arg(long, default_value = "default")]
        eps: EpsPolicy,
        /// Largest allowed dimension d^n
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
    },
    /// Run the seeded property suites
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Pairwise and multiple quantum Chernoff distances as JSON
    Chernoff {
        #[command(flatten)]
        input: Input,
    },
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    json!(m.rows().iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn load(input: &Input) -> Result<Vec<WeightedState>, QsdError> {
    load_ensemble(&input.file, input.unnormalized)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn cmd_bounds(input: &Input) -> Result<String, QsdError> {
    let report = bound_report(&load(input)?)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn cmd_measure(input: &Input, eps: Option<f64>) -> Result<String, QsdError> {
    let ensemble = load(input)?;
    let forms = weighted_forms(&ensemble)?;
    let c = construct(&forms, eps)?;
    let mats: Vec<ComplexMatrix> = ensemble.iter().map(WeightedState::weighted).collect();
    let projectors = c.measurement.projectors();
    let residuals = validate_povm(&projectors)?;
    let report = json!({
        "r": ensemble.len(),
        "dim": c.measurement.dim,
        "t_max": c.t_max,
        "eps": c.measurement.eps,
        "error_probability": error_probability(&mats, &c.measurement),
        "ranks": projectors.iter().map(|p| p.trace().re.round() as usize).collect::<Vec<_>>(),
        "residuals": residuals,
        "projectors": projectors.iter().map(matrix_json).collect::<Vec<_>>(),
    });
    Ok(pretty(&report))
}

fn cmd_exponent(input: &Input, n_max: usize, policy: &EpsPolicy, cap: usize) -> Result<String, QsdError> {
    let ensemble = load(input)?;
    let reports = run_exponent(&ensemble, n_max, policy, cap)?;
    Ok(reports.iter().map(|r| r.to_csv()).collect::<Vec<_>>().join("\n"))
}

fn cmd_chernoff(input: &Input) -> Result<String, QsdError> {
    let forms = state_forms(&load(input)?)?;
    let matrix: Vec<Vec<ExtReal>> =
        chernoff_matrix(&forms).into_iter().map(|row| row.into_iter().map(ExtReal).collect()).collect();
    Ok(pretty(&json!({
        "chernoff_matrix": matrix,
        "multiple_chernoff": ExtReal(multiple_chernoff(&forms)),
    })))
}

/// Writes to stdout with a trailing newline; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Bounds { input } => cmd_bounds(input),
        Command::Measure { input, eps } => cmd_measure(input, *eps),
        Command::Exponent { input, n_max, eps, dim_cap } => cmd_exponent(input, *n_max, eps, *dim_cap),
        Command::Chernoff { input } => cmd_chernoff(input),
        Command::Selftest { seed } => {
            let report = run_selftest(*seed);
            emit(&report.render());
            return if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_SELFTEST) };
        }
    };
    match result {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { EXIT_VALIDATION } else { EXIT_NUMERICAL })
        }
    }
}
