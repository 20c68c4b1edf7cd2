//! Job dispatch: reads one JSON input, runs the requested computation,
//! and produces a deterministic machine-readable report.
//!
//! Reports are byte-stable for identical inputs: the pivot rules downstream
//! are deterministic and the elapsed-time measurement is kept out of the
//! serialized form (it goes to the log instead).

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use algd::algebroid::{is_integrable, monodromy_generators, AlgebroidError, AlgebroidPresentation};
use algd::complex::{homology, ComplexError};
use algd::equivariant::{
    check_assumptions, check_equivariance, equivariant_derham_certificate, tautological_theta,
    EquivariantError,
};
use algd::exact::ExactError;
use algd::lift::{almeida_molino_lift, derham_lift, verify_lift, LiftError};

use crate::schema;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse input JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("input does not match the command schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
}

impl CliError {
    /// Stable machine-readable code, one per failure kind.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io-error",
            CliError::Parse(_) => "parse-error",
            CliError::Schema(_) => "schema-error",
            CliError::Exact(e) => match e {
                ExactError::NotSaturated => "not-saturated",
                ExactError::SymbolProduct => "symbol-product",
                ExactError::ShapeMismatch(_) => "shape-mismatch",
                ExactError::Parse(_) => "scalar-parse-error",
                ExactError::UnknownSymbol(_) => "unknown-symbol",
                ExactError::InvalidSymbol(_) => "invalid-symbol",
            },
            CliError::Complex(e) => match e {
                ComplexError::MalformedInput(_) => "malformed-input",
                ComplexError::DegreeOutOfRange { .. } => "degree-out-of-range",
                ComplexError::NotClosed => "not-closed",
                ComplexError::ShapeMismatch(_) => "shape-mismatch",
                ComplexError::NotAComplex(_, _) => "not-a-complex",
            },
            CliError::Algebroid(e) => match e {
                AlgebroidError::NotSimplyConnected => "not-simply-connected",
                AlgebroidError::ShapeMismatch(_) => "shape-mismatch",
                AlgebroidError::SymbolOutOfRange(_) => "symbol-out-of-range",
                AlgebroidError::Exact(inner) => CliError::Exact(inner.clone()).code(),
                AlgebroidError::Complex(inner) => CliError::Complex(inner.clone()).code(),
            },
            CliError::Lift(e) => match e {
                LiftError::TrivialClass => "trivial-class",
                LiftError::NotSimplyConnected => "not-simply-connected",
                LiftError::DegreeMismatch(_) => "degree-mismatch",
                LiftError::Unsolvable => "unsolvable",
                LiftError::Exact(inner) => CliError::Exact(inner.clone()).code(),
                LiftError::Complex(inner) => CliError::Complex(inner.clone()).code(),
                LiftError::Algebroid(inner) => CliError::Algebroid(inner.clone()).code(),
            },
            CliError::Equivariant(e) => match e {
                EquivariantError::InvalidAction(_) => "invalid-action",
                EquivariantError::AssumptionsFailed => "assumptions-failed",
                EquivariantError::CoefficientActionUndefined => "coefficient-action-undefined",
                EquivariantError::ShapeMismatch(_) => "shape-mismatch",
                EquivariantError::Complex(inner) => CliError::Complex(inner.clone()).code(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Homology,
    Integrability,
    LiftAm,
    LiftDr,
    Verify,
    Equivariant,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Homology => "homology",
            Command::Integrability => "integrability",
            Command::LiftAm => "lift-am",
            Command::LiftDr => "lift-dr",
            Command::Verify => "verify",
            Command::Equivariant => "equivariant",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub command: Command,
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "not-integrable")]
    NotIntegrable,
    #[serde(rename = "error")]
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: serde_json::Value,
    /// Wall time of the computation; logged, never serialized, so that
    /// identical inputs give byte-identical reports.
    #[serde(skip)]
    pub timing_ms: u128,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::NotIntegrable => 2,
            Status::Error => 1,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let mut text = if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        };
        text.push('\n');
        text
    }
}

/// Runs a job start to finish. Never fails: errors become `status =
/// "error"` reports with a machine-readable code.
pub fn run(job: &Job) -> Report {
    let start = Instant::now();
    let result = dispatch(job);
    let timing_ms = start.elapsed().as_millis();
    let report = match result {
        Ok((status, payload)) => Report {
            command: job.command.to_string(),
            status,
            payload,
            timing_ms,
        },
        Err(e) => Report {
            command: job.command.to_string(),
            status: Status::Error,
            payload: json!({ "code": e.code(), "message": e.to_string() }),
            timing_ms,
        },
    };
    log::info!(
        "{} finished in {} ms (status {:?})",
        job.command,
        timing_ms,
        report.status
    );
    report
}

fn dispatch(job: &Job) -> Result<(Status, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(&job.input)?;
    match job.command {
        Command::Homology => {
            let input: schema::HomologyInput = serde_json::from_str(&text)?;
            let c = input.build()?;
            let results = (0..=c.top())
                .map(|k| homology(&c, k))
                .collect::<Result<Vec<_>, _>>()?;
            let report = schema::homology_report(&c, &results)?;
            Ok((Status::Ok, serde_json::to_value(report)?))
        }
        Command::Integrability => {
            let input: schema::PresentationInput = serde_json::from_str(&text)?;
            let p = input.build()?;
            let report = is_integrable(&p)?;
            let status = if report.discrete {
                Status::Ok
            } else {
                Status::NotIntegrable
            };
            let payload = schema::monodromy_payload(&report, p.symbols());
            Ok((status, serde_json::to_value(payload)?))
        }
        Command::LiftAm => {
            let input: schema::PresentationInput = serde_json::from_str(&text)?;
            let p = input.build()?;
            let lr = almeida_molino_lift(&p)?;
            let payload = schema::lift_payload(&lr)?;
            Ok((Status::Ok, serde_json::to_value(payload)?))
        }
        Command::LiftDr => {
            let input: schema::PresentationInput = serde_json::from_str(&text)?;
            let p = input.build()?;
            let lr = derham_lift(&p)?;
            let payload = schema::lift_payload(&lr)?;
            Ok((Status::Ok, serde_json::to_value(payload)?))
        }
        Command::Verify => {
            let input: schema::PresentationInput = serde_json::from_str(&text)?;
            let p = input.build()?;
            let report = is_integrable(&p)?;
            let am = match almeida_molino_lift(&p) {
                Ok(lr) => schema::LiftCheck {
                    applicable: true,
                    n: Some(lr.n),
                    degenerate: Some(lr.degenerate),
                    discrete: Some(lr.certificate.discrete),
                    verified: Some(verify_lift(&lr)),
                },
                Err(LiftError::TrivialClass) => schema::LiftCheck {
                    applicable: false,
                    n: None,
                    degenerate: None,
                    discrete: None,
                    verified: None,
                },
                Err(e) => return Err(e.into()),
            };
            let dr = derham_lift(&p)?;
            let payload = schema::VerifyPayload {
                integrable: report.discrete,
                almeida_molino: am,
                derham: schema::LiftCheck {
                    applicable: true,
                    n: Some(dr.n),
                    degenerate: Some(dr.degenerate),
                    discrete: Some(dr.certificate.discrete),
                    verified: Some(verify_lift(&dr)),
                },
            };
            Ok((Status::Ok, serde_json::to_value(payload)?))
        }
        Command::Equivariant => {
            let input: schema::EquivariantInput = serde_json::from_str(&text)?;
            let (action, forms) = input.build()?;
            let basis = algd::exact::SymbolBasis::new(input.symbols.iter().cloned())?;
            let h = homology(action.complex(), 2)?;
            let assumptions = check_assumptions(&action, &forms, &h);
            if !assumptions {
                let payload = schema::EquivariantPayload {
                    assumptions: false,
                    theta_equivariant: None,
                    period_matrix: None,
                    free_rank: None,
                    real_span_dim: None,
                    discrete: None,
                };
                return Ok((Status::Ok, serde_json::to_value(payload)?));
            }
            let certificate = equivariant_derham_certificate(&action, &forms, &h)?;
            let theta = tautological_theta(&action, &forms);
            let equivariant = check_equivariance(&action, &forms, &theta)?;
            let payload = schema::EquivariantPayload {
                assumptions: true,
                theta_equivariant: Some(equivariant),
                period_matrix: Some(schema::kmatrix_text(&certificate.generators, &basis)),
                free_rank: Some(certificate.free_rank),
                real_span_dim: Some(certificate.real_span_dim),
                discrete: Some(certificate.discrete),
            };
            Ok((Status::Ok, serde_json::to_value(payload)?))
        }
    }
}

// Re-exported for tests that drive presentations directly.
pub fn presentation_from_json(text: &str) -> Result<AlgebroidPresentation, CliError> {
    let input: schema::PresentationInput = serde_json::from_str(text)?;
    input.build()
}

/// Generators reported by the integrability pipeline for a presentation
/// given as JSON text.
pub fn generators_from_json(text: &str) -> Result<Vec<Vec<String>>, CliError> {
    let p = presentation_from_json(text)?;
    let gens = monodromy_generators(&p)?;
    Ok(schema::kmatrix_text(&gens, p.symbols()))
}
