//! Scenario files: JSON with complex numbers as `[re, im]` pairs and each
//! measurement given by a spanning set for its first outcome's eigenspace.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "state": [[1.0, 0.0], [0.0, 0.0]],
//!   "measurements": {
//!     "gender":    { "labels": ["F", "M"], "span": [[[1.0, 0.0], [0.0, 0.0]]] },
//!     "treatment": { "labels": ["T", "U"], "span": [[[1.0, 0.0], [0.0, 0.0]]] },
//!     "result":    { "labels": ["A", "D"], "span": [[[1.0, 0.0], [0.0, 0.0]]],
//!                    "complement": [[[0.0, 0.0], [1.0, 0.0]]] }
//!   }
//! }
//! ```
//!
//! The second outcome's projector is always `I − P`. An optional
//! `complement` spanning set is checked against it rather than used.

use std::fmt::Write as _;

use qsimpson::linalg::{Projector, StateVector, VALIDATION_TOL};
use qsimpson::{Complex64, MeasurementScenario, TwoOutcomeMeasurement};
use serde::Deserialize;
use thiserror::Error;

/// Malformed text: bad syntax, wrong shapes, or inconsistent lengths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{message} (line {line}, column {column})")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("`{field}` has {found} components, expected dim = {expected}")]
    Length {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("`{field}`: {reason}")]
    Field { field: String, reason: String },
}

/// Well-formed text describing an invalid scenario.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("`{field}`: {source}")]
    Span {
        field: String,
        source: qsimpson::Error,
    },
    #[error("measurement `{measurement}`: complement span is not I − P (residual {residual:.3e})")]
    NotComplementary { measurement: String, residual: f64 },
    #[error("`state` has zero norm")]
    ZeroState,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioFileError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
}

/// Residuals measured while validating a file, for verbose reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationResiduals {
    /// `(measurement, hermiticity, idempotence, complement check if given)`.
    pub projectors: Vec<(&'static str, f64, f64, Option<f64>)>,
    pub state_norm: f64,
}

type RawComplex = [f64; 2];
type RawVector = Vec<RawComplex>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    dim: usize,
    state: RawVector,
    measurements: RawMeasurements,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurements {
    gender: RawMeasurement,
    treatment: RawMeasurement,
    result: RawMeasurement,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    labels: [String; 2],
    span: Vec<RawVector>,
    #[serde(default)]
    complement: Option<Vec<RawVector>>,
}

const MEASUREMENTS: [&str; 3] = ["gender", "treatment", "result"];

pub fn parse_scenario_file(text: &str) -> Result<MeasurementScenario, ScenarioFileError> {
    parse_with_residuals(text).map(|(s, _)| s)
}

pub fn parse_with_residuals(
    text: &str,
) -> Result<(MeasurementScenario, ValidationResiduals), ScenarioFileError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        message: strip_location(&e.to_string()),
        line: e.line(),
        column: e.column(),
    })?;
    let dim = raw.dim;
    if dim == 0 {
        return Err(ParseError::Field {
            field: "dim".into(),
            reason: "must be at least 1".into(),
        }
        .into());
    }

    let state = to_state(&raw.state, dim, "state")?;
    let m = &raw.measurements;
    let raws = [&m.gender, &m.treatment, &m.result];
    // Check every shape before any linear algebra so parse errors win.
    for (name, rm) in MEASUREMENTS.iter().zip(raws) {
        for (i, label) in rm.labels.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(ParseError::Field {
                    field: format!("measurements.{name}.labels[{i}]"),
                    reason: "label must be non-empty".into(),
                }
                .into());
            }
        }
        if rm.labels[0] == rm.labels[1] {
            return Err(ParseError::Field {
                field: format!("measurements.{name}.labels"),
                reason: format!("outcome labels must differ, both are `{}`", rm.labels[0]),
            }
            .into());
        }
        for (key, set) in [
            ("span", Some(&rm.span)),
            ("complement", rm.complement.as_ref()),
        ] {
            for (i, v) in set.into_iter().flatten().enumerate() {
                check_len(v, dim, &format!("measurements.{name}.{key}[{i}]"))?;
            }
        }
    }

    if state.norm_sq() <= 0.0 {
        return Err(ValidationError::ZeroState.into());
    }
    let mut residuals = ValidationResiduals {
        projectors: Vec::with_capacity(3),
        state_norm: state.norm(),
    };
    let mut built = Vec::with_capacity(3);
    for (name, rm) in MEASUREMENTS.iter().zip(raws) {
        let first = span_projector(&rm.span, dim, &format!("measurements.{name}.span"))?;
        let (h, i) = first.residuals();
        let mut check = None;
        if let Some(comp) = &rm.complement {
            let second = span_projector(comp, dim, &format!("measurements.{name}.complement"))?;
            let residual = first
                .complementarity_residual(&second)
                .expect("dims checked above");
            if residual > VALIDATION_TOL {
                return Err(ValidationError::NotComplementary {
                    measurement: (*name).into(),
                    residual,
                }
                .into());
            }
            check = Some(residual);
        }
        residuals.projectors.push((name, h, i, check));
        let labels = [rm.labels[0].as_str(), rm.labels[1].as_str()];
        built.push(TwoOutcomeMeasurement::from_first(labels, first));
    }
    let [gender, treatment, result]: [TwoOutcomeMeasurement; 3] =
        built.try_into().expect("three measurements");
    let scenario = MeasurementScenario::new(state, gender, treatment, result)
        .map_err(|_| ValidationError::ZeroState)?;
    Ok((scenario, residuals))
}

/// serde_json appends " at line L column C"; the location is kept separately.
fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_owned(),
        None => message.to_owned(),
    }
}

fn check_len(v: &RawVector, dim: usize, field: &str) -> Result<(), ParseError> {
    if v.len() != dim {
        return Err(ParseError::Length {
            field: field.into(),
            expected: dim,
            found: v.len(),
        });
    }
    Ok(())
}

fn to_state(v: &RawVector, dim: usize, field: &str) -> Result<StateVector, ParseError> {
    check_len(v, dim, field)?;
    StateVector::new(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).map_err(|e| {
        ParseError::Field {
            field: field.into(),
            reason: e.to_string(),
        }
    })
}

fn span_projector(
    set: &[RawVector],
    dim: usize,
    field: &str,
) -> Result<Projector, ScenarioFileError> {
    if set.is_empty() {
        return Ok(Projector::zero(dim));
    }
    let vectors = set
        .iter()
        .enumerate()
        .map(|(i, v)| to_state(v, dim, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Projector::from_span(&vectors).map_err(|source| {
        ValidationError::Span {
            field: field.into(),
            source,
        }
        .into()
    })
}

/// Writes `scenario` in the file format, one vector per line. Spans are an
/// orthonormal basis of each first-outcome projector; floats use the shortest
/// representation that parses back to the same bits.
pub fn serialize_scenario(scenario: &MeasurementScenario) -> String {
    let mut out = String::new();
    let vector = |v: &[Complex64]| {
        let parts: Vec<String> = v
            .iter()
            .map(|c| format!("[{:?}, {:?}]", c.re, c.im))
            .collect();
        format!("[{}]", parts.join(", "))
    };
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"dim\": {},", scenario.dim());
    let _ = writeln!(out, "  \"state\": {},", vector(scenario.state().amps()));
    let _ = writeln!(out, "  \"measurements\": {{");
    let ms = [&scenario.gender, &scenario.treatment, &scenario.result];
    for (k, (name, m)) in MEASUREMENTS.iter().zip(ms).enumerate() {
        let labels = m.labels();
        let _ = writeln!(out, "    \"{name}\": {{");
        let _ = writeln!(
            out,
            "      \"labels\": [{}, {}],",
            serde_json::to_string(&labels[0]).expect("strings serialize"),
            serde_json::to_string(&labels[1]).expect("strings serialize"),
        );
        let basis = m.first().range_basis();
        if basis.is_empty() {
            let _ = writeln!(out, "      \"span\": []");
        } else {
            let _ = writeln!(out, "      \"span\": [");
            for (i, b) in basis.iter().enumerate() {
                let sep = if i + 1 < basis.len() { "," } else { "" };
                let _ = writeln!(out, "        {}{sep}", vector(b.amps()));
            }
            let _ = writeln!(out, "      ]");
        }
        let sep = if k + 1 < MEASUREMENTS.len() { "," } else { "" };
        let _ = writeln!(out, "    }}{sep}");
    }
    let _ = writeln!(out, "  }}");
    let _ = writeln!(out, "}}");
    out
}
