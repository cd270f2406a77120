//! File ingestion: sequences (JSON with CSV fallback), matrices, metric
//! spaces, and per-theorem instance files.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use apcalc::diff::Sequence;
use apcalc::exact::parse_rational;
use apcalc::group::RationalVector;
use apcalc::isometry::{FiniteMetricSpace, Norm, Pair, System};
use apcalc::matrix::{ExactMatrix, GaussianVector};
use apcalc::{Error, GaussianRational, Rational, Result};

/// A parsed sequence of any supported element kind.
pub enum SequenceInput {
    Rational(Sequence<Rational>),
    Float(Sequence<f64>),
    Vector(Sequence<RationalVector>),
    Matrix(Sequence<ExactMatrix>),
}

impl SequenceInput {
    pub fn kind(&self) -> &'static str {
        match self {
            SequenceInput::Rational(_) => "rational",
            SequenceInput::Float(_) => "float",
            SequenceInput::Vector(_) => "vector",
            SequenceInput::Matrix(_) => "matrix",
        }
    }

}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

fn field<'v>(obj: &'v Value, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

pub fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be a nonnegative integer")))
}

/// Rational from a JSON string ("p/q"), integer, or float (converted via its
/// exact binary value).
pub fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(f) = n.as_f64() {
                Rational::from_float(f)
                    .ok_or_else(|| Error::InvalidInput(format!("non-finite number {f}")))
            } else {
                Err(Error::InvalidInput(format!("cannot read {n} as rational")))
            }
        }
        other => Err(Error::InvalidInput(format!("cannot read {other} as rational"))),
    }
}

pub fn gaussian_value(v: &Value) -> Result<GaussianRational> {
    match v {
        Value::String(s) => GaussianRational::from_str(s),
        _ => rational_value(v).map(GaussianRational::from_rational),
    }
}

fn float_value(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::InvalidInput(format!("cannot read {v} as float")))
}

pub fn parse_matrix_value(v: &Value) -> Result<ExactMatrix> {
    let rows_value = if v.is_object() { field(v, "entries")? } else { v };
    let rows = rows_value
        .as_array()
        .ok_or_else(|| Error::InvalidInput("matrix entries must be an array of rows".into()))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::InvalidInput("matrix row must be an array".into()))?;
        parsed.push(cells.iter().map(gaussian_value).collect::<Result<Vec<_>>>()?);
    }
    let m = ExactMatrix::from_rows(parsed)?;
    if let Some(dim) = v.get("dim") {
        if as_usize(dim, "dim")? != m.dim() {
            return Err(Error::InvalidInput(format!(
                "declared dim {} does not match {} rows",
                dim,
                m.dim()
            )));
        }
    }
    Ok(m)
}

pub fn parse_gaussian_vector(v: &Value) -> Result<GaussianVector> {
    let cells = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("vector must be an array".into()))?;
    Ok(GaussianVector(
        cells.iter().map(gaussian_value).collect::<Result<Vec<_>>>()?,
    ))
}

/// Sequence file: JSON `{"kind": ..., "elements": [...]}` with an optional
/// `tolerance`, or a CSV fallback for scalar kinds.
pub fn parse_sequence_text(text: &str) -> Result<SequenceInput> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        parse_sequence_json(&parse_json(text)?)
    } else {
        parse_sequence_csv(text)
    }
}

fn parse_sequence_json(v: &Value) -> Result<SequenceInput> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| Error::InvalidInput("kind must be a string".into()))?;
    let elements = field(v, "elements")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("elements must be an array".into()))?;
    let tolerance = match v.get("tolerance") {
        Some(t) => float_value(t)?,
        None => 0.0,
    };
    match kind {
        "rational" => {
            let values = elements.iter().map(rational_value).collect::<Result<Vec<_>>>()?;
            Ok(SequenceInput::Rational(Sequence::exact(values)?))
        }
        "float" => {
            let values = elements.iter().map(float_value).collect::<Result<Vec<_>>>()?;
            Ok(SequenceInput::Float(Sequence::new(values, tolerance)?))
        }
        "vector" => {
            let values = elements
                .iter()
                .map(|e| {
                    let cells = e
                        .as_array()
                        .ok_or_else(|| Error::InvalidInput("vector element must be an array".into()))?;
                    Ok(RationalVector::new(
                        cells.iter().map(rational_value).collect::<Result<Vec<_>>>()?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SequenceInput::Vector(Sequence::exact(values)?))
        }
        "matrix" => {
            let values = elements
                .iter()
                .map(parse_matrix_value)
                .collect::<Result<Vec<_>>>()?;
            Ok(SequenceInput::Matrix(Sequence::exact(values)?))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown sequence kind {other:?} (expected rational|float|vector|matrix)"
        ))),
    }
}

fn parse_sequence_csv(text: &str) -> Result<SequenceInput> {
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::InvalidInput("empty sequence file".into()));
    }
    let rationals: std::result::Result<Vec<Rational>, _> =
        tokens.iter().map(|t| parse_rational(t)).collect();
    if let Ok(values) = rationals {
        return Ok(SequenceInput::Rational(Sequence::exact(values)?));
    }
    let floats: std::result::Result<Vec<f64>, _> =
        tokens.iter().map(|t| t.parse::<f64>()).collect();
    match floats {
        Ok(values) if values.iter().all(|v| v.is_finite()) => {
            Ok(SequenceInput::Float(Sequence::new(values, 0.0)?))
        }
        _ => Err(Error::InvalidInput(
            "sequence tokens are neither rationals nor floats".into(),
        )),
    }
}

/// Metric-space file: `{"points": P, "dist": [[...]], "map": [...]}`.
pub fn parse_metric_system(v: &Value) -> Result<System> {
    let dist_rows = field(v, "dist")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("dist must be an array of rows".into()))?;
    let mut dist = Vec::with_capacity(dist_rows.len());
    for row in dist_rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::InvalidInput("dist row must be an array".into()))?;
        dist.push(cells.iter().map(rational_value).collect::<Result<Vec<_>>>()?);
    }
    if let Some(p) = v.get("points") {
        if as_usize(p, "points")? != dist.len() {
            return Err(Error::InvalidInput(
                "declared point count does not match the distance matrix".into(),
            ));
        }
    }
    let space = FiniteMetricSpace::new(dist)?;
    let map = field(v, "map")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("map must be an array of point indices".into()))?
        .iter()
        .map(|t| as_usize(t, "map entry"))
        .collect::<Result<Vec<_>>>()?;
    System::metric(space, map)
}

pub fn parse_norm(v: Option<&Value>) -> Result<Norm> {
    match v {
        None => Ok(Norm::L2),
        Some(Value::String(s)) => match s.as_str() {
            "l1" | "L1" | "1" => Ok(Norm::L1),
            "l2" | "L2" | "2" => Ok(Norm::L2),
            "linf" | "Linf" | "inf" => Ok(Norm::LInf),
            other => Err(Error::InvalidInput(format!("unknown norm {other:?}"))),
        },
        Some(Value::Number(n)) => {
            let p = n.as_f64().unwrap_or(f64::NAN);
            if p >= 1.0 {
                Ok(Norm::Lp(p))
            } else {
                Err(Error::InvalidInput("norm exponent must be >= 1".into()))
            }
        }
        Some(other) => Err(Error::InvalidInput(format!("cannot read {other} as a norm"))),
    }
}

/// System value: `{"kind":"normed","matrix":...,"norm":...}` or
/// `{"kind":"metric","dist":...,"map":...}`.
pub fn parse_system(v: &Value) -> Result<System> {
    match field(v, "kind")?.as_str() {
        Some("normed") => {
            let matrix = parse_matrix_value(field(v, "matrix")?)?;
            let norm = parse_norm(v.get("norm"))?;
            Ok(System::normed(matrix, norm))
        }
        Some("metric") => parse_metric_system(v),
        _ => Err(Error::InvalidInput(
            "system kind must be \"normed\" or \"metric\"".into(),
        )),
    }
}

/// Pair list: `[[x, y], ...]` with vectors in normed mode and point indices
/// in metric mode.
pub fn parse_pairs(v: &Value, system: &System) -> Result<Vec<Pair>> {
    let entries = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("pairs must be an array".into()))?;
    entries
        .iter()
        .map(|e| {
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::InvalidInput("each pair must be a two-element array".into()))?;
            match system {
                System::Metric { .. } => Ok(Pair::Points(
                    as_usize(&pair[0], "pair point")?,
                    as_usize(&pair[1], "pair point")?,
                )),
                System::Normed { .. } => Ok(Pair::Vectors(
                    parse_gaussian_vector(&pair[0])?,
                    parse_gaussian_vector(&pair[1])?,
                )),
            }
        })
        .collect()
}

/// Comma-separated rational exponents from the command line.
pub fn parse_candidates(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(Error::InvalidInput("candidate list is empty".into()))
            } else {
                Ok(v)
            }
        })
}
