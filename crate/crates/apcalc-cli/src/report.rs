//! Report DTOs and rendering. JSON is the canonical output (struct field
//! order is fixed, rationals are canonical strings, maps are sorted), and
//! the text format is a line rendering of the same data.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use apcalc::group::RationalVector;
use apcalc::matrix::ExactMatrix;
use apcalc::Rational;

/// Canonical string form of a report element.
pub trait RenderElement {
    fn render(&self) -> String;
}

impl RenderElement for Rational {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl RenderElement for f64 {
    fn render(&self) -> String {
        format!("{self}")
    }
}

impl RenderElement for RationalVector {
    fn render(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl RenderElement for ExactMatrix {
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub command: String,
    pub status: String,
    pub kind: String,
    pub mode: String,
    pub tolerance: f64,
    pub horizon: usize,
    pub max_order: usize,
    pub min_windows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_coeffs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leading: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceDto {
    pub exponent: String,
    pub strict_order: usize,
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperDto {
    pub exponent: String,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiPairDto {
    pub order: usize,
    pub exponent: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PiDto {
    Symbolic { symbolic: String },
    Pairs(Vec<PiPairDto>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub command: String,
    pub variant: String,
    pub candidates: Vec<String>,
    pub h_max: usize,
    pub horizon: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper: Option<ProperDto>,
    pub evidence: Vec<EvidenceDto>,
    pub pi_hat: PiDto,
    pub pi: PiDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub theorem: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub detail: Value,
}

/// Plain-text rendering of any JSON report value.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_lines(value, "", &mut out);
    out
}

fn render_lines(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_lines(v, &key, out);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_object() && !i.is_array()) {
                let flat: Vec<String> = items.iter().map(render_scalar).collect();
                out.push_str(&format!("{prefix}: [{}]\n", flat.join(", ")));
            } else {
                for (i, item) in items.iter().enumerate() {
                    render_lines(item, &format!("{prefix}[{i}]"), out);
                }
            }
        }
        scalar => out.push_str(&format!("{prefix}: {}\n", render_scalar(scalar))),
    }
}

fn render_scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
