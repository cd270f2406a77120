//! Command-line front end: ingest sequences, matrices and metric spaces from
//! files, run order analyses, power classifications and theorem verifiers,
//! and emit deterministic reports.
//!
//! Exit codes: 0 pass, 1 claim or hypothesis violated, 2 inconclusive
//! (horizon or tolerance cannot decide), 3 input error.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use apcalc::diff::{certified_order, Sequence};
use apcalc::group::GroupElement;
use apcalc::isometry::{
    check_mq_isometry, rho, verify_power_gcd, verify_power_theorem, verify_product_theorem,
    Pair, ProductInput, ScalarValue, System, VerifyOptions,
};
use apcalc::operator::{
    is_m_isometry, left_n_inverse_check, verify_hs_perturbation, verify_inverse_perturbation,
    OperatorClass,
};
use apcalc::power::{classify, pi_sets, PiSets, PositiveSequence, PowerVariant};
use apcalc::ring::verify_ring_perturbation;
use apcalc::seqops::{decimate, diagonal, gcd_refine, subsequence_by_steps, DoubleSequence};
use apcalc::{Error, Rational, Result};

use input::SequenceInput;
use report::{
    render_text, AnalyzeReport, ClassifyReport, EvidenceDto, PiDto, PiPairDto, ProperDto,
    RenderElement, VerifyReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Diagonal,
    Steps,
    Decimate,
    GcdRefine,
    RingPerturbation,
    MqIsometry,
    Rho,
    Power,
    Product,
    PowerGcd,
    MIsometry,
    HsPerturbation,
    NInverse,
    InversePerturbation,
    Identities,
}

impl Theorem {
    fn name(&self) -> &'static str {
        match self {
            Theorem::Diagonal => "diagonal",
            Theorem::Steps => "steps",
            Theorem::Decimate => "decimate",
            Theorem::GcdRefine => "gcd-refine",
            Theorem::RingPerturbation => "ring-perturbation",
            Theorem::MqIsometry => "mq-isometry",
            Theorem::Rho => "rho",
            Theorem::Power => "power",
            Theorem::Product => "product",
            Theorem::PowerGcd => "power-gcd",
            Theorem::MIsometry => "m-isometry",
            Theorem::HsPerturbation => "hs-perturbation",
            Theorem::NInverse => "n-inverse",
            Theorem::InversePerturbation => "inverse-perturbation",
            Theorem::Identities => "identities",
        }
    }
}

#[derive(Parser)]
#[command(name = "apcalc", version, about = "Exact analysis of higher-order arithmetic progressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the order of a sequence prefix and report its term forms
    Analyze {
        seq_file: PathBuf,
        /// Truncate the input to its first N terms
        #[arg(long)]
        horizon: Option<usize>,
        /// Largest order to test (default: all the horizon supports)
        #[arg(long)]
        max_order: Option<usize>,
        /// Relative tolerance for float sequences
        #[arg(long)]
        tolerance: Option<f64>,
        /// Force zero tolerance
        #[arg(long)]
        exact: bool,
        /// Vanishing windows required for a certification
        #[arg(long, default_value_t = 2)]
        min_windows: usize,
        /// Exit 1 unless the certified order equals this value
        #[arg(long)]
        expect_order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify a positive sequence against candidate power exponents
    Classify {
        seq_file: PathBuf,
        /// Comma-separated exponents, e.g. "1/2,1,2,3"
        #[arg(long)]
        candidates: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        /// Relative tolerance for approximate-mode powers
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 2)]
        min_windows: usize,
        /// Truncation depth of the pi-set listings
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify a named theorem on an instance file
    Verify {
        theorem: Theorem,
        /// Instance file (optional for `identities`)
        instance_file: Option<PathBuf>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 1)]
        min_windows: usize,
        /// Cap on the number of sampled pairs
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    // Usage errors are input errors under the exit contract (3), while help
    // and version remain successful.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let code = match cli.command {
        Command::Analyze {
            seq_file,
            horizon,
            max_order,
            tolerance,
            exact,
            min_windows,
            expect_order,
            format,
        } => run_analyze(
            &seq_file, horizon, max_order, tolerance, exact, min_windows, expect_order, format,
        ),
        Command::Classify {
            seq_file,
            candidates,
            max_order,
            tolerance,
            exact,
            min_windows,
            k_max,
            horizon,
            format,
        } => run_classify(
            &seq_file, &candidates, max_order, tolerance, exact, min_windows, k_max, horizon,
            format,
        ),
        Command::Verify { theorem, instance_file, horizon, min_windows, pairs, format } => {
            run_verify(theorem, instance_file.as_deref(), horizon, min_windows, pairs, format)
        }
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn emit(format: Format, value: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", render_text(value)),
    }
}

fn truncate<E: GroupElement>(seq: &Sequence<E>, horizon: Option<usize>) -> Result<Sequence<E>> {
    match horizon {
        None => Ok(seq.clone()),
        Some(n) => {
            if n < 2 {
                return Err(Error::InvalidInput("horizon must be at least 2".into()));
            }
            if n > seq.len() {
                return Err(Error::InsufficientData(format!(
                    "horizon {n} exceeds the {} available terms",
                    seq.len()
                )));
            }
            Sequence::new(seq.elements()[..n].to_vec(), seq.tolerance())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_analyze(
    seq_file: &Path,
    horizon: Option<usize>,
    max_order: Option<usize>,
    tolerance: Option<f64>,
    exact: bool,
    min_windows: usize,
    expect_order: Option<usize>,
    format: Format,
) -> Result<u8> {
    if exact && tolerance.is_some_and(|t| t != 0.0) {
        return Err(Error::InvalidInput("--exact forces tolerance 0".into()));
    }
    let parsed = input::parse_sequence_text(&input::read_file(seq_file)?)?;
    let parsed = match (parsed, tolerance, exact) {
        (SequenceInput::Float(s), Some(t), false) => {
            SequenceInput::Float(Sequence::new(s.elements().to_vec(), t)?)
        }
        (SequenceInput::Float(s), _, true) => {
            SequenceInput::Float(Sequence::new(s.elements().to_vec(), 0.0)?)
        }
        (other, Some(t), _) if t != 0.0 => {
            let _ = other;
            return Err(Error::InvalidInput(
                "tolerance applies only to float sequences; exact kinds run at 0".into(),
            ));
        }
        (other, _, _) => other,
    };

    let (report, code) = match parsed {
        SequenceInput::Rational(s) => {
            analyze_generic(&truncate(&s, horizon)?, "rational", max_order, min_windows, expect_order)?
        }
        SequenceInput::Float(s) => {
            analyze_generic(&truncate(&s, horizon)?, "float", max_order, min_windows, expect_order)?
        }
        SequenceInput::Vector(s) => {
            analyze_generic(&truncate(&s, horizon)?, "vector", max_order, min_windows, expect_order)?
        }
        SequenceInput::Matrix(s) => {
            analyze_generic(&truncate(&s, horizon)?, "matrix", max_order, min_windows, expect_order)?
        }
    };
    emit(format, &serde_json::to_value(&report).expect("serializable"));
    Ok(code)
}

fn analyze_generic<E: GroupElement + RenderElement>(
    seq: &Sequence<E>,
    kind: &str,
    max_order: Option<usize>,
    min_windows: usize,
    expect_order: Option<usize>,
) -> Result<(AnalyzeReport, u8)> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::InsufficientData("need at least two terms".into()));
    }
    let h_max = max_order.unwrap_or_else(|| n.saturating_sub(1 + min_windows));
    let mode = if seq.tolerance() == 0.0 { "exact" } else { "approximate" };
    let mut report = AnalyzeReport {
        command: "analyze".into(),
        status: String::new(),
        kind: kind.into(),
        mode: mode.into(),
        tolerance: seq.tolerance(),
        horizon: n,
        max_order: h_max,
        min_windows,
        certified_order: None,
        strict: None,
        windows_checked: None,
        newton_coeffs: None,
        leading: None,
        monomial: None,
        detail: None,
    };
    let code = match certified_order(seq, h_max, min_windows) {
        Ok(r) => {
            report.status = "certified".into();
            report.certified_order = Some(r.order);
            report.strict = Some(r.strict);
            report.windows_checked = Some(r.windows_checked);
            report.newton_coeffs =
                Some(r.newton_coeffs.iter().map(RenderElement::render).collect());
            report.leading = Some(r.leading().render());
            report.monomial = r
                .monomial
                .as_ref()
                .map(|f| f.coefficients.iter().map(RenderElement::render).collect());
            match expect_order {
                Some(k) if k != r.order => 1,
                _ => 0,
            }
        }
        Err(Error::NotAnAp { h_max }) => {
            report.status = "not_an_ap".into();
            report.detail = Some(format!("no order up to {h_max} vanishes on this horizon"));
            if expect_order.is_some() {
                1
            } else {
                0
            }
        }
        Err(Error::Inconclusive(msg)) => {
            report.status = "inconclusive".into();
            report.detail = Some(msg);
            2
        }
        Err(other) => return Err(other),
    };
    Ok((report, code))
}

#[allow(clippy::too_many_arguments)]
fn run_classify(
    seq_file: &Path,
    candidates: &str,
    max_order: usize,
    tolerance: Option<f64>,
    exact: bool,
    min_windows: usize,
    k_max: usize,
    horizon: Option<usize>,
    format: Format,
) -> Result<u8> {
    let candidates = input::parse_candidates(candidates)?;
    let tol = if exact { 0.0 } else { tolerance.unwrap_or(1e-9) };
    let positive = match input::parse_sequence_text(&input::read_file(seq_file)?)? {
        SequenceInput::Rational(s) => {
            PositiveSequence::from_rationals(truncate(&s, horizon)?.elements().to_vec())?
        }
        SequenceInput::Float(s) => {
            let s = truncate(&s, horizon)?;
            PositiveSequence::from_floats(s.elements().to_vec(), s.tolerance().max(tol))?
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "classification needs a scalar sequence, got kind {:?}",
                other.kind()
            )))
        }
    };
    let horizon_used = positive.len();
    let cls = match classify(&positive, &candidates, max_order, tol, min_windows) {
        Ok(c) => c,
        Err(Error::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            return Ok(2);
        }
        Err(Error::InternalInconsistency(msg)) => {
            eprintln!("inconsistent evidence: {msg}");
            return Ok(1);
        }
        Err(e) => return Err(e),
    };

    let (variant, proper) = match &cls.variant {
        PowerVariant::Constant => ("constant", None),
        PowerVariant::NeverAp { .. } => ("never_ap", None),
        PowerVariant::Proper(p) => (
            "proper",
            Some(ProperDto { exponent: p.exponent.render(), order: p.order }),
        ),
    };
    let (pi_hat, pi) = match pi_sets(&cls, max_order, k_max) {
        PiSets::Empty => (PiDto::Pairs(Vec::new()), PiDto::Pairs(Vec::new())),
        PiSets::Constant { h_max } => (
            PiDto::Symbolic { symbolic: "{0} x (0,inf)".into() },
            PiDto::Symbolic { symbolic: format!("{{0..{h_max}}} x (0,inf)") },
        ),
        PiSets::Proper { pi_hat, pi } => (
            PiDto::Pairs(
                pi_hat
                    .into_iter()
                    .map(|(order, q)| PiPairDto { order, exponent: q.render() })
                    .collect(),
            ),
            PiDto::Pairs(
                pi.into_iter()
                    .map(|(order, q)| PiPairDto { order, exponent: q.render() })
                    .collect(),
            ),
        ),
    };
    let report = ClassifyReport {
        command: "classify".into(),
        variant: variant.into(),
        candidates: candidates.iter().map(RenderElement::render).collect(),
        h_max: max_order,
        horizon: horizon_used,
        tolerance: tol,
        proper,
        evidence: cls
            .evidence
            .iter()
            .map(|e| EvidenceDto {
                exponent: e.exponent.render(),
                strict_order: e.strict_order,
                approximate: e.approximate,
            })
            .collect(),
        pi_hat,
        pi,
    };
    emit(format, &serde_json::to_value(&report).expect("serializable"));
    Ok(0)
}

struct VerifyOutcome {
    status: &'static str,
    witness: Option<String>,
    detail: Value,
}

impl VerifyOutcome {
    fn pass(detail: Value) -> Self {
        VerifyOutcome { status: "pass", witness: None, detail }
    }

    fn violated(witness: String, detail: Value) -> Self {
        VerifyOutcome { status: "violated", witness: Some(witness), detail }
    }
}

fn run_verify(
    theorem: Theorem,
    instance_file: Option<&std::path::Path>,
    horizon: Option<usize>,
    min_windows: usize,
    pair_cap: Option<usize>,
    format: Format,
) -> Result<u8> {
    let instance: Option<Value> = match instance_file {
        Some(path) => Some(input::parse_json(&input::read_file(path)?)?),
        None => None,
    };
    if instance.is_none() && theorem != Theorem::Identities {
        return Err(Error::InvalidInput(format!(
            "theorem {} requires an instance file",
            theorem.name()
        )));
    }
    let opts = VerifyOptions { min_windows, ..VerifyOptions::default() };
    let outcome =
        dispatch_verify(theorem, instance.as_ref(), horizon, min_windows, pair_cap, &opts);
    let (outcome, code) = match outcome {
        Ok(o) => {
            let code = match o.status {
                "pass" => 0u8,
                "violated" => 1,
                _ => 2,
            };
            (o, code)
        }
        Err(e) => match e {
            Error::ClaimViolated(msg)
            | Error::HypothesisViolation(msg)
            | Error::InternalInconsistency(msg) => (VerifyOutcome::violated(msg, Value::Null), 1),
            Error::NotAnAp { h_max } => (
                VerifyOutcome::violated(
                    format!("no order up to {h_max} certifies on this horizon"),
                    Value::Null,
                ),
                1,
            ),
            Error::Inconclusive(msg) => (
                VerifyOutcome { status: "inconclusive", witness: Some(msg), detail: Value::Null },
                2,
            ),
            other => return Err(other),
        },
    };
    let report = VerifyReport {
        command: "verify".into(),
        theorem: theorem.name().into(),
        status: outcome.status.into(),
        witness: outcome.witness,
        detail: outcome.detail,
    };
    emit(format, &serde_json::to_value(&report).expect("serializable"));
    Ok(code)
}

fn require<'v>(instance: Option<&'v Value>, key: &str) -> Result<&'v Value> {
    instance
        .and_then(|v| v.get(key))
        .ok_or_else(|| Error::InvalidInput(format!("instance file is missing {key:?}")))
}

fn rational_field(instance: Option<&Value>, key: &str) -> Result<Rational> {
    input::rational_value(require(instance, key)?)
}

fn usize_field(instance: Option<&Value>, key: &str) -> Result<usize> {
    input::as_usize(require(instance, key)?, key)
}

/// Sequence value inside an instance file: a bare array of rationals or a
/// full `{"kind": ..., "elements": ...}` object.
fn rational_sequence_field(instance: Option<&Value>, key: &str) -> Result<Sequence<Rational>> {
    let v = require(instance, key)?;
    if let Some(items) = v.as_array() {
        let values = items
            .iter()
            .map(input::rational_value)
            .collect::<Result<Vec<_>>>()?;
        return Sequence::exact(values);
    }
    match input::parse_sequence_text(&v.to_string())? {
        SequenceInput::Rational(s) => Ok(s),
        _ => Err(Error::InvalidInput(format!("{key} must be a rational sequence"))),
    }
}

fn strict_order_of(seq: &Sequence<Rational>, min_windows: usize) -> Result<(usize, bool)> {
    let h_max = seq.len().saturating_sub(1 + min_windows);
    let report = certified_order(seq, h_max, min_windows)?;
    Ok((report.order, report.strict))
}

fn system_field(
    instance: Option<&Value>,
    pair_cap: Option<usize>,
) -> Result<(System, Option<Vec<Pair>>)> {
    let system = input::parse_system(require(instance, "system")?)?;
    let mut pairs = match instance.and_then(|v| v.get("pairs")) {
        Some(v) => Some(input::parse_pairs(v, &system)?),
        None => None,
    };
    if let Some(cap) = pair_cap {
        let full = pairs.unwrap_or_else(|| apcalc::isometry::default_pairs(&system));
        pairs = Some(full.into_iter().take(cap).collect());
    }
    Ok((system, pairs))
}

fn dispatch_verify(
    theorem: Theorem,
    instance: Option<&Value>,
    cli_horizon: Option<usize>,
    min_windows: usize,
    pair_cap: Option<usize>,
    opts: &VerifyOptions,
) -> Result<VerifyOutcome> {
    let horizon_or = |default: usize| -> Result<usize> {
        let from_file = match instance.and_then(|v| v.get("horizon")) {
            Some(v) => Some(input::as_usize(v, "horizon")?),
            None => None,
        };
        let h = cli_horizon.or(from_file).unwrap_or(default);
        if h < 2 {
            return Err(Error::InvalidInput("horizon must be at least 2".into()));
        }
        Ok(h)
    };

    match theorem {
        Theorem::Identities => {
            let i_max = match instance.and_then(|v| v.get("i_max")) {
                Some(v) => input::as_usize(v, "i_max")? as u64,
                None => 40,
            };
            let n_max = match instance.and_then(|v| v.get("n_max")) {
                Some(v) => input::as_usize(v, "n_max")? as u64,
                None => 30,
            };
            let mut checked = 0u64;
            use apcalc::exact::{verify_identity, Identity};
            for i in 1..=i_max {
                for j in 0..i {
                    if !verify_identity(&Identity::AlternatingPartialSum { i, j })? {
                        return Ok(VerifyOutcome::violated(
                            format!("alternating partial sum fails at (i,j) = ({i},{j})"),
                            Value::Null,
                        ));
                    }
                    checked += 1;
                }
            }
            for n in 1..=n_max {
                for h in 0..n {
                    for k in 0..=h {
                        if !verify_identity(&Identity::SkippedSum { n, h, k })? {
                            return Ok(VerifyOutcome::violated(
                                format!("skipped sum fails at (n,h,k) = ({n},{h},{k})"),
                                Value::Null,
                            ));
                        }
                        checked += 1;
                    }
                }
            }
            for n in 0..=n_max {
                for h in 0..=n_max {
                    if !verify_identity(&Identity::UnitySum { n, h })? {
                        return Ok(VerifyOutcome::violated(
                            format!("unity sum fails at (n,h) = ({n},{h})"),
                            Value::Null,
                        ));
                    }
                    checked += 1;
                }
            }
            Ok(VerifyOutcome::pass(json!({
                "checked": checked,
                "i_max": i_max,
                "n_max": n_max,
            })))
        }

        Theorem::GcdRefine => {
            let c = usize_field(instance, "c")?;
            let h = usize_field(instance, "h")?;
            let d = usize_field(instance, "d")?;
            let k = usize_field(instance, "k")?;
            let (e, l) = gcd_refine(c, h, d, k)?;
            Ok(VerifyOutcome::pass(json!({
                "e": e,
                "l": l,
                "certificate": "characteristic polynomial gcd verified",
            })))
        }

        Theorem::Decimate => {
            let seq = rational_sequence_field(instance, "sequence")?;
            let d = usize_field(instance, "d")?;
            let (base_order, base_strict) = strict_order_of(&seq, min_windows)?;
            if !base_strict {
                return Err(Error::HypothesisViolation(
                    "base sequence did not certify a strict order".into(),
                ));
            }
            let decimated = decimate(&seq, d)?;
            let (got, strict) = strict_order_of(&decimated, min_windows)?;
            let detail = json!({
                "d": d,
                "base_order": base_order,
                "decimated_order": got,
                "decimated_strict": strict,
            });
            if got == base_order && strict {
                Ok(VerifyOutcome::pass(detail))
            } else {
                Ok(VerifyOutcome::violated(
                    format!("decimated strict order {got} differs from base {base_order}"),
                    detail,
                ))
            }
        }

        Theorem::Steps => {
            let seq = rational_sequence_field(instance, "sequence")?;
            let steps_v = require(instance, "steps")?
                .as_array()
                .ok_or_else(|| Error::InvalidInput("steps must be an array".into()))?;
            let steps: Vec<usize> = steps_v
                .iter()
                .map(|v| input::as_usize(v, "step"))
                .collect::<Result<Vec<_>>>()?;
            let (h, base_strict) = strict_order_of(&seq, min_windows)?;
            if !base_strict {
                return Err(Error::HypothesisViolation(
                    "base sequence did not certify a strict order".into(),
                ));
            }
            let steps_seq = Sequence::exact(
                steps.iter().map(|&s| Rational::from_integer((s as i64).into())).collect(),
            )?;
            let (k, steps_strict) = strict_order_of(&steps_seq, min_windows)?;
            if !steps_strict {
                return Err(Error::HypothesisViolation(
                    "steps did not certify a strict order".into(),
                ));
            }
            let sub = subsequence_by_steps(&seq, &steps)?;
            let (got, sub_strict) = strict_order_of(&sub, min_windows)?;
            let expected = h * (k + 1);
            let detail = json!({
                "base_order": h,
                "steps_order": k,
                "expected_order": expected,
                "observed_order": got,
                "observed_strict": sub_strict,
                "subsequence_length": sub.len(),
            });
            if got == expected && sub_strict {
                Ok(VerifyOutcome::pass(detail))
            } else {
                Ok(VerifyOutcome::violated(
                    format!("subsequence certified {got}, expected {expected}"),
                    detail,
                ))
            }
        }

        Theorem::Diagonal => {
            let grid_v = require(instance, "grid")?
                .as_array()
                .ok_or_else(|| Error::InvalidInput("grid must be an array of rows".into()))?;
            let mut grid = Vec::with_capacity(grid_v.len());
            for row in grid_v {
                let cells = row
                    .as_array()
                    .ok_or_else(|| Error::InvalidInput("grid row must be an array".into()))?;
                grid.push(
                    cells
                        .iter()
                        .map(input::rational_value)
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            let dseq = DoubleSequence::exact(grid)?;
            let report = diagonal(&dseq, min_windows)?;
            let diag = certified_order(&report.diagonal, report.order_bound, min_windows)
                .map_err(|e| match e {
                    Error::NotAnAp { .. } => Error::ClaimViolated(format!(
                        "diagonal exceeds the order bound {}",
                        report.order_bound
                    )),
                    other => other,
                })?;
            Ok(VerifyOutcome::pass(json!({
                "grid_size": dseq.size(),
                "row_order": report.row_order,
                "col_order": report.col_order,
                "order_bound": report.order_bound,
                "diagonal_order": diag.order,
                "diagonal_strict": diag.strict,
            })))
        }

        Theorem::RingPerturbation => {
            let y = input::parse_matrix_value(require(instance, "y")?)?;
            let x = input::parse_matrix_value(require(instance, "x")?)?;
            let a = input::parse_matrix_value(require(instance, "a")?)?;
            let b = input::parse_matrix_value(require(instance, "b")?)?;
            let horizon = horizon_or(16)?;
            let report = verify_ring_perturbation(&y, &x, &a, &b, horizon, min_windows, y.dim())?;
            Ok(VerifyOutcome::pass(json!({
                "index_a": report.index_a,
                "index_b": report.index_b,
                "base_order": report.base_order,
                "order_bound": report.order_bound,
                "perturbed_order": report.perturbed_order,
                "strict_attained": report.strict_attained,
                "certificate_nonzero": report.certificate_nonzero,
                "certificate_consistent": report.certificate_consistent,
                "corollary_certificate_nonzero": report.corollary_certificate_nonzero,
            })))
        }

        Theorem::MqIsometry => {
            let (system, pairs) = system_field(instance, pair_cap)?;
            let m = usize_field(instance, "m")?;
            let q = rational_field(instance, "q")?;
            let horizon = horizon_or(m + 3 + min_windows)?;
            let report = check_mq_isometry(&system, m, &q, horizon, pairs, opts)?;
            Ok(VerifyOutcome::pass(json!({
                "m": m,
                "q": q.render(),
                "horizon": horizon,
                "pairs_checked": report.pairs_checked,
                "aggregate_m": report.aggregate_m,
                "strict_witness": report.strict_witness.map(|i| report.per_pair[i].pair.label()),
                "proper": report
                    .proper
                    .map(|(pm, pq)| json!({"m": pm, "q": pq.render()})),
                "finiteness_flags": report.finiteness_flags.len(),
            })))
        }

        Theorem::Rho => {
            let (system, _) = system_field(instance, None)?;
            let m = usize_field(instance, "m")?;
            let q = rational_field(instance, "q")?;
            let pair = match &system {
                System::Metric { .. } => {
                    Pair::Points(usize_field(instance, "x")?, usize_field(instance, "y")?)
                }
                System::Normed { .. } => Pair::Vectors(
                    input::parse_gaussian_vector(require(instance, "x")?)?,
                    input::parse_gaussian_vector(require(instance, "y")?)?,
                ),
            };
            let report = rho(&system, m, &q, &pair)?;
            let rho_q = match &report.rho_q {
                ScalarValue::Exact(r) => Value::String(r.render()),
                ScalarValue::Approx(v) => json!(v),
            };
            let detail = json!({
                "m": m,
                "q": q.render(),
                "rho_q": rho_q,
                "rho": report.rho,
                "leading_match": report.leading_match,
            });
            if report.leading_match {
                Ok(VerifyOutcome::pass(detail))
            } else {
                Ok(VerifyOutcome::violated(
                    "rho^q does not match the fitted leading coefficient".into(),
                    detail,
                ))
            }
        }

        Theorem::Power => {
            let (system, pairs) = system_field(instance, pair_cap)?;
            let k = usize_field(instance, "k")?;
            let m = usize_field(instance, "m")?;
            let q = rational_field(instance, "q")?;
            let horizon = horizon_or(m + 3 + min_windows)?;
            let report = verify_power_theorem(&system, k, m, &q, horizon, pairs, opts)?;
            Ok(VerifyOutcome::pass(json!({
                "k": k,
                "m": m,
                "q": q.render(),
                "aggregate_m": report.aggregate_m,
                "strict_witness": report.strict_witness.map(|i| report.per_pair[i].pair.label()),
            })))
        }

        Theorem::PowerGcd => {
            let (system, pairs) = system_field(instance, pair_cap)?;
            let c = usize_field(instance, "c")?;
            let m = usize_field(instance, "m")?;
            let d = usize_field(instance, "d")?;
            let l = usize_field(instance, "l")?;
            let q = rational_field(instance, "q")?;
            let horizon = horizon_or(m.max(l) + 3 + min_windows)?;
            let report = verify_power_gcd(&system, c, m, d, l, &q, horizon, pairs, opts)?;
            Ok(VerifyOutcome::pass(json!({
                "e": report.e,
                "h": report.h,
                "aggregate_m": report.report.aggregate_m,
            })))
        }

        Theorem::Product => {
            let n = usize_field(instance, "n")?;
            let m = usize_field(instance, "m")?;
            let q = rational_field(instance, "q")?;
            let inst = instance.expect("presence checked by run_verify");
            let product_input = if inst.get("dist").is_some() {
                let metric = input::parse_metric_system(&json!({
                    "dist": inst.get("dist").cloned().unwrap_or(Value::Null),
                    "map": inst.get("map_t").cloned().unwrap_or(Value::Null),
                }))?;
                let System::Metric { space, map: t_map } = metric else { unreachable!() };
                let s_map = require(instance, "map_s")?
                    .as_array()
                    .ok_or_else(|| Error::InvalidInput("map_s must be an array".into()))?
                    .iter()
                    .map(|v| input::as_usize(v, "map_s entry"))
                    .collect::<Result<Vec<_>>>()?;
                ProductInput::Metric { space, s_map, t_map }
            } else {
                ProductInput::Normed {
                    s: input::parse_matrix_value(require(instance, "s")?)?,
                    t: input::parse_matrix_value(require(instance, "t")?)?,
                    norm: input::parse_norm(inst.get("norm"))?,
                }
            };
            let horizon = horizon_or(m + n + 2 + min_windows)?;
            let report = verify_product_theorem(&product_input, n, m, &q, horizon, None, opts)?;
            Ok(VerifyOutcome::pass(json!({
                "n": n,
                "m": m,
                "q": q.render(),
                "product_m": report.product_m,
                "aggregate_m": report.aggregate_m,
                "max_diagonal_order": report.diagonal_orders.iter().max(),
            })))
        }

        Theorem::MIsometry => {
            let t = input::parse_matrix_value(require(instance, "t")?)?;
            let m = usize_field(instance, "m")?;
            let class = is_m_isometry(&t, m)?;
            let detail = json!({
                "m": m,
                "classification": class_name(class),
            });
            if class == OperatorClass::No {
                Ok(VerifyOutcome::violated(format!("defect(T, {m}) is nonzero"), detail))
            } else {
                Ok(VerifyOutcome::pass(detail))
            }
        }

        Theorem::NInverse => {
            let s = input::parse_matrix_value(require(instance, "s")?)?;
            let t = input::parse_matrix_value(require(instance, "t")?)?;
            let n = usize_field(instance, "n")?;
            let class = left_n_inverse_check(&s, &t, n)?;
            let detail = json!({
                "n": n,
                "classification": class_name(class),
            });
            if class == OperatorClass::No {
                Ok(VerifyOutcome::violated(
                    format!("the left {n}-inverse identity fails"),
                    detail,
                ))
            } else {
                Ok(VerifyOutcome::pass(detail))
            }
        }

        Theorem::HsPerturbation => {
            let t = input::parse_matrix_value(require(instance, "t")?)?;
            let q = input::parse_matrix_value(require(instance, "q")?)?;
            let report = verify_hs_perturbation(&t, &q)?;
            Ok(VerifyOutcome::pass(json!({
                "m": report.m,
                "n": report.n,
                "bound": report.bound,
                "certificate_nonzero": report.certificate_nonzero,
                "strict": report.strict,
                "consistent": report.consistent,
            })))
        }

        Theorem::InversePerturbation => {
            let s = input::parse_matrix_value(require(instance, "s")?)?;
            let t = input::parse_matrix_value(require(instance, "t")?)?;
            let p = input::parse_matrix_value(require(instance, "p")?)?;
            let q = input::parse_matrix_value(require(instance, "q")?)?;
            let report = verify_inverse_perturbation(&s, &t, &p, &q)?;
            Ok(VerifyOutcome::pass(json!({
                "n": report.n,
                "h": report.h,
                "k": report.k,
                "bound": report.bound,
                "certificate_nonzero": report.certificate_nonzero,
                "strict": report.strict,
                "consistent": report.consistent,
            })))
        }
    }
}

fn class_name(class: OperatorClass) -> &'static str {
    match class {
        OperatorClass::No => "no",
        OperatorClass::NonStrict => "non_strict",
        OperatorClass::Strict => "strict",
    }
}
