//! Positive numerical sequences and their powers: eventual monotonicity, the
//! `rk = hq` consistency law, gcd reduction of exponents, and the three-way
//! classification (never a progression / constant / proper order).
//!
//! Integer exponents on rational data stay exact; fractional exponents force
//! approximate mode, since `a_n^(1/2)` is irrational in general. The default
//! relative tolerance for that downgrade is [`DEFAULT_APPROX_TOLERANCE`].

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diff::{certified_order, OrderReport, Sequence};
use crate::error::{Error, Result};
use crate::exact::{rational_pow, Int, Rational};
use crate::group::ScalarElement;

/// Relative tolerance used when a power forces approximate mode.
pub const DEFAULT_APPROX_TOLERANCE: f64 = 1e-9;

/// Finite prefix of a strictly positive numerical sequence, exact or
/// approximate.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveSequence {
    Exact(Sequence<Rational>),
    Approx(Sequence<f64>),
}

impl PositiveSequence {
    pub fn from_rationals(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(|v| !Signed::is_positive(v)) {
            return Err(Error::InvalidInput("positive sequence requires every value > 0".into()));
        }
        Ok(PositiveSequence::Exact(Sequence::exact(values)?))
    }

    pub fn from_floats(values: Vec<f64>, tolerance: f64) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("positive sequence requires every value > 0".into()));
        }
        Ok(PositiveSequence::Approx(Sequence::new(values, tolerance)?))
    }

    pub fn len(&self) -> usize {
        match self {
            PositiveSequence::Exact(s) => s.len(),
            PositiveSequence::Approx(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_approximate(&self) -> bool {
        matches!(self, PositiveSequence::Approx(_))
    }

    fn to_floats(&self) -> Vec<f64> {
        match self {
            PositiveSequence::Exact(s) => {
                s.elements().iter().map(|r| ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY)).collect()
            }
            PositiveSequence::Approx(s) => s.elements().to_vec(),
        }
    }

    /// Whether all values coincide (exactly, or within the relative
    /// tolerance in approximate mode).
    pub fn is_constant(&self, tolerance: f64) -> bool {
        match self {
            PositiveSequence::Exact(s) => {
                let first = &s.elements()[0];
                s.elements().iter().all(|v| v == first)
            }
            PositiveSequence::Approx(s) => {
                let first = s.elements()[0];
                s.elements()
                    .iter()
                    .all(|v| (v - first).abs() <= tolerance * first.abs().max(v.abs()))
            }
        }
    }

    /// Order certification dispatched over the exactness mode.
    pub fn analyze(&self, h_max: usize, min_windows: usize) -> Result<ScalarReport> {
        match self {
            PositiveSequence::Exact(s) => {
                Ok(ScalarReport::Exact(certified_order(s, h_max, min_windows)?))
            }
            PositiveSequence::Approx(s) => {
                Ok(ScalarReport::Approx(certified_order(s, h_max, min_windows)?))
            }
        }
    }
}

/// Order report over either scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarReport {
    Exact(OrderReport<Rational>),
    Approx(OrderReport<f64>),
}

impl ScalarReport {
    pub fn order(&self) -> usize {
        match self {
            ScalarReport::Exact(r) => r.order,
            ScalarReport::Approx(r) => r.order,
        }
    }

    pub fn strict(&self) -> bool {
        match self {
            ScalarReport::Exact(r) => r.strict,
            ScalarReport::Approx(r) => r.strict,
        }
    }

    pub fn windows_checked(&self) -> usize {
        match self {
            ScalarReport::Exact(r) => r.windows_checked,
            ScalarReport::Approx(r) => r.windows_checked,
        }
    }

    /// Monomial coefficients as rationals (exact for both kinds: finite
    /// floats are dyadic rationals).
    pub fn monomial_rationals(&self) -> Vec<Rational> {
        match self {
            ScalarReport::Exact(r) => {
                r.monomial.as_ref().expect("divisible kind").coefficients.clone()
            }
            ScalarReport::Approx(r) => r
                .monomial
                .as_ref()
                .expect("divisible kind")
                .coefficients
                .iter()
                .map(|c| c.to_rational())
                .collect(),
        }
    }
}

/// Elementwise power `a^q`. Integer exponents keep exact mode; fractional
/// exponents downgrade to approximate mode with the default tolerance.
pub fn power_seq(a: &PositiveSequence, q: &Rational) -> Result<PositiveSequence> {
    if !Signed::is_positive(q) {
        return Err(Error::InvalidInput(format!("exponent must be positive, got {q}")));
    }
    match a {
        PositiveSequence::Exact(s) if q.is_integer() => {
            let e = q
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::InvalidInput("exponent too large".into()))?;
            let values = s.elements().iter().map(|v| rational_pow(v, e)).collect();
            PositiveSequence::from_rationals(values)
        }
        _ => {
            let qf = ToPrimitive::to_f64(q).ok_or_else(|| Error::InvalidInput("exponent overflow".into()))?;
            let tol = match a {
                PositiveSequence::Exact(_) => DEFAULT_APPROX_TOLERANCE,
                PositiveSequence::Approx(s) => s.tolerance().max(DEFAULT_APPROX_TOLERANCE),
            };
            let values: Vec<f64> = a.to_floats().iter().map(|v| v.powf(qf)).collect();
            PositiveSequence::from_floats(values, tol)
        }
    }
}

/// Result of [`eventual_monotonicity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    /// The fitted polynomial satisfies `p(n+1) >= p(n)` for all `n >= n0`,
    /// with `n0` minimal over the nonnegative integers.
    IncreasingFrom(u64),
}

/// Computes an explicit threshold after which the fitted polynomial of a
/// positive progression is nondecreasing.
///
/// The forward difference `p(n+1) - p(n)` has positive leading coefficient
/// whenever the fitted degree is at least one; a Cauchy root bound caps the
/// region that needs scanning, and the scan below it is exact.
pub fn eventual_monotonicity<E: ScalarElement>(report: &OrderReport<E>) -> Result<Monotonicity> {
    let form = report
        .monomial
        .as_ref()
        .ok_or_else(|| Error::UnsupportedForm("monomial form unavailable".into()))?;
    let gamma: Vec<Rational> = form.coefficients.iter().map(|c| c.to_rational()).collect();
    let degree = gamma.iter().rposition(|c| !Zero::is_zero(c)).unwrap_or(0);
    if degree == 0 {
        return Ok(Monotonicity::Constant);
    }
    if !Signed::is_positive(&gamma[degree]) {
        return Err(Error::HypothesisViolation(format!(
            "fitted leading coefficient {} is not positive; the prefix cannot extend \
             to a positive progression",
            gamma[degree]
        )));
    }
    // q(n) = p(n+1) - p(n) = sum_k gamma_k ((n+1)^k - n^k), degree - 1.
    let mut q = vec![Rational::zero(); degree];
    for (k, g) in gamma.iter().enumerate().skip(1) {
        for j in 0..k {
            q[j] += g * Rational::from(crate::exact::binomial(k as u64, j as u64));
        }
    }
    let dq = q.iter().rposition(|c| !Zero::is_zero(c)).expect("positive lead");
    let lead = q[dq].clone();
    // All real roots of q lie in |n| <= 1 + max |c_j / c_dq|.
    let mut bound = Rational::one();
    for c in &q[..dq] {
        let ratio = (c / &lead).abs();
        if ratio > bound {
            bound = ratio;
        }
    }
    let bound = bound + Rational::one();
    let n1 = bound.ceil().to_integer().to_u64().unwrap_or(u64::MAX).min(1 << 32);
    let eval = |n: u64| -> Rational {
        let arg = Rational::from(Int::from(n));
        let mut acc = Rational::zero();
        for c in q.iter().rev() {
            acc = acc * &arg + c;
        }
        acc
    };
    // Minimal n0 with q(n) >= 0 on [n0, n1]; beyond n1 the bound guarantees it.
    let mut n0 = n1;
    for n in (0..n1).rev() {
        if eval(n).is_negative() {
            break;
        }
        n0 = n;
    }
    Ok(Monotonicity::IncreasingFrom(n0))
}

/// The power-law consistency test `r k = h q` for two certified powers.
pub fn consistency_rk_hq(q: &Rational, k: usize, r: &Rational, h: usize) -> bool {
    r * Rational::from(Int::from(k)) == q * Rational::from(Int::from(h))
}

/// Reduces two consistent power certifications `(q, k)` and `(r, h)` to the
/// gcd pair `(t, d)` with `d = gcd(k, h)` and `t = qd/k = rd/h`.
pub fn reduce_gcd(q: &Rational, k: usize, r: &Rational, h: usize) -> Result<(Rational, usize)> {
    if k == 0 || h == 0 {
        return Err(Error::InvalidInput("gcd reduction requires k, h >= 1".into()));
    }
    if !consistency_rk_hq(q, k, r, h) {
        return Err(Error::InvalidInput(format!(
            "inconsistent inputs: {r} * {k} != {q} * {h}"
        )));
    }
    let d = k.gcd(&h);
    let t = q * Rational::new(Int::from(d), Int::from(k));
    let t_alt = r * Rational::new(Int::from(d), Int::from(h));
    if t != t_alt {
        return Err(Error::InternalInconsistency(
            "gcd reduction produced two different exponents".into(),
        ));
    }
    Ok((t, d))
}

/// Product rule for powers: exponents add, strict orders add.
pub fn combine(q: &Rational, k: usize, r: &Rational, h: usize) -> (Rational, usize) {
    (q + r, k + h)
}

/// Minimal exponent and order of a proper power classification: `a^s` has
/// strict order `l`, and every certified power is `(ks, kl)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProperOrder {
    pub exponent: Rational,
    pub order: usize,
}

/// One certified power `(q, strict order)` observed during classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub exponent: Rational,
    pub strict_order: usize,
    pub approximate: bool,
}

/// The trichotomy outcome. `NeverAp` is always relative to the candidate set
/// and horizon; the universal negative is not decidable from finite data.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerVariant {
    NeverAp { candidates: Vec<Rational>, h_max: usize },
    Constant,
    Proper(ProperOrder),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerClassification {
    pub variant: PowerVariant,
    pub evidence: Vec<Evidence>,
}

/// Classifies a positive sequence against a candidate exponent set:
/// constant, never a progression (for these candidates on this horizon), or
/// proper order `(s, l)` obtained by gcd-folding all certified powers.
pub fn classify(
    a: &PositiveSequence,
    candidates: &[Rational],
    h_max: usize,
    tolerance: f64,
    min_windows: usize,
) -> Result<PowerClassification> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("candidate exponent set must be nonempty".into()));
    }
    if candidates.iter().any(|q| !Signed::is_positive(q)) {
        return Err(Error::InvalidInput("candidate exponents must be positive".into()));
    }
    if a.is_constant(tolerance) {
        return Ok(PowerClassification { variant: PowerVariant::Constant, evidence: Vec::new() });
    }
    let mut sorted: Vec<Rational> = candidates.to_vec();
    sorted.sort();
    sorted.dedup();

    let mut evidence: Vec<Evidence> = Vec::new();
    for q in &sorted {
        let powered = power_seq(a, q)?;
        match powered.analyze(h_max, min_windows) {
            Ok(report) => {
                if report.strict() {
                    evidence.push(Evidence {
                        exponent: q.clone(),
                        strict_order: report.order(),
                        approximate: powered.is_approximate(),
                    });
                }
            }
            Err(Error::NotAnAp { .. }) => {}
            Err(other) => return Err(other),
        }
    }
    if evidence.is_empty() {
        return Ok(PowerClassification {
            variant: PowerVariant::NeverAp { candidates: sorted, h_max },
            evidence,
        });
    }
    // Fold all certified pairs down to the minimal (s, l).
    let (mut s, mut l) = (evidence[0].exponent.clone(), evidence[0].strict_order);
    for e in &evidence[1..] {
        if l == 0 || e.strict_order == 0 {
            return Err(Error::InternalInconsistency(
                "non-constant sequence certified a strict order 0 power".into(),
            ));
        }
        if !consistency_rk_hq(&s, l, &e.exponent, e.strict_order) {
            return Err(Error::InternalInconsistency(format!(
                "evidence ({}, {}) and ({}, {}) violate rk = hq; \
                 approximate-mode tolerance may be misconfigured",
                s, l, e.exponent, e.strict_order
            )));
        }
        let (t, d) = reduce_gcd(&s, l, &e.exponent, e.strict_order)?;
        s = t;
        l = d;
    }
    // Every certified pair must sit on the (ks, kl) ladder.
    for e in &evidence {
        let ratio = &e.exponent / &s;
        let on_ladder = ratio.is_integer()
            && Signed::is_positive(&ratio)
            && {
                let k = ratio.to_integer().to_u64().unwrap_or(0) as usize;
                e.strict_order == k * l
            };
        if !on_ladder {
            return Err(Error::InternalInconsistency(format!(
                "evidence ({}, {}) is not a multiple of the proper order ({s}, {l})",
                e.exponent, e.strict_order
            )));
        }
    }
    Ok(PowerClassification {
        variant: PowerVariant::Proper(ProperOrder { exponent: s, order: l }),
        evidence,
    })
}

/// Truncated listings of the order/exponent sets of a classification.
#[derive(Debug, Clone, PartialEq)]
pub enum PiSets {
    /// Never a progression: both sets empty.
    Empty,
    /// Constant: strict pairs are `{0} x (0, inf)` (symbolic); the non-strict
    /// set adds every order up to `h_max`.
    Constant { h_max: usize },
    /// Proper order: explicit pairs `(k l, k s)` and their order closures.
    Proper {
        /// Strict pairs `(kl, ks)` for `1 <= k <= k_max`.
        pi_hat: Vec<(usize, Rational)>,
        /// Pairs `(h, ks)` for `1 <= k <= k_max`, `kl <= h <= h_max`.
        pi: Vec<(usize, Rational)>,
    },
}

/// Enumerates the truncated `pi` and `pi_hat` sets of a classification.
pub fn pi_sets(cls: &PowerClassification, h_max: usize, k_max: usize) -> PiSets {
    match &cls.variant {
        PowerVariant::NeverAp { .. } => PiSets::Empty,
        PowerVariant::Constant => PiSets::Constant { h_max },
        PowerVariant::Proper(p) => {
            let mut pi_hat = Vec::new();
            let mut pi = Vec::new();
            for k in 1..=k_max {
                let exponent = &p.exponent * Rational::from(Int::from(k));
                pi_hat.push((k * p.order, exponent.clone()));
                for h in (k * p.order)..=h_max {
                    pi.push((h, exponent.clone()));
                }
            }
            PiSets::Proper { pi_hat, pi }
        }
    }
}
