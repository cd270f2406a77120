//! The difference operator `D`, certified order detection on finite
//! prefixes, and the equivalent general-term representations of a polynomial
//! sequence (Newton, Lagrange normal form, barycentric, monomial).
//!
//! A sequence is an arithmetic progression of order `h` when `D^(h+1)`
//! annihilates it. On a finite prefix only a *certified* order is available:
//! the smallest `h` whose `(h+1)`-st difference row vanishes on every window
//! the horizon provides, with the window count reported so callers can demand
//! stronger evidence. In approximate mode the zero test scales the tolerance
//! by the binomial-weighted magnitude of each window's inputs, since `D^(h+1)`
//! amplifies rounding error by roughly `2^(h+1)`.

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, lagrange_weight, Int, Rational};
use crate::group::GroupElement;

/// Exactness regime of a sequence; derived from its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approximate,
}

/// Finite prefix of a group-valued sequence.
///
/// Invariants: nonempty, homogeneous element shape, and `tolerance == 0`
/// exactly when the sequence is in exact mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence<E: GroupElement> {
    elements: Vec<E>,
    tolerance: f64,
}

impl<E: GroupElement> Sequence<E> {
    /// Builds a sequence with an explicit tolerance. Exact element kinds
    /// require `tolerance == 0`.
    pub fn new(elements: Vec<E>, tolerance: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidInput("sequence must be nonempty".into()));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be a finite nonnegative number, got {tolerance}"
            )));
        }
        if E::EXACT && tolerance != 0.0 {
            return Err(Error::InvalidInput(
                "exact element kinds require zero tolerance".into(),
            ));
        }
        let first = elements[0].clone();
        if !elements.iter().all(|e| e.same_shape(&first)) {
            return Err(Error::InvalidInput(
                "sequence elements must all have the same shape".into(),
            ));
        }
        Ok(Sequence { elements, tolerance })
    }

    /// Zero-tolerance constructor for exact element kinds.
    pub fn exact(elements: Vec<E>) -> Result<Self> {
        Self::new(elements, 0.0)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn mode(&self) -> Mode {
        if self.tolerance == 0.0 {
            Mode::Exact
        } else {
            Mode::Approximate
        }
    }

    /// Reuses this sequence's tolerance for a derived element list.
    pub(crate) fn derived(&self, elements: Vec<E>) -> Sequence<E> {
        Sequence { elements, tolerance: self.tolerance }
    }
}

/// How `iterated_difference` computes `D^h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffMode {
    /// Apply `difference` h times.
    Iterative,
    /// Evaluate the alternating binomial closed form directly.
    Direct,
}

/// The difference sequence `Da = (a_1 - a_0, a_2 - a_1, ...)`, one shorter.
pub fn difference<E: GroupElement>(seq: &Sequence<E>) -> Result<Sequence<E>> {
    if seq.len() < 2 {
        return Err(Error::InsufficientData(
            "difference needs at least two terms".into(),
        ));
    }
    Ok(seq.derived(difference_row(seq.elements())))
}

fn difference_row<E: GroupElement>(row: &[E]) -> Vec<E> {
    row.windows(2).map(|w| w[1].sub(&w[0])).collect()
}

/// `D^h` of the prefix, by either route; both produce identical results on
/// exact input.
pub fn iterated_difference<E: GroupElement>(
    seq: &Sequence<E>,
    h: usize,
    mode: DiffMode,
) -> Result<Sequence<E>> {
    if seq.len() <= h {
        return Err(Error::InsufficientData(format!(
            "D^{h} needs at least {} terms, got {}",
            h + 1,
            seq.len()
        )));
    }
    match mode {
        DiffMode::Iterative => {
            let mut row = seq.elements().to_vec();
            for _ in 0..h {
                row = difference_row(&row);
            }
            Ok(seq.derived(row))
        }
        DiffMode::Direct => {
            let out = (0..seq.len() - h)
                .map(|n| direct_difference_at(seq.elements(), h, n))
                .collect();
            Ok(seq.derived(out))
        }
    }
}

/// `D^h a_n = sum_k (-1)^(h-k) C(h,k) a_(n+k)`.
fn direct_difference_at<E: GroupElement>(elements: &[E], h: usize, n: usize) -> E {
    let mut acc = elements[n].zero_like();
    for k in 0..=h {
        let mut coeff = binomial(h as u64, k as u64);
        if (h - k) % 2 == 1 {
            coeff = -coeff;
        }
        acc = acc.add(&elements[n + k].scale(&coeff));
    }
    acc
}

/// The full forward-difference tableau column `(D^0 a_0, ..., D^(N-1) a_0)`.
///
/// Feeding it to [`tableau_term`] reproduces any sequence exactly at every
/// index of its horizon, AP or not.
pub fn newton_tableau<E: GroupElement>(seq: &Sequence<E>) -> Vec<E> {
    let mut row = seq.elements().to_vec();
    let mut out = Vec::with_capacity(row.len());
    out.push(row[0].clone());
    while row.len() > 1 {
        row = difference_row(&row);
        out.push(row[0].clone());
    }
    out
}

/// `sum_k C(n,k) * tableau[k]`; binomials vanish for `k > n`.
pub fn tableau_term<E: GroupElement>(tableau: &[E], n: u64) -> E {
    let mut acc = tableau[0].zero_like();
    for (k, coeff) in tableau.iter().enumerate() {
        let b = binomial(n, k as u64);
        if !num_traits::Zero::is_zero(&b) {
            acc = acc.add(&coeff.scale(&b));
        }
    }
    acc
}

/// Monomial coefficients `gamma_0..gamma_h` of a polynomial sequence, lowest
/// degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialForm<E: GroupElement> {
    pub coefficients: Vec<E>,
}

impl<E: GroupElement> PolynomialForm<E> {
    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Evaluates at a nonnegative integer argument by Horner's rule.
    pub fn eval(&self, n: u64) -> E {
        let arg = Int::from(n);
        let mut acc = self.coefficients.last().expect("nonempty form").clone();
        for c in self.coefficients.iter().rev().skip(1) {
            acc = acc.scale(&arg).add(c);
        }
        acc
    }
}

/// Certified analysis of a finite prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport<E: GroupElement> {
    /// The analyzed prefix.
    pub samples: Vec<E>,
    /// Tolerance the analysis ran at (0 in exact mode).
    pub tolerance: f64,
    /// Prefix length.
    pub horizon: usize,
    /// Smallest `h` whose `(h+1)`-st difference vanished on every window.
    pub order: usize,
    /// Number of vanishing windows of `D^(order+1)`; equals `horizon - order - 1`.
    pub windows_checked: usize,
    /// Whether `D^order a_0` is nonzero, i.e. the fitted degree is exactly `order`.
    pub strict: bool,
    /// `D^k a_0` for `k = 0..=order`.
    pub newton_coeffs: Vec<E>,
    /// Monomial form; present for divisible element kinds (all shipped ones).
    pub monomial: Option<PolynomialForm<E>>,
}

impl<E: GroupElement> OrderReport<E> {
    /// `D^order a_0`, the leading Newton coefficient.
    pub fn leading(&self) -> &E {
        &self.newton_coeffs[self.order]
    }
}

/// Magnitude budget `sum_k C(h,k) |a_(n+k)|` for the approximate zero test.
fn window_budget(mags: &[f64], h: usize, n: usize) -> f64 {
    use num_traits::ToPrimitive;
    (0..=h)
        .map(|k| binomial(h as u64, k as u64).to_f64().unwrap_or(f64::INFINITY) * mags[n + k])
        .sum()
}

fn entry_vanishes<E: GroupElement>(value: &E, tolerance: f64, budget: f64) -> bool {
    if tolerance == 0.0 {
        value.is_zero()
    } else {
        value.magnitude() <= tolerance * budget
    }
}

/// Finds the smallest `h <= h_max` such that every available window of
/// `D^(h+1)` vanishes, requiring at least `min_windows` windows.
///
/// Returns [`Error::Inconclusive`] when `N < h + 1 + min_windows` for every
/// candidate `h` (the horizon cannot test anything), and [`Error::NotAnAp`]
/// when at least one candidate order was testable and none qualified. A
/// `NotAnAp` verdict is always relative to the horizon.
pub fn certified_order<E: GroupElement>(
    seq: &Sequence<E>,
    h_max: usize,
    min_windows: usize,
) -> Result<OrderReport<E>> {
    if min_windows == 0 {
        return Err(Error::InvalidInput("min_windows must be at least 1".into()));
    }
    let n = seq.len();
    if n < 2 {
        return Err(Error::InsufficientData(
            "order certification needs at least two terms".into(),
        ));
    }
    let tol = seq.tolerance();
    let mags: Vec<f64> = if tol == 0.0 {
        Vec::new()
    } else {
        seq.elements().iter().map(GroupElement::magnitude).collect()
    };

    let mut rows: Vec<Vec<E>> = vec![seq.elements().to_vec()];
    let mut tested_any = false;
    for h in 0..=h_max {
        // Candidate h needs min_windows entries in the (h+1)-st row; larger
        // candidates only need more, so stop at the first starved one.
        if n < h + 1 + min_windows {
            break;
        }
        tested_any = true;
        let next = difference_row(&rows[h]);
        let vanishes = next.iter().enumerate().all(|(i, v)| {
            let budget = if tol == 0.0 { 0.0 } else { window_budget(&mags, h + 1, i) };
            entry_vanishes(v, tol, budget)
        });
        rows.push(next);
        if vanishes {
            let windows_checked = n - h - 1;
            let newton_coeffs: Vec<E> = rows[..=h].iter().map(|r| r[0].clone()).collect();
            let leading_budget = if tol == 0.0 { 0.0 } else { window_budget(&mags, h, 0) };
            let strict = !entry_vanishes(&rows[h][0], tol, leading_budget);
            let monomial = Some(newton_to_monomial(&newton_coeffs));
            return Ok(OrderReport {
                samples: seq.elements().to_vec(),
                tolerance: tol,
                horizon: n,
                order: h,
                windows_checked,
                strict,
                newton_coeffs,
                monomial,
            });
        }
    }
    if tested_any {
        Err(Error::NotAnAp { h_max })
    } else {
        Err(Error::Inconclusive(format!(
            "horizon {n} cannot test any order up to {h_max} with {min_windows} window(s)"
        )))
    }
}

/// Signed Stirling numbers of the first kind, rows `0..=h`:
/// `x(x-1)...(x-k+1) = sum_j s(k,j) x^j`.
fn stirling_first_rows(h: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = vec![vec![Int::from(1)]];
    for k in 0..h {
        let prev = &rows[k];
        let mut row = vec![Int::from(0); k + 2];
        for j in 0..=k + 1 {
            let mut v = Int::from(0);
            if j > 0 {
                v += &prev[j - 1];
            }
            if j <= k {
                v -= Int::from(k as u64) * &prev[j];
            }
            row[j] = v;
        }
        rows.push(row);
    }
    rows
}

/// Converts Newton coefficients `D^k a_0` to monomial coefficients exactly,
/// by expanding each `C(n,k)` in the monomial basis with signed Stirling
/// weights: `gamma_j = sum_k (s(k,j)/k!) D^k a_0`.
pub fn newton_to_monomial<E: GroupElement>(newton: &[E]) -> PolynomialForm<E> {
    let h = newton.len() - 1;
    let stirling = stirling_first_rows(h);
    let mut coefficients = Vec::with_capacity(h + 1);
    for j in 0..=h {
        let mut acc = newton[0].zero_like();
        for (k, coeff) in newton.iter().enumerate().skip(j) {
            let s = &stirling[k];
            if j < s.len() && !num_traits::Zero::is_zero(&s[j]) {
                acc = acc.add(&coeff.scale(&s[j]).unscale(&factorial(k as u64)));
            }
        }
        coefficients.push(acc);
    }
    PolynomialForm { coefficients }
}

/// Recovers the monomial form from a report; errors only for non-divisible
/// element kinds, which no shipped kind is.
pub fn monomial_form<E: GroupElement>(report: &OrderReport<E>) -> Result<PolynomialForm<E>> {
    report
        .monomial
        .clone()
        .ok_or_else(|| Error::UnsupportedForm("element kind is not divisible".into()))
}

/// General-term representation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermForm {
    /// `a_n = sum_k C(n,k) D^k a_0`.
    Newton,
    /// Normal Lagrange form with skipped falling-factorial weights.
    Lagrange,
    /// Barycentric quotient; scalar kinds only, node values returned directly.
    Barycentric,
}

/// Evaluates the certified polynomial at index `n` using the chosen form.
/// All forms agree on polynomial sequences.
pub fn term_value<E: GroupElement>(report: &OrderReport<E>, n: u64, form: TermForm) -> Result<E> {
    let h = report.order;
    match form {
        TermForm::Newton => {
            let mut acc = report.newton_coeffs[0].zero_like();
            for (k, coeff) in report.newton_coeffs.iter().enumerate() {
                let b = binomial(n, k as u64);
                if !num_traits::Zero::is_zero(&b) {
                    acc = acc.add(&coeff.scale(&b));
                }
            }
            Ok(acc)
        }
        TermForm::Lagrange => {
            let mut acc = report.samples[0].zero_like();
            for (k, sample) in report.samples.iter().take(h + 1).enumerate() {
                let w = lagrange_weight(n as i64, k as u64, h as u64)?;
                if !num_traits::Zero::is_zero(&w) {
                    acc = acc.add(&sample.scale_rational(&w));
                }
            }
            Ok(acc)
        }
        TermForm::Barycentric => {
            if !E::SCALAR {
                return Err(Error::UnsupportedForm(
                    "barycentric form requires scalar elements".into(),
                ));
            }
            // At interpolation nodes the quotient divides by n - k = 0; the
            // stored node value is the answer there.
            if (n as usize) <= h {
                return Ok(report.samples[n as usize].clone());
            }
            let mut numer = report.samples[0].zero_like();
            let mut denom = Rational::new(Int::from(0), Int::from(1));
            for (k, sample) in report.samples.iter().take(h + 1).enumerate() {
                let mut w = Rational::new(
                    binomial(h as u64, k as u64),
                    Int::from(n) - Int::from(k as u64),
                );
                if (h - k) % 2 == 1 {
                    w = -w;
                }
                numer = numer.add(&sample.scale_rational(&w));
                denom += w;
            }
            Ok(numer.scale_rational(&denom.recip()))
        }
    }
}
