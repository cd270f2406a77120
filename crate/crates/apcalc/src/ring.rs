//! Arithmetic progressions of the form `(y^k x^k)` in a unital ring and
//! their perturbation by commuting nilpotents.
//!
//! The verifier is written against an abstract ring interface so that other
//! exact rings can be plugged in; square matrices over Gaussian rationals are
//! the instantiation shipped in-tree.

use crate::diff::{certified_order, OrderReport, Sequence};
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::group::GroupElement;

/// Element of a unital (not necessarily commutative) ring whose additive
/// group is a [`GroupElement`].
pub trait RingElement: GroupElement {
    /// The multiplicative unit with the same shape as `self`.
    fn one_like(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl RingElement for crate::exact::Rational {
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Smallest `n <= max_index` with `a^n = 0`, or `None` if no power up to
/// `max_index` vanishes. For a `d x d` matrix, `max_index = d` decides
/// nilpotency outright.
pub fn nilpotency_index<R: RingElement>(a: &R, max_index: usize) -> Option<usize> {
    let mut power = a.one_like();
    for n in 1..=max_index {
        power = power.mul(a);
        if power.is_zero() {
            return Some(n);
        }
    }
    None
}

/// The sequence `(y^0 x^0, y^1 x^1, ..., y^(N-1) x^(N-1))`, starting at the
/// ring unit.
pub fn power_product_seq<R: RingElement>(y: &R, x: &R, horizon: usize) -> Result<Sequence<R>> {
    if !y.same_shape(x) {
        return Err(Error::InvalidInput("ring elements have mismatched shapes".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    let mut terms = Vec::with_capacity(horizon);
    let mut y_pow = y.one_like();
    let mut x_pow = x.one_like();
    terms.push(y_pow.mul(&x_pow));
    for _ in 1..horizon {
        y_pow = y_pow.mul(y);
        x_pow = x_pow.mul(x);
        terms.push(y_pow.mul(&x_pow));
    }
    Sequence::new(terms, 0.0)
}

/// Leading polynomial coefficient `c_h = D^h a_0 / h!` of a strictly
/// certified ring-valued progression.
pub fn extract_c_h<R: RingElement>(report: &OrderReport<R>) -> Result<R> {
    if !report.strict {
        return Err(Error::InvalidInput(
            "leading coefficient extraction requires a strict order report".into(),
        ));
    }
    Ok(report.leading().unscale(&factorial(report.order as u64)))
}

/// Outcome of [`verify_ring_perturbation`].
#[derive(Debug, Clone, PartialEq)]
pub struct RingPerturbationReport<R: RingElement> {
    /// Nilpotency index of `a`.
    pub index_a: usize,
    /// Nilpotency index of `b`.
    pub index_b: usize,
    /// Certified strict order of `(y^k x^k)`.
    pub base_order: usize,
    /// Claimed bound `index_a + index_b + base_order - 2`.
    pub order_bound: usize,
    /// Certified order of the perturbed sequence, `<= order_bound`.
    pub perturbed_order: usize,
    /// Whether the perturbed sequence attains the bound strictly.
    pub strict_attained: bool,
    /// The strictness certificate matrix.
    pub certificate: R,
    pub certificate_nonzero: bool,
    /// Certificate prediction agrees with the re-analysis.
    pub certificate_consistent: bool,
    /// For the single-perturbation case (`y = 1`, `b = 0`) the alternative
    /// certificate `a^(n-1) c_h x^(n-1)`; reported because its factor order
    /// differs from the general certificate's specialization.
    pub corollary_certificate_nonzero: Option<bool>,
}

/// Checks the hypotheses and the conclusion of the nilpotent perturbation
/// theorem on `((y+b)^k (x+a)^k)`.
///
/// Hypotheses verified: `ax = xa`, `by = yb`, `a` and `b` nilpotent within
/// `max_nilpotency`, and `(y^k x^k)` a strict progression on the horizon.
/// The conclusion certified is order `<= n + m + h - 2`; the strictness
/// certificate is `b^(m-1) y^(n-m) c_h a^(n-1)` for `m <= n` and
/// `b^(m-1) c_h x^(m-n) a^(n-1)` for `m > n`, and the report records whether
/// its prediction matches the re-analysis.
pub fn verify_ring_perturbation<R: RingElement>(
    y: &R,
    x: &R,
    a: &R,
    b: &R,
    horizon: usize,
    min_windows: usize,
    max_nilpotency: usize,
) -> Result<RingPerturbationReport<R>> {
    if a.mul(x) != x.mul(a) {
        return Err(Error::HypothesisViolation("a does not commute with x".into()));
    }
    if b.mul(y) != y.mul(b) {
        return Err(Error::HypothesisViolation("b does not commute with y".into()));
    }
    let n = nilpotency_index(a, max_nilpotency).ok_or_else(|| {
        Error::HypothesisViolation(format!("a is not nilpotent within index {max_nilpotency}"))
    })?;
    let m = nilpotency_index(b, max_nilpotency).ok_or_else(|| {
        Error::HypothesisViolation(format!("b is not nilpotent within index {max_nilpotency}"))
    })?;

    let base = power_product_seq(y, x, horizon)?;
    let base_h_max = horizon.saturating_sub(1 + min_windows);
    let base_report = certified_order(&base, base_h_max, min_windows).map_err(|e| match e {
        Error::Inconclusive(msg) => Error::Inconclusive(msg),
        other => Error::HypothesisViolation(format!(
            "(y^k x^k) is not a certified progression: {other}"
        )),
    })?;
    if !base_report.strict {
        return Err(Error::HypothesisViolation(
            "(y^k x^k) did not certify a strict order".into(),
        ));
    }
    let h = base_report.order;
    let bound = n + m + h - 2;
    if horizon < n + m + h + min_windows {
        return Err(Error::Inconclusive(format!(
            "horizon {horizon} is too short for order bound {bound} with {min_windows} window(s)"
        )));
    }

    let perturbed = power_product_seq(&y.add(b), &x.add(a), horizon)?;
    let perturbed_report = certified_order(&perturbed, bound, min_windows).map_err(|e| match e {
        Error::NotAnAp { .. } => Error::ClaimViolated(format!(
            "perturbed sequence exceeds the order bound {bound}"
        )),
        other => other,
    })?;

    let c_h = extract_c_h(&base_report)?;
    let certificate = if m <= n {
        b.pow(m - 1)
            .mul(&y.pow(n - m))
            .mul(&c_h)
            .mul(&a.pow(n - 1))
    } else {
        b.pow(m - 1)
            .mul(&c_h)
            .mul(&x.pow(m - n))
            .mul(&a.pow(n - 1))
    };
    let certificate_nonzero = !certificate.is_zero();
    let strict_attained = perturbed_report.order == bound && perturbed_report.strict;
    let corollary_certificate_nonzero = if b.is_zero() && *y == y.one_like() {
        let alt = a.pow(n - 1).mul(&c_h).mul(&x.pow(n - 1));
        Some(!alt.is_zero())
    } else {
        None
    };

    Ok(RingPerturbationReport {
        index_a: n,
        index_b: m,
        base_order: h,
        order_bound: bound,
        perturbed_order: perturbed_report.order,
        strict_attained,
        certificate_nonzero,
        certificate,
        certificate_consistent: certificate_nonzero == strict_attained,
        corollary_certificate_nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::matrix::ExactMatrix;

    #[test]
    fn nilpotency_examples() {
        let zero = ExactMatrix::zeros(2);
        assert_eq!(nilpotency_index(&zero, 2), Some(1));
        let n = ExactMatrix::jordan_nilpotent(2);
        assert_eq!(nilpotency_index(&n, 2), Some(2));
        let id = ExactMatrix::identity(2);
        assert_eq!(nilpotency_index(&id, 2), None);
    }

    #[test]
    fn power_product_of_transposed_unipotents() {
        let n = ExactMatrix::jordan_nilpotent(2);
        let x = ExactMatrix::identity(2).add(&n);
        let y = ExactMatrix::identity(2).add(&n.transpose());
        let seq = power_product_seq(&y, &x, 7).unwrap();
        // k-th term is [[1, k], [k, 1 + k^2]].
        for (k, term) in seq.elements().iter().enumerate() {
            let k = k as i64;
            let expected = ExactMatrix::from_int_rows(&[&[1, k], &[k, 1 + k * k]]);
            assert_eq!(term, &expected);
        }
        let report = certified_order(&seq, 6, 1).unwrap();
        assert_eq!(report.order, 2);
        assert!(report.strict);
        let c2 = extract_c_h(&report).unwrap();
        assert_eq!(c2, ExactMatrix::from_int_rows(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn identity_pair_has_constant_product() {
        let id = ExactMatrix::identity(2);
        let seq = power_product_seq(&id, &id, 5).unwrap();
        let report = certified_order(&seq, 4, 1).unwrap();
        assert_eq!(report.order, 0);
        assert_eq!(extract_c_h(&report).unwrap(), id);
    }

    #[test]
    fn exponential_diagonal_is_not_a_progression() {
        let x = ExactMatrix::from_rational_rows(vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1)],
        ])
        .unwrap();
        let seq = power_product_seq(&x, &x, 8).unwrap();
        assert!(matches!(certified_order(&seq, 5, 1), Err(Error::NotAnAp { .. })));
    }

    #[test]
    fn perturbation_of_identity_by_jordan_pair() {
        let id = ExactMatrix::identity(2);
        let n = ExactMatrix::jordan_nilpotent(2);
        let report =
            verify_ring_perturbation(&id, &id, &n, &n.transpose(), 8, 1, 2).unwrap();
        assert_eq!(report.index_a, 2);
        assert_eq!(report.index_b, 2);
        assert_eq!(report.base_order, 0);
        assert_eq!(report.order_bound, 2);
        assert_eq!(report.perturbed_order, 2);
        assert!(report.strict_attained);
        assert!(report.certificate_nonzero);
        assert!(report.certificate_consistent);
        // Certificate is N^T N here.
        assert_eq!(report.certificate, ExactMatrix::from_int_rows(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn zero_perturbation_keeps_the_order() {
        let nmat = ExactMatrix::jordan_nilpotent(2);
        let x = ExactMatrix::identity(2).add(&nmat);
        let y = ExactMatrix::identity(2).add(&nmat.transpose());
        let zero = ExactMatrix::zeros(2);
        let report = verify_ring_perturbation(&y, &x, &zero, &zero, 9, 1, 2).unwrap();
        assert_eq!((report.index_a, report.index_b), (1, 1));
        assert_eq!(report.base_order, 2);
        assert_eq!(report.order_bound, 2);
        assert!(report.strict_attained);
        assert!(report.certificate_consistent);
    }

    #[test]
    fn corollary_case_reports_both_certificates() {
        let id = ExactMatrix::identity(2);
        let n = ExactMatrix::jordan_nilpotent(2);
        let zero = ExactMatrix::zeros(2);
        // y = I, b = 0: the sequence is ((x + a)^k) with x = I, a = N.
        let report = verify_ring_perturbation(&id, &id, &n, &zero, 7, 1, 2).unwrap();
        assert_eq!(report.order_bound, 1); // n + h - 1 with n = 2, h = 0
        assert_eq!(report.perturbed_order, 1);
        assert!(report.strict_attained);
        assert!(report.certificate_nonzero);
        assert_eq!(report.corollary_certificate_nonzero, Some(true));
    }

    #[test]
    fn monomial_form_reconstructs_power_products() {
        // The fitted matrix polynomial reproduces y^k x^k term by term, so
        // the extracted leading coefficient is consistent with the data.
        let n = ExactMatrix::jordan_nilpotent(3);
        let x = ExactMatrix::identity(3).add(&n);
        let y = ExactMatrix::identity(3).add(&n.transpose());
        let seq = power_product_seq(&y, &x, 9).unwrap();
        let report = certified_order(&seq, 7, 1).unwrap();
        let form = report.monomial.as_ref().unwrap();
        for (k, term) in seq.elements().iter().enumerate() {
            assert_eq!(&form.eval(k as u64), term, "k = {k}");
        }
        let c_h = extract_c_h(&report).unwrap();
        assert_eq!(&c_h, &form.coefficients[report.order]);
    }

    #[test]
    fn non_commuting_inputs_are_rejected() {
        let x = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 2]]);
        let a = ExactMatrix::jordan_nilpotent(2);
        let id = ExactMatrix::identity(2);
        let zero = ExactMatrix::zeros(2);
        assert!(matches!(
            verify_ring_perturbation(&id, &x, &a, &zero, 8, 1, 2),
            Err(Error::HypothesisViolation(_))
        ));
    }
}
