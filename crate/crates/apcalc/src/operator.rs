//! m-isometries on finite-dimensional inner-product spaces, their beta
//! forms, nilpotent perturbations, and left n-inverses. Everything here is
//! polynomial in the matrix entries over Gaussian rationals, so every check
//! is exact with zero tolerance.


use crate::error::{Error, Result};
use crate::exact::{binomial, Int};
use crate::group::GroupElement;
use crate::matrix::ExactMatrix;
use crate::ring::nilpotency_index;

/// `sum_(k=0..m) (-1)^(m-k) C(m,k) T*^k T^k`; zero exactly when `T` is an
/// m-isometry.
pub fn defect(t: &ExactMatrix, m: usize) -> ExactMatrix {
    let t_star = t.adjoint();
    let mut acc = ExactMatrix::zeros(t.dim());
    let mut star_pow = ExactMatrix::identity(t.dim());
    let mut pow = ExactMatrix::identity(t.dim());
    for k in 0..=m {
        let mut c: Int = binomial(m as u64, k as u64);
        if (m - k) % 2 == 1 {
            c = -c;
        }
        acc = acc.add(&star_pow.matmul(&pow).scale(&c));
        if k < m {
            star_pow = star_pow.matmul(&t_star);
            pow = pow.matmul(t);
        }
    }
    acc
}

/// `beta_j(T) = sum_(i=0..j) (-1)^(j-i) C(j,i) T*^i T^i`, the strictness
/// witness form; self-adjoint by construction and equal to `defect(t, j)`.
pub fn beta(t: &ExactMatrix, j: usize) -> ExactMatrix {
    defect(t, j)
}

/// `sum_(k=0..n) (-1)^(n-k) C(n,k) S^k T^k`; zero exactly when `S` is a left
/// n-inverse of `T`.
pub fn inverse_defect(s: &ExactMatrix, t: &ExactMatrix, n: usize) -> Result<ExactMatrix> {
    if s.dim() != t.dim() {
        return Err(Error::InvalidInput("operator dimensions differ".into()));
    }
    let mut acc = ExactMatrix::zeros(t.dim());
    let mut s_pow = ExactMatrix::identity(t.dim());
    let mut t_pow = ExactMatrix::identity(t.dim());
    for k in 0..=n {
        let mut c: Int = binomial(n as u64, k as u64);
        if (n - k) % 2 == 1 {
            c = -c;
        }
        acc = acc.add(&s_pow.matmul(&t_pow).scale(&c));
        if k < n {
            s_pow = s_pow.matmul(s);
            t_pow = t_pow.matmul(t);
        }
    }
    Ok(acc)
}

/// `beta_j(S, T) = sum_(i=0..j) (-1)^(j-i) C(j,i) S^i T^i`.
pub fn beta_pair(s: &ExactMatrix, t: &ExactMatrix, j: usize) -> Result<ExactMatrix> {
    inverse_defect(s, t, j)
}

/// Tri-state outcome of an exact operator identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorClass {
    /// The defining identity fails.
    No,
    /// The identity holds but the order is not minimal.
    NonStrict,
    /// The identity holds with a nonzero strictness witness.
    Strict,
}

/// Classifies `T` against the m-isometry identity: strict when
/// `defect(T, m) = 0` and `beta_(m-1)(T) != 0` (for `m = 1` the beta form is
/// the identity matrix, so a 1-isometry is always strict).
pub fn is_m_isometry(t: &ExactMatrix, m: usize) -> Result<OperatorClass> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    if !GroupElement::is_zero(&defect(t, m)) {
        return Ok(OperatorClass::No);
    }
    if m == 1 || !GroupElement::is_zero(&beta(t, m - 1)) {
        Ok(OperatorClass::Strict)
    } else {
        Ok(OperatorClass::NonStrict)
    }
}

/// Classifies `S` against the left n-inverse identity, with strictness via
/// `beta_(n-1)(S, T)`.
pub fn left_n_inverse_check(
    s: &ExactMatrix,
    t: &ExactMatrix,
    n: usize,
) -> Result<OperatorClass> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !GroupElement::is_zero(&inverse_defect(s, t, n)?) {
        return Ok(OperatorClass::No);
    }
    if n == 1 || !GroupElement::is_zero(&beta_pair(s, t, n - 1)?) {
        Ok(OperatorClass::Strict)
    } else {
        Ok(OperatorClass::NonStrict)
    }
}

/// Smallest `m <= m_max` with `defect(t, m) = 0`; such an `m` is strict by
/// minimality.
pub fn isometry_order(t: &ExactMatrix, m_max: usize) -> Option<usize> {
    (1..=m_max).find(|&m| GroupElement::is_zero(&defect(t, m)))
}

/// Smallest `n <= n_max` making `s` a left n-inverse of `t`.
pub fn left_inverse_order(s: &ExactMatrix, t: &ExactMatrix, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        inverse_defect(s, t, n).map(|d| GroupElement::is_zero(&d)).unwrap_or(false)
    })
}

/// Outcome of the isometry perturbation check.
#[derive(Debug, Clone)]
pub struct HsPerturbationReport {
    /// Strict isometry order of the unperturbed operator.
    pub m: usize,
    /// Nilpotency index of the perturbation.
    pub n: usize,
    /// Claimed isometry order `2n + m - 2` of the sum.
    pub bound: usize,
    /// The certificate `Q*^(n-1) beta_(m-1)(T) Q^(n-1)`.
    pub certificate_nonzero: bool,
    /// Whether `T + Q` is in fact a strict `bound`-isometry, via
    /// `beta_(bound-1)(T + Q) != 0`.
    pub strict: bool,
    /// Certificate prediction agrees with the direct strictness test.
    pub consistent: bool,
}

/// Verifies that a strict m-isometry perturbed by a commuting n-nilpotent is
/// a `(2n+m-2)`-isometry, and evaluates the strictness certificate.
pub fn verify_hs_perturbation(t: &ExactMatrix, q: &ExactMatrix) -> Result<HsPerturbationReport> {
    if t.dim() != q.dim() {
        return Err(Error::InvalidInput("operator dimensions differ".into()));
    }
    if t.matmul(q) != q.matmul(t) {
        return Err(Error::HypothesisViolation("Q does not commute with T".into()));
    }
    let n = nilpotency_index(q, q.dim()).ok_or_else(|| {
        Error::HypothesisViolation("Q is not nilpotent".into())
    })?;
    let m = isometry_order(t, 2 * t.dim() + 1).ok_or_else(|| {
        Error::HypothesisViolation(format!(
            "T is not an m-isometry for any m <= {}",
            2 * t.dim() + 1
        ))
    })?;
    let bound = 2 * n + m - 2;
    if !GroupElement::is_zero(&defect(&t.add(q), bound)) {
        return Err(Error::ClaimViolated(format!(
            "defect(T + Q, {bound}) is nonzero"
        )));
    }
    let cert = q
        .adjoint()
        .matpow(n - 1)
        .matmul(&beta(t, m - 1))
        .matmul(&q.matpow(n - 1));
    let certificate_nonzero = !GroupElement::is_zero(&cert);
    let strict = bound == 1 || !GroupElement::is_zero(&beta(&t.add(q), bound - 1));
    Ok(HsPerturbationReport {
        m,
        n,
        bound,
        certificate_nonzero,
        strict,
        consistent: certificate_nonzero == strict,
    })
}

/// Outcome of the left-inverse perturbation check.
#[derive(Debug, Clone)]
pub struct InversePerturbationReport {
    /// Strict left-inverse order of the base pair.
    pub n: usize,
    /// Nilpotency index of the perturbation of `S`.
    pub h: usize,
    /// Nilpotency index of the perturbation of `T`.
    pub k: usize,
    /// Claimed left-inverse order `n + h + k - 2` of the perturbed pair.
    pub bound: usize,
    /// Case-split certificate `P^(h-1) S^(h-k) beta Q^(k-1)` (for `k <= h`)
    /// or `P^(h-1) beta T^(k-h) Q^(k-1)` (for `h <= k`).
    pub certificate_nonzero: bool,
    /// Whether the perturbed pair is in fact a strict left `bound`-inverse,
    /// via `beta_(bound-1)(S+P, T+Q) != 0`.
    pub strict: bool,
    /// Certificate prediction agrees with the direct strictness test.
    pub consistent: bool,
}

/// Verifies that a strict left n-inverse survives commuting nilpotent
/// perturbations of both factors as a left `(n+h+k-2)`-inverse, and
/// evaluates the case-split strictness certificate.
pub fn verify_inverse_perturbation(
    s: &ExactMatrix,
    t: &ExactMatrix,
    p: &ExactMatrix,
    q: &ExactMatrix,
) -> Result<InversePerturbationReport> {
    let dim = t.dim();
    if s.dim() != dim || p.dim() != dim || q.dim() != dim {
        return Err(Error::InvalidInput("operator dimensions differ".into()));
    }
    if s.matmul(p) != p.matmul(s) {
        return Err(Error::HypothesisViolation("P does not commute with S".into()));
    }
    if t.matmul(q) != q.matmul(t) {
        return Err(Error::HypothesisViolation("Q does not commute with T".into()));
    }
    let h = nilpotency_index(p, dim)
        .ok_or_else(|| Error::HypothesisViolation("P is not nilpotent".into()))?;
    let k = nilpotency_index(q, dim)
        .ok_or_else(|| Error::HypothesisViolation("Q is not nilpotent".into()))?;
    let n = left_inverse_order(s, t, 2 * dim + 1).ok_or_else(|| {
        Error::HypothesisViolation(format!(
            "S is not a left n-inverse of T for any n <= {}",
            2 * dim + 1
        ))
    })?;
    let bound = n + h + k - 2;
    let s_pert = s.add(p);
    let t_pert = t.add(q);
    if !GroupElement::is_zero(&inverse_defect(&s_pert, &t_pert, bound)?) {
        return Err(Error::ClaimViolated(format!(
            "S + P is not a left {bound}-inverse of T + Q"
        )));
    }
    let b = beta_pair(s, t, n - 1)?;
    let cert = if k <= h {
        p.matpow(h - 1)
            .matmul(&s.matpow(h - k))
            .matmul(&b)
            .matmul(&q.matpow(k - 1))
    } else {
        p.matpow(h - 1)
            .matmul(&b)
            .matmul(&t.matpow(k - h))
            .matmul(&q.matpow(k - 1))
    };
    let certificate_nonzero = !GroupElement::is_zero(&cert);
    let strict = bound == 1 || !GroupElement::is_zero(&beta_pair(&s_pert, &t_pert, bound - 1)?);
    Ok(InversePerturbationReport {
        n,
        h,
        k,
        bound,
        certificate_nonzero,
        strict,
        consistent: certificate_nonzero == strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{certified_order, iterated_difference, DiffMode, Sequence};
    use crate::exact::rat;
    use crate::matrix::GaussianVector;
    use crate::ring::power_product_seq;

    fn shear() -> ExactMatrix {
        ExactMatrix::from_int_rows(&[&[1, 1], &[0, 1]])
    }

    fn rotation() -> ExactMatrix {
        ExactMatrix::from_rational_rows(vec![
            vec![rat(3, 5), rat(4, 5)],
            vec![rat(-4, 5), rat(3, 5)],
        ])
        .unwrap()
    }

    #[test]
    fn defect_examples() {
        assert!(GroupElement::is_zero(&defect(&ExactMatrix::identity(2), 1)));
        assert!(GroupElement::is_zero(&defect(&shear(), 3)));
        assert!(!GroupElement::is_zero(&defect(&shear(), 2)));
        assert!(GroupElement::is_zero(&defect(&rotation(), 1)));
        let twice = ExactMatrix::from_int_rows(&[&[2, 0], &[0, 2]]);
        for m in 1..=6 {
            assert!(!GroupElement::is_zero(&defect(&twice, m)), "m = {m}");
        }
    }

    #[test]
    fn is_m_isometry_classification() {
        assert_eq!(is_m_isometry(&ExactMatrix::identity(2), 1).unwrap(), OperatorClass::Strict);
        assert_eq!(is_m_isometry(&shear(), 3).unwrap(), OperatorClass::Strict);
        // The 3-isometry is also a non-strict 4-isometry.
        assert_eq!(is_m_isometry(&shear(), 4).unwrap(), OperatorClass::NonStrict);
        assert_eq!(is_m_isometry(&shear(), 2).unwrap(), OperatorClass::No);
        assert_eq!(isometry_order(&shear(), 7), Some(3));
    }

    #[test]
    fn defect_is_iterated_difference_of_power_products() {
        // defect(T, m) equals D^m (T*^k T^k) at k = 0.
        let t = shear();
        let seq = power_product_seq(&t.adjoint(), &t, 8).unwrap();
        for m in 0..=6usize {
            let diff = iterated_difference(&seq, m, DiffMode::Direct).unwrap();
            assert_eq!(diff.elements()[0], defect(&t, m), "m = {m}");
        }
    }

    #[test]
    fn beta_is_self_adjoint_for_adjoint_pairs() {
        for t in [shear(), rotation(), ExactMatrix::identity(3)] {
            for j in 0..4 {
                let b = beta(&t, j);
                assert_eq!(b.adjoint(), b, "beta_{j} not self-adjoint");
            }
        }
    }

    #[test]
    fn isometry_identity_on_random_vectors() {
        // The per-vector form of the defining identity, spot-checked.
        let t = shear();
        let m = 3;
        for x in [
            GaussianVector::from_ints(&[1, 0]),
            GaussianVector::from_ints(&[2, -3]),
            GaussianVector::from_ints(&[-1, 7]),
        ] {
            let mut acc = rat(0, 1);
            let mut v = x.clone();
            for k in 0..=m {
                let mut c = crate::exact::Rational::from(binomial(m as u64, k as u64));
                if (m - k) % 2 == 1 {
                    c = -c;
                }
                acc += c * v.norm_sq();
                v = t.apply(&v);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn power_product_vectors_form_a_progression() {
        // Per-vector form of the defining identity: (T*^k T^k x) is a
        // progression of order m - 1 in the underlying vector space.
        let t = shear();
        let m = 3usize;
        for x in [GaussianVector::from_ints(&[1, 0]), GaussianVector::from_ints(&[2, -3])] {
            for shift in 0..2usize {
                let mut acc = GaussianVector::zeros(2);
                for k in 0..=m {
                    let pow = t.adjoint().matpow(k + shift).matmul(&t.matpow(k + shift));
                    let mut c = binomial(m as u64, k as u64);
                    if (m - k) % 2 == 1 {
                        c = -c;
                    }
                    let term = pow.apply(&x);
                    let scaled = GaussianVector(
                        term.0.iter().map(|z| z.scale_int(&c)).collect(),
                    );
                    acc = GaussianVector(
                        acc.0.iter().zip(&scaled.0).map(|(a, b)| a.add(b)).collect(),
                    );
                }
                assert!(acc.is_zero(), "shift {shift}");
            }
        }
    }

    #[test]
    fn left_inverse_examples() {
        // An invertible map has its inverse as strict left 1-inverse.
        let t = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let t_inv = ExactMatrix::from_int_rows(&[&[1, -1], &[-1, 2]]);
        assert_eq!(left_n_inverse_check(&t_inv, &t, 1).unwrap(), OperatorClass::Strict);

        // (I + N)* is a strict left 3-inverse of I + N.
        let u = shear();
        assert_eq!(left_n_inverse_check(&u.adjoint(), &u, 3).unwrap(), OperatorClass::Strict);
        assert_eq!(left_inverse_order(&u.adjoint(), &u, 7), Some(3));

        // S = 0 is never a left 1-inverse.
        let zero = ExactMatrix::zeros(2);
        assert_eq!(left_n_inverse_check(&zero, &t, 1).unwrap(), OperatorClass::No);
    }

    #[test]
    fn isometry_iff_adjoint_left_inverse() {
        for t in [shear(), rotation(), ExactMatrix::from_int_rows(&[&[2, 0], &[0, 2]])] {
            for m in 1..=5 {
                let iso = is_m_isometry(&t, m).unwrap();
                let inv = left_n_inverse_check(&t.adjoint(), &t, m).unwrap();
                assert_eq!(iso == OperatorClass::No, inv == OperatorClass::No);
            }
        }
    }

    #[test]
    fn hs_perturbation_of_identity_by_jordan() {
        let t = ExactMatrix::identity(2);
        let q = ExactMatrix::jordan_nilpotent(2);
        let report = verify_hs_perturbation(&t, &q).unwrap();
        assert_eq!((report.m, report.n, report.bound), (1, 2, 3));
        assert!(report.certificate_nonzero);
        assert!(report.strict);
        assert!(report.consistent);
        // T + Q is the shear, independently certified a strict 3-isometry.
        assert_eq!(is_m_isometry(&t.add(&q), 3).unwrap(), OperatorClass::Strict);
    }

    #[test]
    fn hs_perturbation_with_zero_keeps_m() {
        let t = shear();
        let zero = ExactMatrix::zeros(2);
        let report = verify_hs_perturbation(&t, &zero).unwrap();
        assert_eq!((report.m, report.n, report.bound), (3, 1, 3));
        assert!(report.strict);
        assert!(report.consistent);
    }

    #[test]
    fn hs_perturbation_block_rotation_instance() {
        // Two equal rotation blocks with a commuting block nilpotent.
        let r = rotation();
        let t = ExactMatrix::block_diag(&[r.clone(), r.clone()]);
        let mut q = ExactMatrix::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                q.set(i, 2 + j, r.get(i, j).clone());
            }
        }
        assert_eq!(t.matmul(&q), q.matmul(&t));
        let report = verify_hs_perturbation(&t, &q).unwrap();
        assert_eq!((report.m, report.n), (1, 2));
        assert_eq!(report.bound, 3);
        assert!(report.consistent);
    }

    #[test]
    fn inverse_perturbation_worked_example() {
        let id = ExactMatrix::identity(2);
        let n = ExactMatrix::jordan_nilpotent(2);
        let report =
            verify_inverse_perturbation(&id, &id, &n.transpose(), &n).unwrap();
        assert_eq!((report.n, report.h, report.k, report.bound), (1, 2, 2, 3));
        assert!(report.certificate_nonzero);
        assert!(report.strict);
        assert!(report.consistent);
    }

    #[test]
    fn inverse_perturbation_trivial_case() {
        let t = shear();
        let s = t.adjoint();
        let zero = ExactMatrix::zeros(2);
        let report = verify_inverse_perturbation(&s, &t, &zero, &zero).unwrap();
        assert_eq!((report.n, report.h, report.k, report.bound), (3, 1, 1, 3));
        assert!(report.strict);
    }

    #[test]
    fn perturbed_inverse_defect_matches_progression_order() {
        // The perturbed pair's power products certify exactly bound - 1.
        let id = ExactMatrix::identity(2);
        let n = ExactMatrix::jordan_nilpotent(2);
        let s = id.add(&n.transpose());
        let t = id.add(&n);
        let seq = power_product_seq(&s, &t, 8).unwrap();
        let report = certified_order(&seq, 6, 1).unwrap();
        assert_eq!(report.order, 2);
        assert!(report.strict);
        let matrices: Vec<ExactMatrix> = seq.elements().to_vec();
        let rebuilt = Sequence::exact(matrices).unwrap();
        assert_eq!(rebuilt.elements(), seq.elements());
    }
}
