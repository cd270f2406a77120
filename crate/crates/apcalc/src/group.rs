//! Group elements the difference calculus runs over.
//!
//! The calculus itself is agnostic to the element kind: anything with
//! addition, negation, integer scaling and exact division by nonzero integers
//! works. Four kinds ship here or in [`crate::matrix`]: exact rationals,
//! vectors of rationals, exact matrices, and `f64` for approximate mode.

use num_traits::{ToPrimitive, Zero};

use crate::exact::{Int, Rational};

/// Element of a commutative group that supports integer scaling and, for all
/// shipped kinds, exact division by nonzero integers.
pub trait GroupElement: Clone + PartialEq + std::fmt::Debug {
    /// Exact kinds take zero-tolerance equality tests; `f64` does not.
    const EXACT: bool;
    /// Scalar kinds admit the barycentric evaluation form.
    const SCALAR: bool;

    /// The zero with the same shape as `self`.
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by an integer.
    fn scale(&self, k: &Int) -> Self;
    /// Exact division by a nonzero integer.
    fn unscale(&self, k: &Int) -> Self;
    /// Norm used by the approximate-mode tolerance policy.
    fn magnitude(&self) -> f64;
    /// Whether two elements live in the same group (dimension check).
    fn same_shape(&self, other: &Self) -> bool;

    /// Multiplication by a rational, via scale-then-unscale.
    fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(r.numer()).unscale(r.denom())
    }
}

/// Scalar group elements, orderable and convertible to and from rationals.
///
/// `f64` converts exactly: every finite float is a dyadic rational.
pub trait ScalarElement: GroupElement + PartialOrd {
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
}

impl GroupElement for Rational {
    const EXACT: bool = true;
    const SCALAR: bool = true;

    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, k: &Int) -> Self {
        self * Rational::from(k.clone())
    }

    fn unscale(&self, k: &Int) -> Self {
        assert!(!k.is_zero(), "division by zero integer");
        self / Rational::from(k.clone())
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn same_shape(&self, _other: &Self) -> bool {
        true
    }
}

impl ScalarElement for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

impl GroupElement for f64 {
    const EXACT: bool = false;
    const SCALAR: bool = true;

    fn zero_like(&self) -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, k: &Int) -> Self {
        self * k.to_f64().unwrap_or(f64::INFINITY)
    }

    fn unscale(&self, k: &Int) -> Self {
        self / k.to_f64().unwrap_or(f64::INFINITY)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn same_shape(&self, _other: &Self) -> bool {
        true
    }
}

impl ScalarElement for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY)
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite float expected")
    }
}

/// Fixed-dimension vector of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl GroupElement for RationalVector {
    const EXACT: bool = true;
    const SCALAR: bool = false;

    fn zero_like(&self) -> Self {
        RationalVector(vec![Rational::zero(); self.0.len()])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.0.len(), rhs.0.len(), "vector dimension mismatch");
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.0.len(), rhs.0.len(), "vector dimension mismatch");
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    fn neg(&self) -> Self {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }

    fn scale(&self, k: &Int) -> Self {
        let f = Rational::from(k.clone());
        RationalVector(self.0.iter().map(|a| a * &f).collect())
    }

    fn unscale(&self, k: &Int) -> Self {
        assert!(!k.is_zero(), "division by zero integer");
        let f = Rational::from(k.clone());
        RationalVector(self.0.iter().map(|a| a / &f).collect())
    }

    fn magnitude(&self) -> f64 {
        self.0
            .iter()
            .map(GroupElement::magnitude)
            .fold(0.0, f64::max)
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
    }
}
