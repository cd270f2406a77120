//! Exact calculus of arithmetic progressions of higher order (polynomial
//! sequences) over abelian groups and rings, with verifiers for the
//! operator-theoretic applications: (m,q)-isometries, the `rho_T`
//! semi-distance, nilpotent perturbations, and left n-inverses.
//!
//! The calculus is generic over the group the sequence lives in (the
//! [`group::GroupElement`] trait); rationals, rational vectors, exact
//! matrices over Gaussian rationals, and `f64` (approximate mode) ship
//! in-tree. Everything rational runs at zero tolerance; approximate mode
//! scales its tolerance by the binomial-weighted magnitude of each window.
//!
//! Module map:
//! - [`exact`] — number tower and combinatorial coefficients
//! - [`diff`] — difference operator, certified order, term forms
//! - [`seqops`] — shifts, sums, steps, decimation, diagonals, polynomial gcd
//! - [`power`] — positive sequences, powers, proper-order classification
//! - [`ring`] — nilpotent perturbation of `(y^k x^k)` progressions
//! - [`isometry`] — (m,q)-isometries on metric and normed spaces
//! - [`operator`] — m-isometries, beta forms, n-inverses, perturbations
//! - [`instances`] — deterministic generators for the randomized suites

// Index loops read better than enumerate chains in the matrix-heavy code.
#![allow(clippy::needless_range_loop)]

pub mod diff;
pub mod error;
pub mod exact;
pub mod group;
pub mod instances;
pub mod isometry;
pub mod matrix;
pub mod operator;
pub mod power;
pub mod ring;
pub mod seqops;

pub use error::{Error, Result};
pub use exact::{GaussianRational, Int, Rational};
pub use group::{GroupElement, RationalVector, ScalarElement};
pub use matrix::{ExactMatrix, GaussianVector};

/// Scalar sequence over exact rationals.
pub type RationalSequence = diff::Sequence<Rational>;
/// Scalar sequence in approximate (`f64`) mode.
pub type FloatSequence = diff::Sequence<f64>;
/// Sequence of fixed-dimension rational vectors.
pub type VectorSequence = diff::Sequence<RationalVector>;
/// Sequence of exact matrices.
pub type MatrixSequence = diff::Sequence<ExactMatrix>;
/// Order report over exact rationals.
pub type RationalOrderReport = diff::OrderReport<Rational>;
