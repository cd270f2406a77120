//! Square matrices over Gaussian rationals: the concrete ring and operator
//! representation. The adjoint is the conjugate transpose, so every identity
//! of the operator modules is decided exactly.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Int, Rational};
use crate::group::GroupElement;
use crate::ring::RingElement;

/// Square matrix with Gaussian-rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    /// Builds a matrix from rows; all rows must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix must be nonempty".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "matrix must be square: expected {dim} columns, got {}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { dim, entries })
    }

    /// Builds a real matrix from integer rows; convenient in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| GaussianRational::from_int(v)).collect())
            .collect();
        Self::from_rows(converted).expect("well-shaped integer rows")
    }

    /// Builds a real matrix from rational rows.
    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussianRational::from_rational).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        ExactMatrix { dim, entries: vec![GaussianRational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = GaussianRational::one();
        }
        m
    }

    /// Nilpotent single Jordan block: ones on the superdiagonal.
    pub fn jordan_nilpotent(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim.saturating_sub(1) {
            m.entries[i * dim + i + 1] = GaussianRational::one();
        }
        m
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[ExactMatrix]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut m = Self::zeros(dim);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    m.entries[(off + i) * dim + off + j] = b.get(i, j).clone();
                }
            }
            off += b.dim;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn matpow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn scale_gaussian(&self, c: &GaussianRational) -> Self {
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn apply(&self, v: &GaussianVector) -> GaussianVector {
        assert_eq!(self.dim, v.dim(), "matrix/vector dimension mismatch");
        let mut out = vec![GaussianRational::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[i] = out[i].add(&a.mul(&v.0[j]));
                }
            }
        }
        GaussianVector(out)
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl GroupElement for ExactMatrix {
    const EXACT: bool = true;
    const SCALAR: bool = false;

    fn zero_like(&self) -> Self {
        Self::zeros(self.dim)
    }

    fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_zero)
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ExactMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ExactMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    fn neg(&self) -> Self {
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(GaussianRational::neg).collect(),
        }
    }

    fn scale(&self, k: &Int) -> Self {
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.scale_int(k)).collect(),
        }
    }

    fn unscale(&self, k: &Int) -> Self {
        assert!(!k.is_zero(), "division by zero integer");
        let r = Rational::new(Int::from(1), k.clone());
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.scale_rational(&r)).collect(),
        }
    }

    fn magnitude(&self) -> f64 {
        self.entries
            .iter()
            .map(GaussianRational::modulus_f64)
            .fold(0.0, f64::max)
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim
    }
}

impl RingElement for ExactMatrix {
    fn one_like(&self) -> Self {
        Self::identity(self.dim)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.matmul(rhs)
    }
}

/// Column vector over Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussianVector(pub Vec<GaussianRational>);

impl GaussianVector {
    pub fn from_rationals(entries: Vec<Rational>) -> Self {
        GaussianVector(entries.into_iter().map(GaussianRational::from_rational).collect())
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        GaussianVector(entries.iter().map(|&v| GaussianRational::from_int(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        GaussianVector(vec![GaussianRational::zero(); dim])
    }

    /// Standard basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = GaussianRational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        GaussianVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussianRational::is_zero)
    }

    /// Squared Euclidean norm; exact because `|z|^2 = re^2 + im^2`.
    pub fn norm_sq(&self) -> Rational {
        self.0.iter().map(GaussianRational::norm_sq).fold(Rational::zero(), |a, b| a + b)
    }

    /// `p`-norm as a float, for the approximate norm modes.
    pub fn norm_f64(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.0.iter().map(GaussianRational::modulus_f64).fold(0.0, f64::max);
        }
        let sum: f64 = self.0.iter().map(|z| z.modulus_f64().powf(p)).sum();
        sum.powf(1.0 / p)
    }
}
