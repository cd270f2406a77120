//! Exact number tower: arbitrary-precision integers, rationals and Gaussian
//! rationals, together with the combinatorial coefficients every other module
//! leans on.
//!
//! Rationals are always kept in lowest terms with a positive denominator, so
//! equality is plain structural comparison and every theorem check below runs
//! at zero tolerance. Binomial coefficients are memoized in a triangular
//! Pascal cache; rows beyond the cache bound fall back to the multiplicative
//! formula.

use std::fmt;
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, normalized on construction.
pub type Rational = num_rational::BigRational;

/// Shorthand for small integer literals.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for small rational literals; panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(Int::from(numer), Int::from(denom))
}

/// Parses a rational from canonical `p/q` text (`q` omitted when 1).
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim())
        .map_err(|e| Error::InvalidInput(format!("cannot parse rational {s:?}: {e}")))
}

/// Renders a rational in canonical `p/q` form (`q` omitted when 1).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// n! as a big integer.
pub fn factorial(n: u64) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

/// `r^e` by exponentiation by squaring.
pub fn rational_pow(r: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Number of Pascal-triangle rows kept in the shared cache.
const BINOMIAL_CACHE_ROWS: usize = 256;

static BINOMIAL_CACHE: LazyLock<RwLock<Vec<Vec<Int>>>> =
    LazyLock::new(|| RwLock::new(vec![vec![Int::one()]]));

/// Binomial coefficient `C(n, k)`, with the convention `C(n, k) = 0` for `k > n`.
///
/// Rows up to the cache bound are produced once by Pascal's rule and shared
/// behind a lock; larger `n` use the falling-factorial formula directly.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    if k == 0 || k == n {
        return Int::one();
    }
    if (n as usize) < BINOMIAL_CACHE_ROWS {
        {
            let cache = BINOMIAL_CACHE.read().expect("binomial cache poisoned");
            if let Some(row) = cache.get(n as usize) {
                return row[k as usize].clone();
            }
        }
        let mut cache = BINOMIAL_CACHE.write().expect("binomial cache poisoned");
        while cache.len() <= n as usize {
            let prev = cache.last().expect("cache starts non-empty");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(Int::one());
            for i in 1..prev.len() {
                row.push(&prev[i - 1] + &prev[i]);
            }
            row.push(Int::one());
            cache.push(row);
        }
        return cache[n as usize][k as usize].clone();
    }
    // Multiplicative fallback for rows beyond the cache bound.
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Binomial coefficient accepting signed arguments; negative input is an error.
pub fn binomial_checked(n: i64, k: i64) -> Result<Int> {
    if n < 0 || k < 0 {
        return Err(Error::InvalidInput(format!(
            "binomial arguments must be nonnegative, got ({n}, {k})"
        )));
    }
    Ok(binomial(n as u64, k as u64))
}

/// Weight of the node value `a_k` in the normal Lagrange form of a degree-`h`
/// polynomial sequence, evaluated at integer argument `n`:
///
/// ```text
/// (-1)^(h-k) * n (n-1) ... (n-k)^ ... (n-h) / (k! (h-k)!)
/// ```
///
/// where the hat marks the omitted factor `(n - k)`. The skipped falling
/// factorial is the authoritative route; the equivalent signed
/// binomial-product form is kept as a cross-check in the tests.
pub fn lagrange_weight(n: i64, k: u64, h: u64) -> Result<Rational> {
    if k > h {
        return Err(Error::InvalidInput(format!(
            "lagrange_weight requires k <= h, got k = {k}, h = {h}"
        )));
    }
    let mut numer = Int::one();
    for j in 0..=h {
        if j == k {
            continue;
        }
        numer *= Int::from(n) - Int::from(j);
    }
    if (h - k) % 2 == 1 {
        numer = -numer;
    }
    let denom = factorial(k) * factorial(h - k);
    Ok(Rational::new(numer, denom))
}

/// The three combinatorial identities the difference calculus rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `sum_{h=0..j} (-1)^h C(i,h) = (-1)^j C(i-1,j)` for `0 <= j < i`.
    AlternatingPartialSum { i: u64, j: u64 },
    /// `sum_{j=k..h} (-1)^(j-k) C(n,j) C(j,k)` equals the skipped
    /// falling-factorial weight, for `0 <= k <= h < n`.
    SkippedSum { n: u64, h: u64, k: u64 },
    /// The skipped weights over `k = 0..h` sum to one, for any `n, h >= 0`.
    UnitySum { n: u64, h: u64 },
}

/// Evaluates both sides of the given identity exactly and compares them.
pub fn verify_identity(id: &Identity) -> Result<bool> {
    match *id {
        Identity::AlternatingPartialSum { i, j } => {
            if j >= i {
                return Err(Error::InvalidInput(format!(
                    "alternating_partial_sum requires 0 <= j < i, got i = {i}, j = {j}"
                )));
            }
            let mut lhs = Int::zero();
            for h in 0..=j {
                let term = binomial(i, h);
                if h % 2 == 0 {
                    lhs += term;
                } else {
                    lhs -= term;
                }
            }
            let mut rhs = binomial(i - 1, j);
            if j % 2 == 1 {
                rhs = -rhs;
            }
            Ok(lhs == rhs)
        }
        Identity::SkippedSum { n, h, k } => {
            if !(k <= h && h < n) {
                return Err(Error::InvalidInput(format!(
                    "skipped_sum requires 0 <= k <= h < n, got n = {n}, h = {h}, k = {k}"
                )));
            }
            let mut lhs = Int::zero();
            for j in k..=h {
                let term = binomial(n, j) * binomial(j, k);
                if (j - k) % 2 == 0 {
                    lhs += term;
                } else {
                    lhs -= term;
                }
            }
            let rhs = lagrange_weight(n as i64, k, h)?;
            Ok(Rational::from(lhs) == rhs)
        }
        Identity::UnitySum { n, h } => {
            let mut lhs = Rational::zero();
            for k in 0..=h {
                lhs += lagrange_weight(n as i64, k, h)?;
            }
            Ok(lhs.is_one())
        }
    }
}

/// Gaussian rational `re + im*i` with exact field operations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    pub fn neg(&self) -> Self {
        GaussianRational { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    /// Complex conjugate; an involution.
    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`, the squared modulus, always a rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.mul(&r))
    }

    pub fn scale_int(&self, k: &Int) -> Self {
        let f = Rational::from(k.clone());
        GaussianRational { re: &self.re * &f, im: &self.im * &f }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// Approximate modulus, used only by tolerance bookkeeping.
    pub fn modulus_f64(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical text form: `p/q`, `r/si`, or `p/q+r/si` (sign-joined), with
    /// `0` for zero. This is the exact format used in JSON files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidInput("empty Gaussian rational".into()));
        }
        let bad = |s: &str| Error::InvalidInput(format!("cannot parse Gaussian rational {s:?}"));

        let parse_imag_coeff = |t: &str| -> Result<Rational> {
            match t {
                "" | "+" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                other => parse_rational(other),
            }
        };

        if let Some(body) = s.strip_suffix('i') {
            // Look for a separating sign that splits a real part from the
            // imaginary coefficient. Rational text has no exponents, so any
            // interior '+'/'-' that is not the leading sign separates.
            if let Some(pos) = body
                .char_indices()
                .skip(1)
                .find(|(_, c)| *c == '+' || *c == '-')
                .map(|(p, _)| p)
            {
                let re = parse_rational(&body[..pos]).map_err(|_| bad(s))?;
                let im = parse_imag_coeff(&body[pos..]).map_err(|_| bad(s))?;
                return Ok(GaussianRational { re, im });
            }
            let im = parse_imag_coeff(body).map_err(|_| bad(s))?;
            return Ok(GaussianRational { re: Rational::zero(), im });
        }
        // Pure real: must parse as a single rational.
        let re = parse_rational(s).map_err(|_| bad(s))?;
        Ok(GaussianRational { re, im: Rational::zero() })
    }
}
