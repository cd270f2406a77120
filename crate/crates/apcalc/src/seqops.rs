//! Structural operations on arithmetic progressions: shifts, prefix sums,
//! subsequences by steps, decimation, the diagonal of a double sequence, and
//! the characteristic-polynomial gcd refinement for decimated progressions.

use num_integer::Integer;
use num_traits::Zero;

use crate::diff::{certified_order, Sequence};
use crate::error::{Error, Result};
use crate::exact::{binomial, Int, Rational};
use crate::group::GroupElement;

/// Drops the first `k >= 1` terms; a strict order is preserved.
pub fn shift<E: GroupElement>(seq: &Sequence<E>, k: usize) -> Result<Sequence<E>> {
    if k == 0 {
        return Err(Error::InvalidInput("shift needs k >= 1".into()));
    }
    if k >= seq.len() {
        return Err(Error::InsufficientData(format!(
            "cannot shift by {k}: only {} terms available",
            seq.len()
        )));
    }
    Ok(seq.derived(seq.elements()[k..].to_vec()))
}

/// Running sums `A_n = a_0 + ... + a_n`; raises a strict order by one.
pub fn prefix_sums<E: GroupElement>(seq: &Sequence<E>) -> Sequence<E> {
    let mut acc = seq.elements()[0].zero_like();
    let sums = seq
        .elements()
        .iter()
        .map(|e| {
            acc = acc.add(e);
            acc.clone()
        })
        .collect();
    seq.derived(sums)
}

/// Extracts `(a_(g_0), a_(g_1), ...)` where `g_n = s_0 + ... + s_n`.
///
/// Steps must be strictly positive from index 1 on (`s_0 >= 0`), and every
/// partial sum must stay inside the horizon. When the base certifies strict
/// order `h` and the steps certify strict order `k`, the result certifies
/// strict order `h(k+1)` on its horizon.
pub fn subsequence_by_steps<E: GroupElement>(
    seq: &Sequence<E>,
    steps: &[usize],
) -> Result<Sequence<E>> {
    if steps.is_empty() {
        return Err(Error::InvalidInput("steps must be nonempty".into()));
    }
    if steps.iter().skip(1).any(|&s| s == 0) {
        return Err(Error::InvalidInput(
            "steps must be strictly positive from index 1 on".into(),
        ));
    }
    let mut index = 0usize;
    let mut picked = Vec::with_capacity(steps.len());
    for (n, &s) in steps.iter().enumerate() {
        index += s;
        if index >= seq.len() {
            return Err(Error::InsufficientData(format!(
                "step index g_{n} = {index} overflows horizon {}",
                seq.len()
            )));
        }
        picked.push(seq.elements()[index].clone());
    }
    Ok(seq.derived(picked))
}

/// Keeps every `d`-th term `(a_0, a_d, a_2d, ...)`; a strict order is
/// preserved.
pub fn decimate<E: GroupElement>(seq: &Sequence<E>, d: usize) -> Result<Sequence<E>> {
    if d == 0 {
        return Err(Error::InvalidInput("decimation stride must be >= 1".into()));
    }
    if seq.len() <= d {
        return Err(Error::InsufficientData(format!(
            "decimation by {d} needs more than {d} terms, got {}",
            seq.len()
        )));
    }
    Ok(seq.derived(seq.elements().iter().step_by(d).cloned().collect()))
}

/// Square grid of group elements whose rows and columns are progressions.
#[derive(Debug, Clone)]
pub struct DoubleSequence<E: GroupElement> {
    grid: Vec<Vec<E>>,
    tolerance: f64,
}

impl<E: GroupElement> DoubleSequence<E> {
    pub fn new(grid: Vec<Vec<E>>, tolerance: f64) -> Result<Self> {
        let n = grid.len();
        if n == 0 {
            return Err(Error::InvalidInput("grid must be nonempty".into()));
        }
        if grid.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("grid must be square".into()));
        }
        let first = grid[0][0].clone();
        if grid.iter().flatten().any(|e| !e.same_shape(&first)) {
            return Err(Error::InvalidInput("grid elements must share one shape".into()));
        }
        if E::EXACT && tolerance != 0.0 {
            return Err(Error::InvalidInput("exact grids require zero tolerance".into()));
        }
        Ok(DoubleSequence { grid, tolerance })
    }

    pub fn exact(grid: Vec<Vec<E>>) -> Result<Self> {
        Self::new(grid, 0.0)
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn row(&self, i: usize) -> Result<Sequence<E>> {
        Sequence::new(self.grid[i].clone(), self.tolerance)
    }

    pub fn column(&self, j: usize) -> Result<Sequence<E>> {
        Sequence::new(self.grid.iter().map(|r| r[j].clone()).collect(), self.tolerance)
    }
}

/// Diagonal of a double sequence together with the verified row/column orders.
#[derive(Debug, Clone)]
pub struct DiagonalReport<E: GroupElement> {
    pub diagonal: Sequence<E>,
    /// Largest certified row order `k`.
    pub row_order: usize,
    /// Largest certified column order `h`.
    pub col_order: usize,
    /// The claimed bound `k + h` for the diagonal's order.
    pub order_bound: usize,
}

/// Extracts the diagonal after verifying, row by row and column by column,
/// that the grid satisfies the progression hypotheses. Certification failures
/// are reported, never silently ignored.
pub fn diagonal<E: GroupElement>(
    dseq: &DoubleSequence<E>,
    min_windows: usize,
) -> Result<DiagonalReport<E>> {
    let n = dseq.size();
    if n < 2 {
        return Err(Error::InsufficientData("grid needs at least two rows".into()));
    }
    let h_max = n.saturating_sub(1 + min_windows);
    let mut row_order = 0usize;
    let mut col_order = 0usize;
    for i in 0..n {
        let report = certified_order(&dseq.row(i)?, h_max, min_windows).map_err(|e| {
            Error::HypothesisViolation(format!("row {i} failed order certification: {e}"))
        })?;
        row_order = row_order.max(report.order);
        let report = certified_order(&dseq.column(i)?, h_max, min_windows).map_err(|e| {
            Error::HypothesisViolation(format!("column {i} failed order certification: {e}"))
        })?;
        col_order = col_order.max(report.order);
    }
    let diag: Vec<E> = (0..n).map(|i| dseq.grid[i][i].clone()).collect();
    Ok(DiagonalReport {
        diagonal: Sequence::new(diag, dseq.tolerance)?,
        row_order,
        col_order,
        order_bound: row_order + col_order,
    })
}

/// Dense polynomial over the rationals, ascending degree, with an optional
/// `(z^c - 1)^multiplicity` provenance tag.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolynomial {
    /// Coefficients, constant term first; leading coefficient nonzero.
    pub coefficients: Vec<Rational>,
    /// When present, the dense coefficients expand `(z^c - 1)^m`.
    pub factored: Option<(usize, usize)>,
}

impl CharPolynomial {
    pub fn from_coefficients(mut coefficients: Vec<Rational>) -> Result<Self> {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() || coefficients.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        Ok(CharPolynomial { coefficients, factored: None })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Rescales so the leading coefficient is one.
    pub fn monic(&self) -> CharPolynomial {
        let lead = self.coefficients.last().expect("nonempty").clone();
        CharPolynomial {
            coefficients: self.coefficients.iter().map(|c| c / &lead).collect(),
            factored: self.factored,
        }
    }
}

/// Characteristic polynomial `(z^c - 1)^(h+1)` of a decimated progression of
/// order `h` with stride `c`.
pub fn char_poly(c: usize, h: usize) -> Result<CharPolynomial> {
    if c == 0 {
        return Err(Error::InvalidInput("stride c must be >= 1".into()));
    }
    let mult = h + 1;
    let mut coefficients = vec![Rational::zero(); c * mult + 1];
    for j in 0..=mult {
        let mut term = Rational::from(binomial(mult as u64, j as u64));
        if (mult - j) % 2 == 1 {
            term = -term;
        }
        coefficients[c * j] = term;
    }
    Ok(CharPolynomial { coefficients, factored: Some((c, mult)) })
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while rem.len() > db && rem.iter().any(|c| !Zero::is_zero(c)) {
        let dr = rem.len() - 1;
        let factor = &rem[dr] / lead;
        if !Zero::is_zero(&factor) {
            for i in 0..=db {
                let idx = dr - db + i;
                rem[idx] = &rem[idx] - &(&factor * &b[i]);
            }
        }
        rem.pop();
        while rem.len() > 1 && rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
    }
    rem
}

/// Monic greatest common divisor over the rationals, by the exact Euclidean
/// algorithm.
pub fn poly_gcd(p: &CharPolynomial, q: &CharPolynomial) -> Result<CharPolynomial> {
    let mut a = p.coefficients.clone();
    let mut b = q.coefficients.clone();
    if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("gcd of a zero polynomial".into()));
    }
    while !b.iter().all(Zero::is_zero) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    Ok(CharPolynomial::from_coefficients(a)?.monic())
}

/// The gcd refinement for decimated progressions: strides `c` and `d` with
/// strict orders `h` and `k` refine to stride `gcd(c,d)` with order
/// `min(h,k)`. The characteristic-polynomial identity
/// `gcd((z^c-1)^(h+1), (z^d-1)^(k+1)) = (z^e-1)^(l+1)` is checked as a
/// structural certificate and must never fail.
pub fn gcd_refine(c: usize, h: usize, d: usize, k: usize) -> Result<(usize, usize)> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidInput("strides must be >= 1".into()));
    }
    let e = c.gcd(&d);
    let l = h.min(k);
    let lhs = poly_gcd(&char_poly(c, h)?, &char_poly(d, k)?)?;
    let rhs = char_poly(e, l)?.monic();
    if lhs.coefficients != rhs.coefficients {
        return Err(Error::InternalInconsistency(format!(
            "characteristic gcd certificate failed for (c,h,d,k) = ({c},{h},{d},{k})"
        )));
    }
    Ok((e, l))
}

/// Weighted sum of Lemma-style falling factorials against a progression:
/// `sum_i C(h+n,i) (-1)^(h+n+1-i) i(i-1)...(i-l) a_i`; vanishes for every
/// `l <= n-2` when `a` has order `h`.
pub fn factorial_weighted_sum<E: GroupElement>(
    seq: &Sequence<E>,
    h: usize,
    n: usize,
    l: usize,
) -> Result<E> {
    if n < 2 || l > n - 2 {
        return Err(Error::InvalidInput(format!(
            "requires n >= 2 and l <= n - 2, got n = {n}, l = {l}"
        )));
    }
    if seq.len() < h + n + 1 {
        return Err(Error::InsufficientData(format!(
            "needs {} terms, got {}",
            h + n + 1,
            seq.len()
        )));
    }
    let mut acc = seq.elements()[0].zero_like();
    for i in 0..=(h + n) {
        let mut coeff = binomial((h + n) as u64, i as u64);
        for j in 0..=l {
            coeff *= Int::from(i as i64) - Int::from(j as i64);
        }
        if (h + n + 1 - i) % 2 == 1 {
            coeff = -coeff;
        }
        if !coeff.is_zero() {
            acc = acc.add(&seq.elements()[i].scale(&coeff));
        }
    }
    Ok(acc)
}
