//! Deterministic instance builders for the randomized verification suites.
//!
//! Commuting pairs are built constructively: perturbations are polynomials
//! (with zero constant term) in the nilpotent part of the operator they must
//! commute with, and unitary scalars come from Gaussian-rational units such
//! as (3+4i)/5. Random independent matrices almost never commute, so nothing
//! here is rejection-sampled.

use rand::Rng;

use crate::diff::{PolynomialForm, Sequence};
use crate::exact::{GaussianRational, Int, Rational};
use crate::group::GroupElement;
use crate::matrix::ExactMatrix;
use crate::power::PositiveSequence;

/// Uniform small rational with numerator in `[-max_num, max_num]` and
/// denominator in `[1, max_den]`.
pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::new(
        Int::from(rng.gen_range(-max_num..=max_num)),
        Int::from(rng.gen_range(1..=max_den)),
    )
}

/// Random polynomial sequence of exact degree `degree` over `len` indices.
pub fn random_strict_poly_sequence<R: Rng>(
    rng: &mut R,
    degree: usize,
    len: usize,
) -> Sequence<Rational> {
    let mut coefficients: Vec<Rational> =
        (0..=degree).map(|_| random_rational(rng, 9, 4)).collect();
    while coefficients[degree] == Rational::from(Int::from(0)) {
        coefficients[degree] = random_rational(rng, 9, 4);
    }
    let form = PolynomialForm { coefficients };
    Sequence::exact((0..len as u64).map(|n| form.eval(n)).collect()).expect("nonempty")
}

/// Random positive strict progression: a strict polynomial sequence with
/// positive leading coefficient, shifted up until every prefix value is
/// positive.
pub fn random_positive_strict_ap<R: Rng>(
    rng: &mut R,
    degree: usize,
    len: usize,
) -> PositiveSequence {
    use num_traits::Signed;
    let base = random_strict_poly_sequence(rng, degree, len);
    let mut values: Vec<Rational> = base.elements().to_vec();
    let lead_sign_fix = !values.is_empty() && {
        let report = crate::diff::certified_order(&base, degree.max(1), 1).ok();
        match report.and_then(|r| r.monomial) {
            Some(form) => form.coefficients.last().map(Signed::is_negative).unwrap_or(false),
            None => false,
        }
    };
    if lead_sign_fix {
        values = values.iter().map(|v| -v).collect();
    }
    let min = values.iter().min().cloned().expect("nonempty");
    if !min.is_positive() {
        let shift = Rational::from(Int::from(1)) - min;
        values = values.iter().map(|v| v + &shift).collect();
    }
    PositiveSequence::from_rationals(values).expect("positive by construction")
}

/// Random strictly upper-triangular (hence nilpotent) rational matrix.
pub fn random_strictly_upper<R: Rng>(rng: &mut R, dim: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            m.set(i, j, GaussianRational::from_rational(random_rational(rng, 3, 2)));
        }
    }
    m
}

/// Random polynomial in `base` with zero constant term: `c_1 base + c_2
/// base^2 + ...`; commutes with anything `base` commutes with, and is
/// nilpotent whenever `base` is.
pub fn random_zero_constant_poly<R: Rng>(
    rng: &mut R,
    base: &ExactMatrix,
    max_degree: usize,
) -> ExactMatrix {
    let mut acc = ExactMatrix::zeros(base.dim());
    let mut pow = ExactMatrix::identity(base.dim());
    for _ in 1..=max_degree {
        pow = pow.matmul(base);
        let c = random_rational(rng, 2, 2);
        acc = acc.add(&pow.scale_gaussian(&GaussianRational::from_rational(c)));
    }
    acc
}

/// Gaussian-rational units of modulus one, from Pythagorean triples.
pub fn random_unit<R: Rng>(rng: &mut R) -> GaussianRational {
    let units = [
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::i(),
        GaussianRational::new(Rational::new(Int::from(3), Int::from(5)), Rational::new(Int::from(4), Int::from(5))),
        GaussianRational::new(Rational::new(Int::from(3), Int::from(5)), Rational::new(Int::from(-4), Int::from(5))),
        GaussianRational::new(Rational::new(Int::from(5), Int::from(13)), Rational::new(Int::from(12), Int::from(13))),
    ];
    units[rng.gen_range(0..units.len())].clone()
}

/// `lambda (I + J_dim)` with `|lambda| = 1`: a strict `(2 dim - 1)`-isometry
/// whose nilpotent part is the Jordan block.
pub fn jordan_isometry_block<R: Rng>(rng: &mut R, dim: usize) -> (ExactMatrix, ExactMatrix) {
    let j = ExactMatrix::jordan_nilpotent(dim);
    let block = ExactMatrix::identity(dim)
        .add(&j)
        .scale_gaussian(&random_unit(rng));
    (block, j)
}

/// A ring-perturbation instance `(y, x, a, b)` with all hypotheses holding
/// by construction. Three families keep both certificate branches covered:
/// unipotent bases with polynomial perturbations (usually non-strict),
/// identity bases with full-index Jordan pairs (strict), and identity bases
/// with random polynomial nilpotents.
pub fn ring_instance<R: Rng>(rng: &mut R) -> (ExactMatrix, ExactMatrix, ExactMatrix, ExactMatrix) {
    let dim = rng.gen_range(2..=4);
    match rng.gen_range(0..3u8) {
        0 => {
            let u = random_strictly_upper(rng, dim);
            let v = random_strictly_upper(rng, dim).transpose();
            let x = ExactMatrix::identity(dim).add(&u);
            let y = ExactMatrix::identity(dim).add(&v);
            let a = random_zero_constant_poly(rng, &u, dim - 1);
            let b = random_zero_constant_poly(rng, &v, dim - 1);
            (y, x, a, b)
        }
        1 => {
            // Constant base; the perturbed order is carried entirely by the
            // Jordan pair and the certificate b^(m-1) a^(n-1) is nonzero.
            let id = ExactMatrix::identity(dim);
            let j = ExactMatrix::jordan_nilpotent(dim);
            let c1 = GaussianRational::from_rational(random_rational(rng, 2, 2))
                .add(&GaussianRational::from_int(3));
            let c2 = GaussianRational::from_rational(random_rational(rng, 2, 2))
                .add(&GaussianRational::from_int(3));
            (id.clone(), id, j.scale_gaussian(&c1), j.transpose().scale_gaussian(&c2))
        }
        _ => {
            let id = ExactMatrix::identity(dim);
            let u = ExactMatrix::jordan_nilpotent(dim);
            let a = random_zero_constant_poly(rng, &u, dim - 1);
            let b = random_zero_constant_poly(rng, &u.transpose(), dim - 1);
            (id.clone(), id, a, b)
        }
    }
}

/// A commuting `(T, Q)` pair with `T` a strict m-isometry (built from
/// unit-scaled Jordan blocks) and `Q` nilpotent.
pub fn hs_instance<R: Rng>(rng: &mut R) -> (ExactMatrix, ExactMatrix) {
    let blocks = rng.gen_range(1..=2usize);
    let mut t_blocks = Vec::with_capacity(blocks);
    let mut q_blocks = Vec::with_capacity(blocks);
    for _ in 0..blocks {
        let dim = rng.gen_range(1..=3usize);
        let (t, j) = jordan_isometry_block(rng, dim);
        let q = if dim == 1 {
            ExactMatrix::zeros(1)
        } else {
            random_zero_constant_poly(rng, &j, dim - 1)
        };
        t_blocks.push(t);
        q_blocks.push(q);
    }
    let mut t = ExactMatrix::block_diag(&t_blocks);
    let mut q = ExactMatrix::block_diag(&q_blocks);
    if q.is_zero() {
        // Keep the perturbation honest: fall back to a genuine nilpotent.
        let extra = ExactMatrix::jordan_nilpotent(2);
        let unit = random_unit(rng);
        t = ExactMatrix::block_diag(&[t, ExactMatrix::identity(2).scale_gaussian(&unit)]);
        let pad = ExactMatrix::zeros(q.dim());
        q = ExactMatrix::block_diag(&[pad, extra]);
    }
    (t, q)
}

/// A left-inverse perturbation instance `(S, T, P, Q)` with `S` a strict
/// left n-inverse of `T` and both perturbations commuting appropriately.
pub fn inverse_instance<R: Rng>(
    rng: &mut R,
) -> (ExactMatrix, ExactMatrix, ExactMatrix, ExactMatrix) {
    if rng.gen_bool(0.5) {
        // Unipotent pair: (I+V)^k (I+U)^k is polynomial in k for any
        // nilpotents, so S is a strict left n-inverse for the fitted n.
        let dim = rng.gen_range(2..=4);
        let u = random_strictly_upper(rng, dim);
        let v = random_strictly_upper(rng, dim).transpose();
        let s = ExactMatrix::identity(dim).add(&v);
        let t = ExactMatrix::identity(dim).add(&u);
        let p = random_zero_constant_poly(rng, &v, dim - 1);
        let q = random_zero_constant_poly(rng, &u, dim - 1);
        (s, t, p, q)
    } else {
        // Isometry-derived pair: S = T* makes S a left m-inverse of T.
        let dim = rng.gen_range(2..=3);
        let (t, j) = jordan_isometry_block(rng, dim);
        let s = t.adjoint();
        let p = random_zero_constant_poly(rng, &j.transpose(), j.dim() - 1);
        let q = random_zero_constant_poly(rng, &j, j.dim() - 1);
        (s, t, p, q)
    }
}

/// Bivariate polynomial grid `p(i, j)` of bidegree `(row_deg, col_deg)` on
/// an `n x n` grid; rows have order `row_deg` in `j`, columns `col_deg` in `i`.
pub fn random_bivariate_grid<R: Rng>(
    rng: &mut R,
    row_deg: usize,
    col_deg: usize,
    n: usize,
) -> Vec<Vec<Rational>> {
    let coeffs: Vec<Vec<Rational>> = (0..=col_deg)
        .map(|_| (0..=row_deg).map(|_| random_rational(rng, 5, 3)).collect())
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Rational::from(Int::from(0));
                    let mut ip = Rational::from(Int::from(1));
                    for row in &coeffs {
                        let mut jp = Rational::from(Int::from(1));
                        for c in row {
                            acc += c * &ip * &jp;
                            jp *= Rational::from(Int::from(j as i64));
                        }
                        ip *= Rational::from(Int::from(i as i64));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
