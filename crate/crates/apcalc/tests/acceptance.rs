//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything rational runs at zero tolerance; the only approximate checks
//! are the fractional-power classifications, at 1e-9 relative.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apcalc::diff::{certified_order, newton_tableau, tableau_term, term_value, Sequence, TermForm};
use apcalc::exact::{rat, rational_pow, verify_identity, Identity, Rational};
use apcalc::group::GroupElement;
use apcalc::instances;
use apcalc::isometry::{
    check_mq_isometry, default_pairs, rho, sqrt_triangle_holds, Norm, Pair, ScalarValue, System,
    VerifyOptions,
};
use apcalc::matrix::{ExactMatrix, GaussianVector};
use apcalc::operator::{
    beta, defect, is_m_isometry, left_n_inverse_check, verify_hs_perturbation,
    verify_inverse_perturbation, OperatorClass,
};
use apcalc::power::{
    classify, eventual_monotonicity, power_seq, Monotonicity, PositiveSequence, PowerVariant,
    ScalarReport,
};
use apcalc::ring::{power_product_seq, verify_ring_perturbation};
use apcalc::seqops::{
    decimate, diagonal, gcd_refine, prefix_sums, shift, subsequence_by_steps, DoubleSequence,
};

fn rational_seq(values: &[i64]) -> Sequence<Rational> {
    Sequence::exact(values.iter().map(|&v| rat(v, 1)).collect()).unwrap()
}

#[test]
fn criterion_01_quadratic_worked_example() {
    let seq = rational_seq(&[2, 1, 2, 5, 10, 17, 26]);
    let report = certified_order(&seq, 6, 1).unwrap();
    assert_eq!(report.order, 2);
    assert!(report.strict);
    let form = report.monomial.as_ref().unwrap();
    assert_eq!(form.coefficients, vec![rat(2, 1), rat(-2, 1), rat(1, 1)]);
    // The fitted polynomial reproduces the opening terms exactly.
    for (n, expected) in [2i64, 1, 2, 5, 10].iter().enumerate() {
        assert_eq!(form.eval(n as u64), rat(*expected, 1));
    }
    assert_eq!(
        eventual_monotonicity(&report).unwrap(),
        Monotonicity::IncreasingFrom(1)
    );
    println!("criterion 1: PASS (n^2 - 2n + 2 certifies strict order 2, gamma = (2,-2,1), increasing from 1)");
}

#[test]
fn criterion_02_cubic_worked_example() {
    let seq = rational_seq(&[1, 5, 5, 7, 17, 41, 85]);
    let report = certified_order(&seq, 6, 1).unwrap();
    assert_eq!(report.order, 3);
    assert!(report.strict);
    assert_eq!(
        report.monomial.as_ref().unwrap().coefficients,
        vec![rat(1, 1), rat(8, 1), rat(-5, 1), rat(1, 1)]
    );
    assert_eq!(report.samples[1], report.samples[2]);
    assert_eq!(report.samples[1], rat(5, 1));
    println!("criterion 2: PASS (n^3 - 5n^2 + 8n + 1 certifies strict order 3 with a_1 = a_2 = 5)");
}

#[test]
fn criterion_03_combinatorial_identity_sweep() {
    let mut checked = 0usize;
    for i in 1..=40u64 {
        for j in 0..i {
            assert!(
                verify_identity(&Identity::AlternatingPartialSum { i, j }).unwrap(),
                "alternating sum fails at (i,j) = ({i},{j})"
            );
            checked += 1;
        }
    }
    for n in 1..=30u64 {
        for h in 0..n {
            for k in 0..=h {
                assert!(
                    verify_identity(&Identity::SkippedSum { n, h, k }).unwrap(),
                    "skipped sum fails at (n,h,k) = ({n},{h},{k})"
                );
                checked += 1;
            }
        }
    }
    for n in 0..=30u64 {
        for h in 0..=30u64 {
            assert!(
                verify_identity(&Identity::UnitySum { n, h }).unwrap(),
                "unity sum fails at (n,h) = ({n},{h})"
            );
            checked += 1;
        }
    }
    println!("criterion 3: PASS ({checked} identity instances, zero failures)");
}

#[test]
fn criterion_04_reconstruction_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..500 {
        let len = rng.gen_range(1..=16);
        let values: Vec<Rational> = (0..len)
            .map(|_| instances::random_rational(&mut rng, 50, 50))
            .collect();
        let seq = Sequence::exact(values.clone()).unwrap();
        let tableau = newton_tableau(&seq);
        for (n, expected) in values.iter().enumerate() {
            assert_eq!(&tableau_term(&tableau, n as u64), expected);
        }
    }
    for _ in 0..100 {
        let degree = rng.gen_range(0..=6);
        let seq = instances::random_strict_poly_sequence(&mut rng, degree, 16);
        let report = certified_order(&seq, 14, 1).unwrap();
        for n in 0..=48u64 {
            let newton = term_value(&report, n, TermForm::Newton).unwrap();
            let lagrange = term_value(&report, n, TermForm::Lagrange).unwrap();
            let bary = term_value(&report, n, TermForm::Barycentric).unwrap();
            assert_eq!(newton, lagrange, "forms disagree at n = {n}");
            assert_eq!(newton, bary, "forms disagree at n = {n}");
        }
    }
    println!("criterion 4: PASS (500 Newton reconstructions and 100 three-form agreements, exact)");
}

fn strict_order_of(seq: &Sequence<Rational>) -> usize {
    let report = certified_order(seq, seq.len() - 2, 1).unwrap();
    assert!(report.strict);
    report.order
}

#[test]
fn criterion_05_structural_theorem_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    // Shift and decimation preserve strict order.
    for _ in 0..200 {
        let degree = rng.gen_range(0..=4);
        let seq = instances::random_strict_poly_sequence(&mut rng, degree, 30);
        let k = rng.gen_range(1..=5);
        assert_eq!(strict_order_of(&shift(&seq, k).unwrap()), degree);
        let d = rng.gen_range(1..=5);
        assert_eq!(strict_order_of(&decimate(&seq, d).unwrap()), degree);
    }

    // Prefix sums raise the strict order by exactly one.
    for _ in 0..200 {
        let degree = rng.gen_range(0..=5);
        let seq = instances::random_strict_poly_sequence(&mut rng, degree, 14);
        assert_eq!(strict_order_of(&prefix_sums(&seq)), degree + 1);
    }

    // Subsequences along steps of strict order k give strict order h(k+1).
    for _ in 0..200 {
        let h = rng.gen_range(0..=3usize);
        let k = rng.gen_range(0..=2usize);
        let out_len = 11usize;
        let steps: Vec<usize> = match k {
            0 => {
                let c = rng.gen_range(1..=3usize);
                (0..out_len).map(|_| c).collect()
            }
            1 => {
                let a = rng.gen_range(1..=2usize);
                let b = rng.gen_range(1..=3usize);
                (0..out_len).map(|n| a * n + b).collect()
            }
            _ => {
                let a = rng.gen_range(1..=2usize);
                let b = rng.gen_range(0..=2usize);
                let c = rng.gen_range(1..=2usize);
                (0..out_len).map(|n| a * n * n + b * n + c).collect()
            }
        };
        // Confirm the steps really certify strict order k.
        let steps_seq = rational_seq(&steps.iter().map(|&s| s as i64).collect::<Vec<_>>());
        assert_eq!(strict_order_of(&steps_seq), k);

        let needed: usize = steps.iter().sum::<usize>() + 1;
        let base = instances::random_strict_poly_sequence(&mut rng, h, needed);
        let sub = subsequence_by_steps(&base, &steps).unwrap();
        assert_eq!(strict_order_of(&sub), h * (k + 1), "h = {h}, k = {k}");
    }

    // Diagonals of bivariate grids certify order <= row + column order.
    for _ in 0..200 {
        let row_deg = rng.gen_range(0..=4usize);
        let col_deg = rng.gen_range(0..=4usize);
        let grid = instances::random_bivariate_grid(&mut rng, row_deg, col_deg, 12);
        let dseq = DoubleSequence::exact(grid).unwrap();
        let report = diagonal(&dseq, 1).unwrap();
        assert!(report.row_order <= row_deg);
        assert!(report.col_order <= col_deg);
        let diag = certified_order(&report.diagonal, report.order_bound, 1).unwrap();
        assert!(
            diag.order <= report.order_bound,
            "diagonal order {} exceeds bound {}",
            diag.order,
            report.order_bound
        );
    }

    println!("criterion 5: PASS (200 exact instances per structural theorem, zero failures)");
}

#[test]
fn criterion_06_gcd_refinement_sweep() {
    let mut checked = 0usize;
    for c in 1..=6usize {
        for d in 1..=6usize {
            for h in 0..=4usize {
                for k in 0..=4usize {
                    let (e, l) = gcd_refine(c, h, d, k).unwrap();
                    assert_eq!(e, num_integer::gcd(c, d));
                    assert_eq!(l, h.min(k));
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 6: PASS ({checked} characteristic-polynomial gcd certificates)");
}

#[test]
fn criterion_07_ring_perturbation() {
    // Worked instance: identity pair perturbed by transposed Jordan blocks.
    let id = ExactMatrix::identity(2);
    let n = ExactMatrix::jordan_nilpotent(2);
    let report = verify_ring_perturbation(&id, &id, &n, &n.transpose(), 8, 1, 2).unwrap();
    assert_eq!(report.order_bound, 2);
    assert!(report.strict_attained);
    assert!(report.certificate_nonzero);
    assert_eq!(
        report.certificate,
        ExactMatrix::from_int_rows(&[&[0, 0], &[0, 1]])
    );
    let seq = power_product_seq(
        &id.add(&n.transpose()),
        &id.add(&n),
        7,
    )
    .unwrap();
    for (k, term) in seq.elements().iter().enumerate() {
        let k = k as i64;
        assert_eq!(term, &ExactMatrix::from_int_rows(&[&[1, k], &[k, 1 + k * k]]));
    }

    // Generated commuting instances never exceed the bound, and the
    // strictness certificate predicts strictness on every instance.
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut strict_count = 0usize;
    for i in 0..100 {
        let (y, x, a, b) = instances::ring_instance(&mut rng);
        let report = verify_ring_perturbation(&y, &x, &a, &b, 18, 1, y.dim()).unwrap();
        assert!(
            report.perturbed_order <= report.order_bound,
            "instance {i} exceeded the bound"
        );
        assert!(
            report.certificate_consistent,
            "instance {i}: certificate {} but strict attainment {}",
            report.certificate_nonzero, report.strict_attained
        );
        if report.strict_attained {
            strict_count += 1;
        }
    }
    println!(
        "criterion 7: PASS (worked instance + 100 generated, {strict_count} strict, certificate exact)"
    );
}

#[test]
fn criterion_08_operator_suite() {
    let shear = ExactMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
    assert!(GroupElement::is_zero(&defect(&shear, 3)));
    assert!(!GroupElement::is_zero(&beta(&shear, 2)));
    assert_eq!(is_m_isometry(&shear, 3).unwrap(), OperatorClass::Strict);

    let rotation = ExactMatrix::from_rational_rows(vec![
        vec![rat(3, 5), rat(4, 5)],
        vec![rat(-4, 5), rat(3, 5)],
    ])
    .unwrap();
    assert_eq!(is_m_isometry(&rotation, 1).unwrap(), OperatorClass::Strict);

    // T* is a left m-inverse of T exactly when T is an m-isometry.
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut checked = 0usize;
    for i in 0..100 {
        let t = match i % 4 {
            0 => instances::hs_instance(&mut rng).0,
            1 => {
                let (_, x, _, _) = instances::ring_instance(&mut rng);
                x
            }
            2 => {
                let dim = rng.gen_range(2..=3);
                let mut m = ExactMatrix::zeros(dim);
                for r in 0..dim {
                    for c in 0..dim {
                        m.set(
                            r,
                            c,
                            apcalc::GaussianRational::from_rational(
                                instances::random_rational(&mut rng, 2, 2),
                            ),
                        );
                    }
                }
                m
            }
            _ => {
                let (t, q) = instances::hs_instance(&mut rng);
                t.add(&q)
            }
        };
        for m in 1..=5usize {
            let iso = is_m_isometry(&t, m).unwrap();
            let inv = left_n_inverse_check(&t.adjoint(), &t, m).unwrap();
            assert_eq!(
                iso == OperatorClass::No,
                inv == OperatorClass::No,
                "instance {i}, m = {m}"
            );
            checked += 1;
        }
    }
    println!("criterion 8: PASS (worked operators + {checked} adjoint-inverse equivalences)");
}

#[test]
fn criterion_09_perturbation_theorems() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut strict_hs = 0usize;
    for i in 0..50 {
        let (t, q) = instances::hs_instance(&mut rng);
        let report = verify_hs_perturbation(&t, &q)
            .unwrap_or_else(|e| panic!("hs instance {i} failed: {e}"));
        // Strictness cross-check: beta_(2n+m-3)(T+Q) != 0 iff certificate != 0.
        assert!(
            report.consistent,
            "hs instance {i}: certificate {} vs strict {}",
            report.certificate_nonzero, report.strict
        );
        if report.strict {
            strict_hs += 1;
        }
    }
    let mut agreeing = 0usize;
    for i in 0..50 {
        let (s, t, p, q) = instances::inverse_instance(&mut rng);
        let report = verify_inverse_perturbation(&s, &t, &p, &q)
            .unwrap_or_else(|e| panic!("inverse instance {i} failed: {e}"));
        if report.consistent {
            agreeing += 1;
        }
    }
    println!(
        "criterion 9: PASS (50 isometry perturbations, {strict_hs} strict, certificate iff exact; \
         50 inverse perturbations, stated certificate agreed on {agreeing})"
    );
}

#[test]
fn criterion_10_rho_semi_distance() {
    let shear = ExactMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
    let sys = System::normed(shear.clone(), Norm::L2);
    let q = rat(2, 1);
    let x = GaussianVector::from_ints(&[0, 0]);
    let y = GaussianVector::from_ints(&[0, 1]);

    let report = rho(&sys, 3, &q, &Pair::Vectors(x, y)).unwrap();
    assert_eq!(report.rho_q, ScalarValue::Exact(rat(2, 1)));
    assert!(report.leading_match, "rho^q must equal (m-1)! gamma_(m-1)");

    // Invariance and the triangle inequality over a deterministic sample.
    let pairs = default_pairs(&sys);
    let rho_sq = |a: &GaussianVector, b: &GaussianVector| -> Rational {
        let r = rho(&sys, 3, &q, &Pair::Vectors(a.clone(), b.clone())).unwrap();
        match r.rho_q {
            ScalarValue::Exact(v) => v,
            ScalarValue::Approx(_) => panic!("expected exact mode"),
        }
    };
    let mut vectors: Vec<GaussianVector> = Vec::new();
    for p in pairs.iter().take(12) {
        if let Pair::Vectors(a, b) = p {
            let base = rho_sq(a, b);
            let moved = rho_sq(&shear.apply(a), &shear.apply(b));
            assert_eq!(base, moved, "rho must be invariant under the map");
            vectors.push(a.clone());
            vectors.push(b.clone());
        }
    }
    for i in 0..vectors.len().min(8) {
        for j in 0..vectors.len().min(8) {
            for k in 0..vectors.len().min(8) {
                let a = rho_sq(&vectors[i], &vectors[j]);
                let b = rho_sq(&vectors[i], &vectors[k]);
                let c = rho_sq(&vectors[k], &vectors[j]);
                assert!(
                    sqrt_triangle_holds(&a, &b, &c),
                    "triangle fails at ({i},{j},{k})"
                );
            }
        }
    }
    println!("criterion 10: PASS (rho^2 = 2 exactly, invariant, triangle holds on sampled triples)");
}

#[test]
fn criterion_11_power_classification() {
    let squares = PositiveSequence::from_rationals(
        (1..=12i64).map(|v| rat(v * v, 1)).collect(),
    )
    .unwrap();
    let candidates = [rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
    let cls = classify(&squares, &candidates, 6, 1e-9, 1).unwrap();
    let PowerVariant::Proper(p) = &cls.variant else {
        panic!("expected a proper order")
    };
    assert_eq!((p.exponent.clone(), p.order), (rat(1, 2), 1));
    for e in &cls.evidence {
        // q l = h s for every certified pair.
        assert_eq!(
            &e.exponent * Rational::from(apcalc::Int::from(p.order as i64)),
            &p.exponent * Rational::from(apcalc::Int::from(e.strict_order as i64)),
            "evidence ({}, {}) off the ladder",
            e.exponent,
            e.strict_order
        );
    }
    // The half-power runs in approximate mode and still certifies order 1.
    assert!(cls.evidence.iter().any(|e| e.exponent == rat(1, 2) && e.approximate));

    let doubling = PositiveSequence::from_rationals(
        (0..12).map(|n| rat(1i64 << n, 1)).collect(),
    )
    .unwrap();
    let cls = classify(&doubling, &candidates, 6, 1e-9, 1).unwrap();
    assert!(matches!(cls.variant, PowerVariant::NeverAp { .. }));

    let constant = PositiveSequence::from_rationals(vec![rat(5, 3); 10]).unwrap();
    let cls = classify(&constant, &candidates, 6, 1e-9, 1).unwrap();
    assert!(matches!(cls.variant, PowerVariant::Constant));

    // Exact square roots of the perfect squares re-certify strict order 1.
    let half = power_seq(&squares, &rat(1, 2)).unwrap();
    let report = half.analyze(4, 1).unwrap();
    assert!(matches!(report, ScalarReport::Approx(_)));
    assert_eq!(report.order(), 1);
    assert!(report.strict());

    // Worked trace check reused from the verification modules: shift by one
    // power and re-analyze an integer power exactly.
    let fourth = power_seq(&squares, &rat(2, 1)).unwrap();
    assert_eq!(fourth.analyze(6, 1).unwrap().order(), 4);

    println!("criterion 11: PASS (proper order (1/2, 1); exponential never; constants constant)");
}

#[test]
fn mq_isometry_worked_examples() {
    // The shear is a strict (3,2)-isometry with witness trace n^2 + 1.
    let sys = System::normed(ExactMatrix::from_int_rows(&[&[1, 1], &[0, 1]]), Norm::L2);
    let report =
        check_mq_isometry(&sys, 3, &rat(2, 1), 9, None, &VerifyOptions::default()).unwrap();
    assert_eq!(report.aggregate_m, 3);
    assert!(report.strict_witness.is_some());
    assert_eq!(report.proper, Some((3, rat(2, 1))));

    let trace_values: Vec<Rational> = (0..16i64).map(|n| rat(n * n + 1, 1)).collect();
    let trace = Sequence::exact(trace_values).unwrap();
    let decimated = decimate(&trace, 3).unwrap();
    let dec_report = certified_order(&decimated, 2, 1).unwrap();
    assert_eq!(dec_report.order, 2);
    assert!(dec_report.strict);

    // Powers of rationals stay exact along the whole pipeline.
    assert_eq!(rational_pow(&rat(3, 2), 4), rat(81, 16));
}
