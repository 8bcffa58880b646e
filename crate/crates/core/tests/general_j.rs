use std::f64::consts::PI;

use lande_spin::algebra::{c64, commutator, hermitian_eigensystem, ComplexMatrix};
use lande_spin::direction::Direction;
use lande_spin::general_j::*;
use lande_spin::lande::{compose, hermitian_flip, EigenvalueWeights, GenericAmplitudeTable};
use lande_spin::spin1;
use num_complex::Complex64;
use proptest::prelude::*;

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Wigner small-d by the explicit sum, indexed by doubled projections.
fn small_d(two_j: i64, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    let jpm = (two_j + two_m) / 2;
    let jmm = (two_j - two_m) / 2;
    let jpmp = (two_j + two_mp) / 2;
    let jmmp = (two_j - two_mp) / 2;
    let mp_m = (two_mp - two_m) / 2;
    let pre = (factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)).sqrt();
    let (s, c) = (beta / 2.0).sin_cos();
    let mut total = 0.0;
    for k in 0..=two_j {
        let (a, b, d) = (jpm - k, jmmp - k, k + mp_m);
        if a < 0 || b < 0 || d < 0 {
            continue;
        }
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let denom = factorial(a) * factorial(k) * factorial(b) * factorial(d);
        total += sign * pre / denom * c.powi((a + b) as i32) * s.powi((k + d) as i32);
    }
    total
}

fn wigner_rotation(s: &SpinSystem, a: &Direction) -> ComplexMatrix {
    let tj = s.two_j() as i64;
    ComplexMatrix::from_fn(s.dim(), |i, k| {
        let two_mp = tj - 2 * i as i64;
        let two_m = tj - 2 * k as i64;
        Complex64::from_polar(1.0, -a.phi() * two_mp as f64 / 2.0)
            * small_d(tj, two_mp, two_m, a.theta())
    })
}

fn dir(t: f64, p: f64) -> Direction {
    Direction::new(t, p).unwrap()
}

fn spins() -> Vec<SpinSystem> {
    [1, 2, 3, 4]
        .into_iter()
        .map(|t| SpinSystem::new(t).unwrap())
        .collect()
}

/// Largest deviation from "same up to one unit phase per row", plus a check
/// that the phase has unit modulus.
fn row_phase_defect(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let (ra, rb) = (a.row(i), b.row(i));
        let k = rb.first_large_index().expect("nonzero row");
        let phase = ra[k] / rb[k];
        worst = worst.max((phase.norm() - 1.0).abs());
        worst = worst.max(ra.max_abs_diff(&rb.scale(phase)));
    }
    worst
}

#[test]
fn rotation_matrix_matches_wigner_formula() {
    for s in spins().into_iter().chain([SpinSystem::new(10).unwrap()]) {
        for a in [dir(0.3, 0.0), dir(1.2, 2.5), dir(PI, 4.0), dir(2.7, 5.9)] {
            let got = rotation_matrix(&s, &a).unwrap();
            let want = wigner_rotation(&s, &a);
            assert!(
                got.max_abs_diff(&want) < 1e-10,
                "J={s} a={a}: {}",
                got.max_abs_diff(&want)
            );
        }
    }
}

#[test]
fn spin_one_standard_operators_are_the_closed_forms() {
    let s = SpinSystem::spin_one();
    let j = standard_operators_j(&s);
    let c = spin1::standard_operators();
    for (a, b) in [
        (&j.z, &c.z),
        (&j.x, &c.x),
        (&j.y, &c.y),
        (&j.plus, &c.plus),
        (&j.minus, &c.minus),
        (&j.squared, &c.squared),
    ] {
        assert!(a.max_abs_diff(&b.matrix) < 1e-15);
    }
}

#[test]
fn spin_one_direction_operator_is_the_closed_form() {
    let s = SpinSystem::spin_one();
    for a in [dir(0.3, 0.9), dir(2.0, 5.0)] {
        let diff = direction_operator_j(&s, &a).max_abs_diff(&spin1::direction_operator(&a).matrix);
        assert!(diff < 1e-15);
    }
}

#[test]
fn three_halves_spectrum() {
    let s = SpinSystem::new(3).unwrap();
    let eig = hermitian_eigensystem(&direction_operator_j(&s, &dir(PI / 3.0, 1.1))).unwrap();
    for (got, want) in eig.eigenvalues.iter().zip([1.5, 0.5, -0.5, -1.5]) {
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn spin_one_special_tables_up_to_row_phase() {
    let s = SpinSystem::spin_one();
    for a in [dir(0.4, 0.1), dir(1.7, 3.3), dir(3.0, 6.0)] {
        let closed = spin1::special_amplitudes(&a).entries;
        for gauge in [Gauge::Rotation, Gauge::FirstComponent] {
            let t = amplitudes_to_intermediate_with(&s, &a, gauge).unwrap();
            assert!(row_phase_defect(&t.entries, &closed) < 1e-9);
        }
        // the default gauge lands on the rephased printed table exactly
        let t = amplitudes_to_intermediate(&s, &a).unwrap();
        assert!(
            t.entries
                .max_abs_diff(&spin1::special_amplitudes_rephased(&a).entries)
                < 1e-12
        );
    }
}

#[test]
fn spin_one_general_tables_and_probabilities() {
    let s = SpinSystem::spin_one();
    let (a, c) = (dir(0.8, 4.1), dir(2.2, 0.6));
    let closed = spin1::general_amplitudes(&a, &c).entries;
    let numeric = general_amplitudes_j(&s, &a, &c).unwrap();
    assert!(numeric.entries.max_abs_diff(&closed) < 1e-12);
    let other = general_amplitudes_j_with(&s, &a, &c, Gauge::FirstComponent).unwrap();
    let p = spin1::probability_table(&a, &c);
    for i in 0..3 {
        for f in 0..3 {
            assert!((other.get(i, f).norm_sqr() - p.entries[i][f]).abs() < 1e-9);
        }
    }
}

#[test]
fn half_spin_half_angle() {
    let s = SpinSystem::new(1).unwrap();
    for theta in [0.0, 0.5, 1.9, PI] {
        let t = general_amplitudes_j(&s, &dir(theta, 0.7), &Direction::z()).unwrap();
        assert!((t.get(0, 0).norm_sqr() - (theta / 2.0).cos().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn repeated_direction_has_identity_probabilities() {
    for s in spins() {
        let a = dir(1.3, 2.9);
        let t = general_amplitudes_j(&s, &a, &a).unwrap();
        let p = t.probabilities();
        for (i, row) in p.iter().enumerate() {
            for (f, &x) in row.iter().enumerate() {
                assert!((x - if i == f { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn spin_one_generalized_operators_match_closed_forms() {
    let s = SpinSystem::spin_one();
    let (b, c) = (dir(0.9, 1.4), dir(2.5, 4.4));
    let sc = generalized_operator_j(&s, &b, &c, &s.projection_weights()).unwrap();
    assert!(sc.max_abs_diff(&spin1::generalized_sigma_c(&b, &c).matrix) < 1e-9);
    let xy = component_operators_j(&s, &b, &c).unwrap();
    assert!(xy.x.max_abs_diff(&spin1::generalized_sigma_x(&b, &c).op.matrix) < 1e-9);
    assert!(xy.y.max_abs_diff(&spin1::generalized_sigma_y(&b, &c).op.matrix) < 1e-9);
}

#[test]
fn standard_limit_for_spin_two() {
    let s = SpinSystem::new(4).unwrap();
    let ops = standard_operators_j(&s);
    let b = dir(1.1, 0.3);
    let xy = component_operators_j(&s, &b, &b).unwrap();
    assert!(xy.x.max_abs_diff(&ops.x) < 1e-9);
    assert!(xy.y.max_abs_diff(&ops.y) < 1e-9);
    let z = generalized_operator_j(&s, &b, &b, &s.projection_weights()).unwrap();
    assert!(z.max_abs_diff(&ops.z) < 1e-9);
}

#[test]
fn constant_weights_give_scalar_operator() {
    for s in spins() {
        let r = EigenvalueWeights::constant(s.casimir(), s.dim());
        let m = generalized_operator_j(&s, &dir(0.2, 0.1), &dir(2.0, 3.0), &r).unwrap();
        assert!(
            m.max_abs_diff(&ComplexMatrix::identity(s.dim()).scale(c64(s.casimir(), 0.0))) < 1e-12
        );
    }
}

fn angle() -> impl Strategy<Value = Direction> {
    (0.0..=PI, 0.0..(2.0 * PI)).prop_map(|(t, p)| Direction::new(t, p).unwrap())
}

fn spin() -> impl Strategy<Value = SpinSystem> {
    (1u32..=4).prop_map(|t| SpinSystem::new(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tables_are_unitary(s in spin(), a in angle(), c in angle()) {
        let t = general_amplitudes_j(&s, &a, &c).unwrap();
        prop_assert!(t.entries.unitarity_defect() < 1e-9);
    }

    #[test]
    fn generalized_spectrum_is_projections(s in spin(), b in angle(), c in angle()) {
        let m = generalized_operator_j(&s, &b, &c, &s.projection_weights()).unwrap();
        prop_assert!(m.hermiticity_defect() < 1e-12);
        let eig = hermitian_eigensystem(&m).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip(s.projections()) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn arbitrary_weights_become_the_spectrum(
        b in angle(), c in angle(), w in prop::collection::vec(-5.0f64..5.0, 4)
    ) {
        let s = SpinSystem::new(3).unwrap();
        let m = generalized_operator_j(&s, &b, &c, &EigenvalueWeights::new(w.clone()).unwrap()).unwrap();
        let mut want = w;
        want.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let eig = hermitian_eigensystem(&m).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip(want) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn components_close_the_algebra(s in spin(), b in angle(), c in angle()) {
        let z = generalized_operator_j(&s, &b, &c, &s.projection_weights()).unwrap();
        let xy = component_operators_j(&s, &b, &c).unwrap();
        let i = c64(0.0, 1.0);
        prop_assert!(commutator(&xy.x, &xy.y).unwrap().max_abs_diff(&z.scale(i)) < 1e-9);
        prop_assert!(commutator(&xy.y, &z).unwrap().max_abs_diff(&xy.x.scale(i)) < 1e-9);
        prop_assert!(commutator(&z, &xy.x).unwrap().max_abs_diff(&xy.y.scale(i)) < 1e-9);
        let sq = &(&(&xy.x * &xy.x) + &(&xy.y * &xy.y)) + &(&z * &z);
        let want = ComplexMatrix::identity(s.dim()).scale(c64(s.casimir(), 0.0));
        prop_assert!(sq.max_abs_diff(&want) < 1e-9);
    }

    #[test]
    fn intermediate_rephasing_leaves_probabilities(
        s in spin(), a in angle(), c in angle(), alphas in prop::collection::vec(0.0f64..6.3, 5)
    ) {
        let ta = amplitudes_to_intermediate(&s, &a).unwrap();
        let tc = amplitudes_to_intermediate(&s, &c).unwrap();
        let n = s.dim();
        let d = ComplexMatrix::from_fn(n, |i, k| {
            if i == k { Complex64::from_polar(1.0, alphas[i]) } else { c64(0.0, 0.0) }
        });
        let ta2 = GenericAmplitudeTable::new(a, Direction::z(), &ta.entries * &d);
        let tc2 = GenericAmplitudeTable::new(c, Direction::z(), &tc.entries * &d);
        let direct = general_amplitudes_j(&s, &a, &c).unwrap().probabilities();
        let rephased = compose(&ta2, &hermitian_flip(&tc2)).unwrap().probabilities();
        for (r1, r2) in direct.iter().zip(&rephased) {
            for (x, y) in r1.iter().zip(r2) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chained_tables_compose(s in spin(), a in angle(), b in angle(), c in angle()) {
        let ab = general_amplitudes_j(&s, &a, &b).unwrap();
        let bc = general_amplitudes_j(&s, &b, &c).unwrap();
        let ac = general_amplitudes_j(&s, &a, &c).unwrap();
        let composed = compose(&ab, &bc).unwrap();
        // modulus level, then amplitude level once row phases are divided out
        for i in 0..s.dim() {
            for f in 0..s.dim() {
                prop_assert!((composed.get(i, f).norm() - ac.get(i, f).norm()).abs() < 1e-9);
            }
        }
        prop_assert!(row_phase_defect(&composed.entries, &ac.entries) < 1e-9);
    }
}
