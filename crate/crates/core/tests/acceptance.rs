//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line straight to
//! stdout (bypassing libtest capture) and then asserts.
//!
//! `cargo test --test acceptance -- --test-threads=1`

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use lande_spin::algebra::{c64, commutator, hermitian_eigensystem, ComplexMatrix, ComplexVector};
use lande_spin::cli::output::{to_json_line, OperatorRecord, ProbabilityRecord, VerifyRecord};
use lande_spin::direction::Direction;
use lande_spin::general_j::*;
use lande_spin::lande::{
    compose, hermitian_flip, operator_from_amplitudes, EigenvalueWeights, GenericAmplitudeTable,
};
use lande_spin::measure::{
    chain_distribution, goodness_of_fit, max_binomial_z, simulate, MeasurementChain,
};
use lande_spin::spin1::*;
use lande_spin::verify::{random_direction, random_unitary};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-12;
const NUMERIC: f64 = 1e-9;

fn report(n: u32, title: &str, ok: bool, detail: String) {
    let line = format!(
        "criterion {n:>2} {}: {title} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(ok, "criterion {n} failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pairs(seed: u64, count: usize) -> Vec<(Direction, Direction)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (random_direction(&mut r), random_direction(&mut r)))
        .collect()
}

/// Residual of `a = D b` for the best diagonal unit-phase `D`, plus how far
/// each estimated phase is from unit modulus.
fn row_phase_defect(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let k = (0..n)
            .max_by(|&x, &y| b[(i, x)].norm().total_cmp(&b[(i, y)].norm()))
            .unwrap();
        let phase = a[(i, k)] / b[(i, k)];
        worst = worst.max((phase.norm() - 1.0).abs());
        for f in 0..n {
            worst = worst.max((a[(i, f)] - phase * b[(i, f)]).norm());
        }
    }
    worst
}

fn sorted_spectrum_defect(m: &ComplexMatrix, want: &[f64]) -> f64 {
    let eig = hermitian_eigensystem(m).unwrap();
    eig.eigenvalues
        .iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max)
}

fn scalar(n: usize, r: f64) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale(c64(r, 0.0))
}

#[test]
fn criterion_01_standard_forms() {
    let s = standard_operators();
    let (o, r2, h, ih) = (
        c64(0.0, 0.0),
        c64(SQRT_2, 0.0),
        c64(FRAC_1_SQRT_2, 0.0),
        c64(0.0, FRAC_1_SQRT_2),
    );
    let want = [
        (
            "z",
            &s.z.matrix,
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]),
        ),
        (
            "plus",
            &s.plus.matrix,
            ComplexMatrix::from_rows(&[[o, r2, o], [o, o, r2], [o, o, o]]),
        ),
        (
            "minus",
            &s.minus.matrix,
            ComplexMatrix::from_rows(&[[o, o, o], [r2, o, o], [o, r2, o]]),
        ),
        (
            "x",
            &s.x.matrix,
            ComplexMatrix::from_rows(&[[o, h, o], [h, o, h], [o, h, o]]),
        ),
        (
            "y",
            &s.y.matrix,
            ComplexMatrix::from_rows(&[[o, -ih, o], [ih, o, -ih], [o, ih, o]]),
        ),
        (
            "squared",
            &s.squared.matrix,
            ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 2.0]),
        ),
    ];
    let bad: Vec<&str> = want
        .iter()
        .filter(|(_, got, w)| *got != w)
        .map(|(n, _, _)| *n)
        .collect();
    report(
        1,
        "standard spin-1 matrices exact",
        bad.is_empty(),
        format!("mismatched: {bad:?}"),
    );
}

#[test]
fn criterion_02_rows_normalized() {
    let mut worst: f64 = 0.0;
    for (a, c) in pairs(2, 10_000) {
        for t in [probability_table(&a, &c), closed_form_probabilities(&a, &c)] {
            for s in t.row_sums() {
                worst = worst.max((s - 1.0).abs());
            }
        }
    }
    report(
        2,
        "probability rows sum to one, 10000 pairs",
        worst <= EXACT,
        format!("max |sum - 1| = {worst:.2e}"),
    );
}

#[test]
fn criterion_03_composition() {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (c, a, e) = (
            random_direction(&mut r),
            random_direction(&mut r),
            random_direction(&mut r),
        );
        let composed = compose(
            &general_amplitudes(&c, &a).to_generic(),
            &general_amplitudes(&a, &e).to_generic(),
        )
        .unwrap();
        worst = worst.max(
            composed
                .entries
                .max_abs_diff(&general_amplitudes(&c, &e).entries),
        );
    }
    report(
        3,
        "composed tables match direct tables, 1000 triples",
        worst <= EXACT,
        format!("max residual {worst:.2e}"),
    );
}

#[test]
fn criterion_04_flip() {
    let mut worst: f64 = 0.0;
    for (a, c) in pairs(4, 1000) {
        let flipped = hermitian_flip(&general_amplitudes(&a, &c).to_generic());
        worst = worst.max(
            flipped
                .entries
                .max_abs_diff(&general_amplitudes(&c, &a).entries),
        );
    }
    report(
        4,
        "swapped directions give the conjugate transpose",
        worst <= EXACT,
        format!("max residual {worst:.2e}"),
    );
}

#[test]
fn criterion_05_eigen_equations() {
    let mut worst: f64 = 0.0;
    for (b, c) in pairs(5, 1000) {
        let xs = generalized_sigma_x(&b, &c);
        let ys = generalized_sigma_y(&b, &c);
        let z = generalized_sigma_c(&b, &c).matrix;
        let zv = generalized_sigma_c_eigvecs(&b, &c);
        for (op, vecs) in [
            (&z, &zv),
            (&xs.op.matrix, &xs.eigvecs),
            (&ys.op.matrix, &ys.eigvecs),
        ] {
            for v in vecs {
                let lhs = op.mul_vec(&v.entries);
                worst =
                    worst.max(lhs.max_abs_diff(&v.entries.scale(c64(v.projection.value(), 0.0))));
            }
        }
    }
    report(
        5,
        "closed-form eigenvectors solve their operators",
        worst <= EXACT,
        format!("max residual {worst:.2e}"),
    );
}

#[test]
fn criterion_06_algebra() {
    // Orientation asserted: [x, y] = i c, [y, c] = i x, [c, x] = i y. The
    // printed form pairing x with c to give i z has its operands misordered;
    // only this right-handed cyclic order holds for the generalized family.
    let i = c64(0.0, 1.0);
    let two = scalar(3, 2.0);
    let (mut comm, mut sq): (f64, f64) = (0.0, 0.0);
    for (b, c) in pairs(6, 1000) {
        let z = generalized_sigma_c(&b, &c).matrix;
        let x = generalized_sigma_x(&b, &c).op.matrix;
        let y = generalized_sigma_y(&b, &c).op.matrix;
        for (p, q, r) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
            comm = comm.max(commutator(p, q).unwrap().max_abs_diff(&r.scale(i)));
        }
        let sum = &(&(&x * &x) + &(&y * &y)) + &(&z * &z);
        sq = sq.max(sum.max_abs_diff(&two));
        sq = sq.max(sigma_squared_from_components(&b, &c).max_abs_diff(&two));
    }
    report(
        6,
        "cyclic commutators and sum of squares",
        comm <= EXACT && sq <= EXACT,
        format!("commutators {comm:.2e}, squares {sq:.2e}, order [x,y]=ic [y,c]=ix [c,x]=iy"),
    );
}

#[test]
fn criterion_07_ladders() {
    let r2 = c64(SQRT_2, 0.0);
    let zero = ComplexVector::zeros(3);
    let (mut act, mut adj): (f64, f64) = (0.0, 0.0);
    for (b, c) in pairs(7, 1000) {
        let (plus, minus) = generalized_ladder(&b, &c);
        adj = adj.max(minus.matrix.max_abs_diff(&plus.matrix.adjoint()));
        let xi = generalized_sigma_c_eigvecs(&b, &c);
        let (p, z, m) = (&xi[0].entries, &xi[1].entries, &xi[2].entries);
        let checks = [
            plus.matrix.mul_vec(p).max_abs_diff(&zero),
            plus.matrix.mul_vec(z).max_abs_diff(&p.scale(r2)),
            plus.matrix.mul_vec(m).max_abs_diff(&z.scale(r2)),
            minus.matrix.mul_vec(p).max_abs_diff(&z.scale(r2)),
            minus.matrix.mul_vec(z).max_abs_diff(&m.scale(r2)),
            minus.matrix.mul_vec(m).max_abs_diff(&zero),
        ];
        act = checks.into_iter().fold(act, f64::max);
    }
    report(
        7,
        "ladder actions and adjointness",
        act <= EXACT && adj <= EXACT,
        format!("actions {act:.2e}, adjoint {adj:.2e}"),
    );
}

#[test]
fn criterion_08_symmetries() {
    let mut worst: f64 = 0.0;
    for (a, c) in pairs(8, 1000) {
        worst = symmetry_residuals(&general_amplitudes(&a, &c))
            .into_iter()
            .fold(worst, f64::max);
    }
    report(
        8,
        "nine amplitude symmetry relations",
        worst <= EXACT,
        format!("max residual {worst:.2e}"),
    );
}

#[test]
fn criterion_09_constant_weights() {
    let mut r = rng(9);
    let (mut arbitrary, mut derived): (f64, f64) = (0.0, 0.0);
    let z = Direction::z();
    for _ in 0..1000 {
        let n = r.random_range(1..=8);
        let w = r.random_range(-5.0..5.0);
        let t = GenericAmplitudeTable::new(z, random_direction(&mut r), random_unitary(&mut r, n));
        let m = operator_from_amplitudes(&t, &EigenvalueWeights::constant(w, n)).unwrap();
        arbitrary = arbitrary.max(m.max_abs_diff(&scalar(n, w)));

        let s = SpinSystem::new(r.random_range(1..=8)).unwrap();
        let a = random_direction(&mut r);
        let t = amplitudes_to_intermediate(&s, &a).unwrap();
        let m = operator_from_amplitudes(&t, &EigenvalueWeights::constant(w, s.dim())).unwrap();
        derived = derived.max(m.max_abs_diff(&scalar(s.dim(), w)));
        let t = general_amplitudes_j(&s, &a, &random_direction(&mut r)).unwrap();
        let m = operator_from_amplitudes(&t, &EigenvalueWeights::constant(w, s.dim())).unwrap();
        derived = derived.max(m.max_abs_diff(&scalar(s.dim(), w)));
    }
    report(
        9,
        "constant weights give a multiple of the identity",
        arbitrary <= EXACT && derived <= NUMERIC,
        format!("unitary tables {arbitrary:.2e}, eigensolver tables {derived:.2e}"),
    );
}

fn spin_one_engine_defect(b: &Direction, c: &Direction) -> f64 {
    let s = SpinSystem::spin_one();
    let r = s.projection_weights();
    let mut worst: f64 = 0.0;
    let mut see = |d: f64| worst = worst.max(d);

    see(row_phase_defect(
        &amplitudes_to_intermediate(&s, c).unwrap().entries,
        &special_amplitudes(c).entries,
    ));
    see(row_phase_defect(
        &general_amplitudes_j(&s, b, c).unwrap().entries,
        &general_amplitudes(b, c).entries,
    ));

    let z = generalized_operator_j(&s, b, c, &r).unwrap();
    let comps = component_operators_j(&s, b, c).unwrap();
    let i = c64(0.0, 1.0);
    let plus = &comps.x + &comps.y.scale(i);
    let minus = &comps.x - &comps.y.scale(i);
    let (cp, cm) = generalized_ladder(b, c);
    see(z.max_abs_diff(&generalized_sigma_c(b, c).matrix));
    see(comps.x.max_abs_diff(&generalized_sigma_x(b, c).op.matrix));
    see(comps.y.max_abs_diff(&generalized_sigma_y(b, c).op.matrix));
    see(plus.max_abs_diff(&cp.matrix));
    see(minus.max_abs_diff(&cm.matrix));
    let sq = &(&(&comps.x * &comps.x) + &(&comps.y * &comps.y)) + &(&z * &z);
    see(sq.max_abs_diff(&sigma_squared(b, c).matrix));

    // eigenvectors: numeric rows of the reversed table against closed forms
    let rows = general_amplitudes_j(&s, c, b).unwrap().entries;
    let closed = generalized_sigma_c_eigvecs(b, c);
    let closed = ComplexMatrix::from_fn(3, |k, f| closed[k].entries[f]);
    see(row_phase_defect(&rows, &closed));
    for (op, vecs) in [
        (&comps.x, generalized_sigma_x(b, c).eigvecs),
        (&comps.y, generalized_sigma_y(b, c).eigvecs),
    ] {
        let eig = hermitian_eigensystem(op).unwrap();
        let numeric = ComplexMatrix::from_fn(3, |k, f| eig.eigenvectors[k][f]);
        let closed = ComplexMatrix::from_fn(3, |k, f| vecs[k].entries[f]);
        see(row_phase_defect(&numeric, &closed));
    }
    worst
}

fn general_spin_defect(s: &SpinSystem, b: &Direction, c: &Direction) -> f64 {
    let r = s.projection_weights();
    let proj = s.projections();
    let mut worst: f64 = 0.0;
    let mut see = |d: f64| worst = worst.max(d);

    see(general_amplitudes_j(s, b, c)
        .unwrap()
        .entries
        .unitarity_defect());
    let z = generalized_operator_j(s, b, c, &r).unwrap();
    let comps = component_operators_j(s, b, c).unwrap();
    for m in [&z, &comps.x, &comps.y] {
        see(sorted_spectrum_defect(m, &proj));
    }
    let sq = &(&(&comps.x * &comps.x) + &(&comps.y * &comps.y)) + &(&z * &z);
    see(sq.max_abs_diff(&scalar(s.dim(), s.casimir())));

    let std = standard_operators_j(s);
    let limit = component_operators_j(s, b, b).unwrap();
    see(generalized_operator_j(s, b, b, &r)
        .unwrap()
        .max_abs_diff(&std.z));
    see(limit.x.max_abs_diff(&std.x));
    see(limit.y.max_abs_diff(&std.y));
    worst
}

#[test]
fn criterion_10_general_spin() {
    let mut one: f64 = 0.0;
    for (b, c) in pairs(10, 1000) {
        one = one.max(spin_one_engine_defect(&b, &c));
    }
    let std = standard_operators_j(&SpinSystem::spin_one());
    let closed = standard_operators();
    for (got, want) in [
        (&std.z, &closed.z.matrix),
        (&std.x, &closed.x.matrix),
        (&std.y, &closed.y.matrix),
    ] {
        one = one.max(got.max_abs_diff(want));
    }

    let mut others = Vec::new();
    for two_j in [1, 3, 4] {
        let s = SpinSystem::new(two_j).unwrap();
        let worst = pairs(100 + two_j as u64, 1000)
            .iter()
            .map(|(b, c)| general_spin_defect(&s, b, c))
            .fold(0.0, f64::max);
        others.push((s.to_string(), worst));
    }
    let ok = one <= NUMERIC && others.iter().all(|(_, w)| *w <= NUMERIC);
    report(
        10,
        "numeric engine for general J",
        ok,
        format!("J=1 vs closed forms {one:.2e}, others {others:?}"),
    );
}

#[test]
fn criterion_11_simulator() {
    let chain = MeasurementChain::new(
        SpinSystem::spin_one(),
        Direction::new(0.4, 0.3).unwrap(),
        0,
        vec![
            Direction::new(1.9, 0.8).unwrap(),
            Direction::new(0.9, 4.0).unwrap(),
        ],
    )
    .unwrap();
    let dist = chain_distribution(&chain).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for seed in 1..=5u64 {
        let start = Instant::now();
        let h = simulate(&chain, 1_000_000, seed).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let fit = goodness_of_fit(&h, &dist).unwrap();
        let z = max_binomial_z(&h, &dist);
        ok &= fit.p_value > 0.001 && z <= 4.0 && secs <= 60.0;
        lines.push(format!(
            "seed {seed}: p={:.3} max z={z:.2} {secs:.2}s",
            fit.p_value
        ));
    }
    report(
        11,
        "simulated frequencies, 5 seeds x 1e6 shots",
        ok,
        lines.join("; "),
    );
}

fn cli(args: &[&str]) -> (Option<i32>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_lande-spin"))
        .args(args)
        .env_remove("LANDE_SPIN_SEED")
        .output()
        .unwrap();
    (o.status.code(), String::from_utf8(o.stdout).unwrap())
}

fn round_trips<T: serde::de::DeserializeOwned + serde::Serialize>(line: &str) -> Option<T> {
    let line = line.trim_end();
    let typed: T = serde_json::from_str(line).ok()?;
    let value: serde_json::Value = serde_json::from_str(line).ok()?;
    let same = to_json_line(&typed).ok()? == line && to_json_line(&value).ok()? == line;
    same.then_some(typed)
}

#[test]
fn criterion_12_cli() {
    let mut failures = Vec::new();

    let (code, out) = cli(&[
        "operator", "--j", "1", "--kind", "sigma-z", "--basis", "0,0", "--axis", "0,0", "--output",
        "json",
    ]);
    let diag = |rec: &OperatorRecord| {
        let want = [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]];
        rec.matrix
            .iter()
            .zip(want)
            .all(|(row, w)| row.iter().zip(w).all(|(z, w)| z.re == w && z.im == 0.0))
    };
    match round_trips::<OperatorRecord>(&out) {
        Some(rec) if code == Some(0) && diag(&rec) => {}
        _ => failures.push("operator"),
    }

    for to in ["1.3,2.1", "pi,0", "pi/2,3pi/2", "0.01,5"] {
        let (code, out) = cli(&["probabilities", "--j", "1", "--from", "0,0", "--to", to]);
        let rows_ok = |rec: &ProbabilityRecord| {
            rec.entries
                .iter()
                .all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= EXACT)
        };
        match round_trips::<ProbabilityRecord>(&out) {
            Some(rec) if code == Some(0) && rows_ok(&rec) => {}
            _ => failures.push("probabilities"),
        }
    }

    let (code, out) = cli(&["verify", "--j", "1", "--trials", "1000", "--seed", "7"]);
    match round_trips::<VerifyRecord>(&out) {
        Some(rec)
            if code == Some(0)
                && rec.passed
                && rec.suites.len() == 2
                && rec.suites.iter().all(|s| {
                    !s.checks.is_empty() && s.checks.iter().all(|c| c.passed == c.total)
                }) => {}
        _ => failures.push("verify"),
    }

    report(
        12,
        "command-line examples and byte-identical JSON",
        failures.is_empty(),
        format!("failures: {failures:?}"),
    );
}

#[test]
fn phases_are_unit_modulus_in_the_comparison() {
    // the row comparison itself must reject a non-unit scale
    let a = ComplexMatrix::identity(2);
    let b = a.scale(Complex64::new(0.5, 0.0));
    assert!(row_phase_defect(&a, &b) > 0.5);
    assert!(row_phase_defect(&a, &a.scale(Complex64::from_polar(1.0, 0.7))) < 1e-15);
}
