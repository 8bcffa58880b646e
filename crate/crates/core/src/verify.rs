//! Randomised invariant suites, used by the `verify` command.

use std::f64::consts::{SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    c64, commutator, hermitian_eigensystem, ComplexMatrix, ComplexVector, CLOSED_FORM_TOL,
    EIGEN_TOL,
};
use crate::direction::Direction;
use crate::general_j::{
    component_operators_j, general_amplitudes_j, generalized_operator_j, standard_operators_j,
    GeneralJError, SpinSystem,
};
use crate::lande::{
    compose, hermitian_flip, operator_from_amplitudes, EigenvalueWeights, GenericAmplitudeTable,
};
use crate::spin1;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub j: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<f64>,
}

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            result: CheckResult {
                name,
                passed: 0,
                total: 0,
                max_residual: 0.0,
                tolerance,
            },
        }
    }

    fn record(&mut self, residual: f64) {
        let r = &mut self.result;
        r.total += 1;
        if residual <= r.tolerance {
            r.passed += 1;
        }
        // NaN counts as a failure and poisons the reported maximum
        if residual.is_nan() || residual > r.max_residual {
            r.max_residual = residual;
        }
    }
}

struct Suite {
    tolerance: Option<f64>,
    tallies: Vec<Tally>,
}

impl Suite {
    fn tally(&mut self, name: &'static str, default_tol: f64) -> usize {
        self.tallies
            .push(Tally::new(name, self.tolerance.unwrap_or(default_tol)));
        self.tallies.len() - 1
    }

    fn record(&mut self, id: usize, residual: f64) {
        self.tallies[id].record(residual);
    }

    fn finish(self, j: String, opts: &VerifyOptions) -> VerifyReport {
        VerifyReport {
            j,
            trials: opts.trials,
            seed: opts.seed,
            checks: self.tallies.into_iter().map(|t| t.result).collect(),
        }
    }
}

/// Uniform on the sphere.
pub fn random_direction(rng: &mut impl Rng) -> Direction {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    Direction::new(cos_theta.acos(), phi).expect("acos lies in [0, pi]")
}

/// Unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = c64(rng.random_range(-1.0..1.0), 0.0);
        for k in i + 1..n {
            let z = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, k)] = z;
            m[(k, i)] = z.conj();
        }
    }
    hermitian_eigensystem(&m)
        .expect("small Hermitian matrix")
        .vector_matrix()
}

fn scaled_identity(n: usize, x: f64) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale(c64(x, 0.0))
}

fn apply_residual(op: &ComplexMatrix, v: &ComplexVector, want: &ComplexVector) -> f64 {
    op.mul_vec(v).max_abs_diff(want)
}

/// Closed-form spin-1 invariants.
pub fn verify_spin_one(opts: &VerifyOptions) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut s = Suite {
        tolerance: opts.tolerance,
        tallies: Vec::new(),
    };
    let tol = CLOSED_FORM_TOL;

    let standard = s.tally("standard-forms", 0.0);
    let normalization = s.tally("probability-row-sums", tol);
    let closed_probs = s.tally("closed-form-probabilities", tol);
    let lande = s.tally("lande-composition", tol);
    let flip = s.tally("hermiticity-flip", tol);
    let eigen = s.tally("eigen-equations", tol);
    let algebra = s.tally("cyclic-commutators", tol);
    let squares = s.tally("sum-of-squares", tol);
    let ladder = s.tally("ladder-actions", tol);
    let ladder_adj = s.tally("ladder-adjoint", tol);
    let symmetry = s.tally("symmetry-relations", tol);
    let scalar = s.tally("constant-weights-diagonal", tol);
    let scalar_numeric = s.tally("constant-weights-eigensolver", EIGEN_TOL);
    let limits = s.tally("standard-limits", tol);
    let numeric = s.tally("numeric-engine-agreement", EIGEN_TOL);

    let std_ops = spin1::standard_operators();
    let exact = [
        (
            &std_ops.z.matrix,
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]),
        ),
        (&std_ops.squared.matrix, scaled_identity(3, 2.0)),
        (&std_ops.minus.matrix, std_ops.plus.matrix.adjoint()),
        (
            &std_ops.x.matrix,
            (&std_ops.plus.matrix + &std_ops.minus.matrix).scale(c64(0.5, 0.0)),
        ),
        (
            &std_ops.y.matrix,
            (&std_ops.plus.matrix - &std_ops.minus.matrix).scale(c64(0.0, -0.5)),
        ),
    ];
    for (got, want) in exact {
        s.record(standard, got.max_abs_diff(&want));
    }

    let i = c64(0.0, 1.0);
    let r2 = c64(SQRT_2, 0.0);
    let one = SpinSystem::spin_one();
    for _ in 0..opts.trials {
        let (a, b, c) = (
            random_direction(&mut rng),
            random_direction(&mut rng),
            random_direction(&mut rng),
        );

        let p = spin1::probability_table(&a, &c);
        let row_err = p
            .row_sums()
            .iter()
            .map(|x| (x - 1.0).abs())
            .fold(0.0, f64::max);
        s.record(normalization, row_err);
        let q = spin1::closed_form_probabilities(&a, &c);
        let mut prob_err: f64 = 0.0;
        for (r1, r2) in p.entries.iter().zip(&q.entries) {
            for (x, y) in r1.iter().zip(r2) {
                prob_err = prob_err.max((x - y).abs());
            }
        }
        s.record(closed_probs, prob_err);

        let ab = spin1::general_amplitudes(&a, &b).to_generic();
        let bc = spin1::general_amplitudes(&b, &c).to_generic();
        let ac = spin1::general_amplitudes(&a, &c);
        let composed = compose(&ab, &bc).expect("labels chain");
        s.record(lande, composed.entries.max_abs_diff(&ac.entries));
        let ca = spin1::general_amplitudes(&c, &a);
        s.record(
            flip,
            hermitian_flip(&ac.to_generic())
                .entries
                .max_abs_diff(&ca.entries),
        );
        s.record(
            symmetry,
            spin1::symmetry_residuals(&ac)
                .into_iter()
                .fold(0.0, f64::max),
        );

        let sc = spin1::generalized_sigma_c(&b, &c).matrix;
        let sx = spin1::generalized_sigma_x(&b, &c);
        let sy = spin1::generalized_sigma_y(&b, &c);
        let xi = spin1::generalized_sigma_c_eigvecs(&b, &c);
        let mut eig_err: f64 = 0.0;
        for (op, vecs) in [
            (&sc, &xi),
            (&sx.op.matrix, &sx.eigvecs),
            (&sy.op.matrix, &sy.eigvecs),
        ] {
            for v in vecs.iter() {
                let want = v.entries.scale(c64(v.projection.value(), 0.0));
                eig_err = eig_err.max(apply_residual(op, &v.entries, &want));
            }
        }
        s.record(eigen, eig_err);

        let x = &sx.op.matrix;
        let y = &sy.op.matrix;
        let comm = |p: &ComplexMatrix, q: &ComplexMatrix, r: &ComplexMatrix| {
            commutator(p, q).expect("3x3").max_abs_diff(&r.scale(i))
        };
        s.record(
            algebra,
            comm(x, y, &sc).max(comm(y, &sc, x)).max(comm(&sc, x, y)),
        );
        let sq = &(&(x * x) + &(y * y)) + &(&sc * &sc);
        s.record(squares, sq.max_abs_diff(&scaled_identity(3, 2.0)));

        let (plus, minus) = spin1::generalized_ladder(&b, &c);
        let zero = ComplexVector::zeros(3);
        let [xp, x0, xm] = [&xi[0].entries, &xi[1].entries, &xi[2].entries];
        let actions = [
            (&plus.matrix, xp, zero.clone()),
            (&plus.matrix, x0, xp.scale(r2)),
            (&plus.matrix, xm, x0.scale(r2)),
            (&minus.matrix, xp, x0.scale(r2)),
            (&minus.matrix, x0, xm.scale(r2)),
            (&minus.matrix, xm, zero),
        ];
        let act_err = actions
            .iter()
            .map(|(op, v, w)| apply_residual(op, v, w))
            .fold(0.0, f64::max);
        s.record(ladder, act_err);
        s.record(
            ladder_adj,
            minus.matrix.max_abs_diff(&plus.matrix.adjoint()),
        );

        let weight: f64 = rng.random_range(-3.0..3.0);
        let r = EigenvalueWeights::constant(weight, 3);
        let u = GenericAmplitudeTable::new(b, c, random_unitary(&mut rng, 3));
        let m = operator_from_amplitudes(&u, &r).expect("3x3");
        s.record(scalar, m.max_abs_diff(&scaled_identity(3, weight)));
        let two = EigenvalueWeights::constant(2.0, 3);
        let closed =
            operator_from_amplitudes(&spin1::general_amplitudes(&b, &c).to_generic(), &two)
                .expect("3x3");
        s.record(scalar, closed.max_abs_diff(&scaled_identity(3, 2.0)));
        match general_amplitudes_j(&one, &b, &c) {
            Ok(t) => {
                let m = operator_from_amplitudes(&t, &two).expect("3x3");
                s.record(scalar_numeric, m.max_abs_diff(&scaled_identity(3, 2.0)));
                s.record(
                    numeric,
                    t.entries
                        .max_abs_diff(&spin1::general_amplitudes(&b, &c).entries),
                );
            }
            Err(_) => {
                s.record(scalar_numeric, f64::INFINITY);
                s.record(numeric, f64::INFINITY);
            }
        }

        let lim_c = spin1::generalized_sigma_c(&b, &b)
            .matrix
            .max_abs_diff(&std_ops.z.matrix);
        let lim_x = spin1::generalized_sigma_x(&b, &b)
            .op
            .matrix
            .max_abs_diff(&std_ops.x.matrix);
        let lim_y = spin1::generalized_sigma_y(&b, &b)
            .op
            .matrix
            .max_abs_diff(&std_ops.y.matrix);
        let (lp, lm) = spin1::generalized_ladder(&b, &b);
        let lim_pm = lp
            .matrix
            .max_abs_diff(&std_ops.plus.matrix)
            .max(lm.matrix.max_abs_diff(&std_ops.minus.matrix));
        s.record(limits, lim_c.max(lim_x).max(lim_y).max(lim_pm));
    }
    s.finish(one.to_string(), opts)
}

/// Invariants of the numerical engine for any J.
pub fn verify_general(
    system: &SpinSystem,
    opts: &VerifyOptions,
) -> Result<VerifyReport, GeneralJError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut s = Suite {
        tolerance: opts.tolerance,
        tallies: Vec::new(),
    };
    let tol = EIGEN_TOL;
    let n = system.dim();
    let std_ops = standard_operators_j(system);
    let casimir = scaled_identity(n, system.casimir());
    let i = c64(0.0, 1.0);

    let ladder_check = s.tally("standard-algebra", CLOSED_FORM_TOL);
    let unitary = s.tally("table-unitarity", tol);
    let lande = s.tally("lande-composition-moduli", tol);
    let spectrum = s.tally("generalized-spectrum", tol);
    let limits = s.tally("standard-limits", tol);
    let algebra = s.tally("cyclic-commutators", tol);
    let squares = s.tally("sum-of-squares", tol);
    let scalar = s.tally("constant-weights-diagonal", tol);

    let sq =
        &(&(&std_ops.x * &std_ops.x) + &(&std_ops.y * &std_ops.y)) + &(&std_ops.z * &std_ops.z);
    s.record(ladder_check, sq.max_abs_diff(&std_ops.squared));
    s.record(
        ladder_check,
        commutator(&std_ops.x, &std_ops.y)?.max_abs_diff(&std_ops.z.scale(i)),
    );

    let projections = system.projections();
    let r = system.projection_weights();
    for _ in 0..opts.trials {
        let (a, b, c) = (
            random_direction(&mut rng),
            random_direction(&mut rng),
            random_direction(&mut rng),
        );
        let ab = general_amplitudes_j(system, &a, &b)?;
        let bc = general_amplitudes_j(system, &b, &c)?;
        let ac = general_amplitudes_j(system, &a, &c)?;
        s.record(unitary, ac.entries.unitarity_defect());
        let composed = compose(&ab, &bc)?;
        let mut modulus_err: f64 = 0.0;
        for row in 0..n {
            for col in 0..n {
                modulus_err = modulus_err
                    .max((composed.get(row, col).norm() - ac.get(row, col).norm()).abs());
            }
        }
        s.record(lande, modulus_err);

        let z = generalized_operator_j(system, &b, &c, &r)?;
        let eig = hermitian_eigensystem(&z)?;
        let spec_err = eig
            .eigenvalues
            .iter()
            .zip(&projections)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        s.record(spectrum, spec_err);

        let xy = component_operators_j(system, &b, &c)?;
        let comm = |p: &ComplexMatrix,
                    q: &ComplexMatrix,
                    r: &ComplexMatrix|
         -> Result<f64, GeneralJError> {
            Ok(commutator(p, q)?.max_abs_diff(&r.scale(i)))
        };
        let c1 = comm(&xy.x, &xy.y, &z)?;
        let c2 = comm(&xy.y, &z, &xy.x)?;
        let c3 = comm(&z, &xy.x, &xy.y)?;
        s.record(algebra, c1.max(c2).max(c3));
        let total = &(&(&xy.x * &xy.x) + &(&xy.y * &xy.y)) + &(&z * &z);
        s.record(squares, total.max_abs_diff(&casimir));

        let lim = component_operators_j(system, &b, &b)?;
        let lz = generalized_operator_j(system, &b, &b, &r)?;
        let lim_err = lim
            .x
            .max_abs_diff(&std_ops.x)
            .max(lim.y.max_abs_diff(&std_ops.y))
            .max(lz.max_abs_diff(&std_ops.z));
        s.record(limits, lim_err);

        let w = EigenvalueWeights::constant(system.casimir(), n);
        s.record(
            scalar,
            generalized_operator_j(system, &b, &c, &w)?.max_abs_diff(&casimir),
        );
    }
    Ok(s.finish(system.to_string(), opts))
}

/// Spin 1 runs both the closed-form and the numerical suites.
pub fn verify(
    system: &SpinSystem,
    opts: &VerifyOptions,
) -> Result<Vec<VerifyReport>, GeneralJError> {
    let mut out = Vec::new();
    if *system == SpinSystem::spin_one() {
        out.push(verify_spin_one(opts));
    }
    out.push(verify_general(system, opts)?);
    Ok(out)
}
