//! Generalized spin-1 operators referred to an intermediate basis `b`, with
//! `b = (theta, phi)` and the measured direction `c = (theta', phi')`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use super::amplitudes::{cis, general_amplitudes, re, Trig};
use super::{Component, Projection, SpinOperator, StateVector};
use crate::algebra::{ComplexMatrix, ComplexVector};
use crate::direction::{Angles, Direction};
use crate::lande::{operator_from_amplitudes, EigenvalueWeights};

/// Eigenvectors ordered (+1, 0, -1).
pub type EigenTriple = [StateVector; 3];

/// Generalized operator together with its closed-form eigenvectors.
#[derive(Debug, Clone)]
pub struct OperatorWithVectors {
    pub op: SpinOperator,
    pub eigvecs: EigenTriple,
}

/// Shape shared by every generalized component: `(11, 12, 21)` determine the
/// rest through `13 = 22 = 31 = 0`, `23 = 12`, `32 = 21`, `33 = -11`.
fn tridiagonal(m11: Complex64, m12: Complex64, m21: Complex64) -> ComplexMatrix {
    let z = re(0.0);
    ComplexMatrix::from_rows(&[[m11, m12, z], [m21, z, m12], [z, m21, -m11]])
}

/// `[sigma_c]` in the `b` basis at formal angles.
pub fn sigma_c_matrix(b: Angles, c: Angles) -> ComplexMatrix {
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = c.theta.sin_cos();
    let (sd, cd) = (b.phi - c.phi).sin_cos();
    let r = FRAC_1_SQRT_2;
    let m11 = re(ct * cp + st * sp * cd);
    let m12 = r * Complex64::new(-st * cp + ct * sp * cd, sp * sd);
    let m21 = r * Complex64::new(-st * cp + ct * sp * cd, -sp * sd);
    tridiagonal(m11, m12, m21)
}

/// `[sigma_x]`: the `theta' -> theta' + pi/2` image of `[sigma_c]`.
pub fn sigma_x_matrix(b: Angles, c: Angles) -> ComplexMatrix {
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = c.theta.sin_cos();
    let (sd, cd) = (b.phi - c.phi).sin_cos();
    let r = FRAC_1_SQRT_2;
    let m11 = re(-ct * sp + st * cp * cd);
    let m12 = r * Complex64::new(st * sp + ct * cp * cd, cp * sd);
    let m21 = r * Complex64::new(st * sp + ct * cp * cd, -cp * sd);
    tridiagonal(m11, m12, m21)
}

/// `[sigma_y]`: `theta' = pi/2`, `phi' -> phi' + pi/2` applied to `[sigma_c]`.
/// Independent of `theta'`.
pub fn sigma_y_matrix(b: Angles, c: Angles) -> ComplexMatrix {
    let (st, ct) = b.theta.sin_cos();
    let (sd, cd) = (b.phi - c.phi).sin_cos();
    let r = FRAC_1_SQRT_2;
    let m11 = re(st * sd);
    let m12 = r * Complex64::new(ct * sd, -cd);
    let m21 = r * Complex64::new(ct * sd, cd);
    tridiagonal(m11, m12, m21)
}

/// Raising operator `[sigma_+]` at formal angles.
pub fn sigma_plus_matrix(b: Angles, c: Angles) -> ComplexMatrix {
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = c.theta.sin_cos();
    let (sd, cd) = (b.phi - c.phi).sin_cos();
    let r = FRAC_1_SQRT_2;
    let m11 = Complex64::new(-ct * sp + st * cp * cd, st * sd);
    let m12 = r * Complex64::new(st * sp + ct * cp * cd + cd, cp * sd + ct * sd);
    let m21 = r * Complex64::new(st * sp + ct * cp * cd - cd, -cp * sd + ct * sd);
    let m33 = Complex64::new(ct * sp - st * cp * cd, -st * sd);
    let z = re(0.0);
    ComplexMatrix::from_rows(&[[m11, m12, z], [m21, z, m12], [z, m21, m33]])
}

/// Lowering operator `[sigma_-]` at formal angles.
pub fn sigma_minus_matrix(b: Angles, c: Angles) -> ComplexMatrix {
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = c.theta.sin_cos();
    let (sd, cd) = (b.phi - c.phi).sin_cos();
    let r = FRAC_1_SQRT_2;
    let m11 = Complex64::new(-ct * sp + st * cp * cd, -st * sd);
    let m12 = r * Complex64::new(st * sp + ct * cp * cd - cd, cp * sd - ct * sd);
    let m21 = r * Complex64::new(st * sp + ct * cp * cd + cd, -cp * sd - ct * sd);
    let m33 = Complex64::new(ct * sp - st * cp * cd, st * sd);
    let z = re(0.0);
    ComplexMatrix::from_rows(&[[m11, m12, z], [m21, z, m12], [z, m21, m33]])
}

/// Eigenvectors of `[sigma_c]`: amplitudes from `c` to `b`, one column per
/// initial projection.
pub fn sigma_c_eigvec_columns(b: Angles, c: Angles) -> [ComplexVector; 3] {
    let t = Trig::of(b.theta);
    let u = Trig::of(c.theta);
    let em = cis(-(c.phi - b.phi));
    let ep = cis(c.phi - b.phi);
    let r = FRAC_1_SQRT_2;
    let ss = u.sin * t.sin;
    let plus = [
        u.ch * t.ch * em + u.sh * t.sh * ep + 0.5 * ss,
        r * (-u.ch * t.sin * em + u.sh * t.sin * ep + u.sin * t.cos),
        u.ch * t.sh * em + u.sh * t.ch * ep - 0.5 * ss,
    ];
    let zero = [
        r * (-t.ch * u.sin * em + t.sh * u.sin * ep + t.sin * u.cos),
        0.5 * ss * em + 0.5 * ss * ep + t.cos * u.cos,
        r * (-t.sh * u.sin * em + t.ch * u.sin * ep - t.sin * u.cos),
    ];
    let minus = [
        u.sh * t.ch * em + u.ch * t.sh * ep - 0.5 * ss,
        r * (-u.sh * t.sin * em + u.ch * t.sin * ep - u.sin * t.cos),
        u.sh * t.sh * em + u.ch * t.ch * ep + 0.5 * ss,
    ];
    [plus, zero, minus].map(|v| ComplexVector::from_vec(v.to_vec()))
}

/// Eigenvectors of `[sigma_x]`.
pub fn sigma_x_eigvec_columns(b: Angles, c: Angles) -> [ComplexVector; 3] {
    let t = Trig::of(b.theta);
    let (sp, cp) = c.theta.sin_cos();
    let em = cis(-(c.phi - b.phi));
    let ep = cis(c.phi - b.phi);
    let r = FRAC_1_SQRT_2;
    let lo = 0.5 * (1.0 - sp);
    let hi = 0.5 * (1.0 + sp);
    let plus = [
        lo * t.ch * em + hi * t.sh * ep + 0.5 * t.sin * cp,
        r * (-lo * t.sin * em + hi * t.sin * ep + t.cos * cp),
        lo * t.sh * em + hi * t.ch * ep - 0.5 * t.sin * cp,
    ];
    let zero = [
        r * (-cp * t.ch * em + cp * t.sh * ep - t.sin * sp),
        0.5 * cp * t.sin * em + 0.5 * cp * t.sin * ep - t.cos * sp,
        r * (-cp * t.sh * em + cp * t.ch * ep + t.sin * sp),
    ];
    let minus = [
        hi * t.ch * em + lo * t.sh * ep - 0.5 * t.sin * cp,
        r * (-hi * t.sin * em + lo * t.sin * ep - t.cos * cp),
        hi * t.sh * em + lo * t.ch * ep + 0.5 * t.sin * cp,
    ];
    [plus, zero, minus].map(|v| ComplexVector::from_vec(v.to_vec()))
}

/// Eigenvectors of `[sigma_y]`.
pub fn sigma_y_eigvec_columns(b: Angles, c: Angles) -> [ComplexVector; 3] {
    let t = Trig::of(b.theta);
    let em = cis(-(c.phi - b.phi));
    let ep = cis(c.phi - b.phi);
    let i = Complex64::i();
    let r = FRAC_1_SQRT_2;
    let plus = [
        0.5 * (-i * t.ch * em + i * t.sh * ep + t.sin),
        r * (0.5 * i * t.sin * em + 0.5 * i * t.sin * ep + t.cos),
        0.5 * (-i * t.sh * em + i * t.ch * ep - t.sin),
    ];
    let zero = [
        r * (i * t.ch * em + i * t.sh * ep),
        0.5 * (-i * t.sin * em + i * t.sin * ep),
        r * (i * t.sh * em + i * t.ch * ep),
    ];
    let minus = [
        0.5 * (-i * t.ch * em + i * t.sh * ep - t.sin),
        r * (0.5 * i * t.sin * em + 0.5 * i * t.sin * ep - t.cos),
        0.5 * (-i * t.sh * em + i * t.ch * ep + t.sin),
    ];
    [plus, zero, minus].map(|v| ComplexVector::from_vec(v.to_vec()))
}

fn triple(component: Component, basis: Direction, cols: [ComplexVector; 3]) -> EigenTriple {
    let [p, z, m] = cols;
    [
        StateVector {
            projection: Projection::Plus,
            component,
            basis,
            entries: p,
        },
        StateVector {
            projection: Projection::Zero,
            component,
            basis,
            entries: z,
        },
        StateVector {
            projection: Projection::Minus,
            component,
            basis,
            entries: m,
        },
    ]
}

/// Spin component along `c` in the basis of projections along `b`.
pub fn generalized_sigma_c(b: &Direction, c: &Direction) -> SpinOperator {
    SpinOperator {
        basis: *b,
        component: Component::Along(*c),
        matrix: sigma_c_matrix(b.angles(), c.angles()),
    }
}

pub fn generalized_sigma_c_eigvecs(b: &Direction, c: &Direction) -> EigenTriple {
    triple(
        Component::Along(*c),
        *b,
        sigma_c_eigvec_columns(b.angles(), c.angles()),
    )
}

pub fn generalized_sigma_x(b: &Direction, c: &Direction) -> OperatorWithVectors {
    let op = SpinOperator {
        basis: *b,
        component: Component::Polar(*c),
        matrix: sigma_x_matrix(b.angles(), c.angles()),
    };
    let eigvecs = triple(
        Component::Polar(*c),
        *b,
        sigma_x_eigvec_columns(b.angles(), c.angles()),
    );
    OperatorWithVectors { op, eigvecs }
}

pub fn generalized_sigma_y(b: &Direction, c: &Direction) -> OperatorWithVectors {
    let op = SpinOperator {
        basis: *b,
        component: Component::Azimuthal(*c),
        matrix: sigma_y_matrix(b.angles(), c.angles()),
    };
    let eigvecs = triple(
        Component::Azimuthal(*c),
        *b,
        sigma_y_eigvec_columns(b.angles(), c.angles()),
    );
    OperatorWithVectors { op, eigvecs }
}

/// `(sigma_+, sigma_-)`
pub fn generalized_ladder(b: &Direction, c: &Direction) -> (SpinOperator, SpinOperator) {
    let plus = SpinOperator {
        basis: *b,
        component: Component::Raising(*c),
        matrix: sigma_plus_matrix(b.angles(), c.angles()),
    };
    let minus = SpinOperator {
        basis: *b,
        component: Component::Lowering(*c),
        matrix: sigma_minus_matrix(b.angles(), c.angles()),
    };
    (plus, minus)
}

/// Square of the spin, assembled from the `b -> c` amplitudes with every
/// projection weighted by `J(J+1) = 2`. The result is `2 I` for any pair.
pub fn sigma_squared(b: &Direction, c: &Direction) -> SpinOperator {
    let table = general_amplitudes(b, c).to_generic();
    let matrix = operator_from_amplitudes(&table, &EigenvalueWeights::constant(2.0, 3))
        .expect("spin-1 tables are 3x3");
    SpinOperator {
        basis: *b,
        component: Component::Squared,
        matrix,
    }
}

/// `sigma_x^2 + sigma_y^2 + sigma_c^2` from the closed-form components.
pub fn sigma_squared_from_components(b: &Direction, c: &Direction) -> ComplexMatrix {
    let x = sigma_x_matrix(b.angles(), c.angles());
    let y = sigma_y_matrix(b.angles(), c.angles());
    let z = sigma_c_matrix(b.angles(), c.angles());
    &(&(&x * &x) + &(&y * &y)) + &(&z * &z)
}

/// The formal angles whose `[sigma_c]` is `[sigma_x]`.
pub fn x_substitution(c: Angles) -> Angles {
    Angles::new(c.theta + FRAC_PI_2, c.phi)
}

/// The formal angles whose `[sigma_c]` is `[sigma_y]`.
pub fn y_substitution(c: Angles) -> Angles {
    Angles::new(FRAC_PI_2, c.phi + FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin1::standard_operators;

    fn dir(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    #[test]
    fn repeat_direction_gives_standard_forms() {
        let std = standard_operators();
        for (t, p) in [(0.0, 0.0), (0.4, 2.0), (2.9, 5.9)] {
            let b = dir(t, p);
            assert!(
                generalized_sigma_c(&b, &b)
                    .matrix
                    .max_abs_diff(&std.z.matrix)
                    < 1e-15
            );
            assert!(
                generalized_sigma_x(&b, &b)
                    .op
                    .matrix
                    .max_abs_diff(&std.x.matrix)
                    < 1e-15
            );
            assert!(
                generalized_sigma_y(&b, &b)
                    .op
                    .matrix
                    .max_abs_diff(&std.y.matrix)
                    < 1e-15
            );
            let (plus, minus) = generalized_ladder(&b, &b);
            assert!(plus.matrix.max_abs_diff(&std.plus.matrix) < 1e-15);
            assert!(minus.matrix.max_abs_diff(&std.minus.matrix) < 1e-15);
        }
    }

    #[test]
    fn repeat_direction_eigvecs_are_standard_basis() {
        let b = dir(1.3, 0.7);
        for (k, v) in generalized_sigma_c_eigvecs(&b, &b).iter().enumerate() {
            assert!(v.entries.max_abs_diff(&ComplexVector::basis(3, k)) < 1e-15);
        }
    }

    #[test]
    fn structural_zeros() {
        let (b, c) = (dir(0.3, 4.0), dir(2.2, 1.0));
        let (plus, _) = generalized_ladder(&b, &c);
        let x = generalized_sigma_x(&b, &c).op.matrix;
        for m in [&plus.matrix, &x] {
            assert_eq!(m[(0, 2)], re(0.0));
            assert_eq!(m[(1, 1)], re(0.0));
            assert_eq!(m[(2, 0)], re(0.0));
        }
    }

    #[test]
    fn sigma_y_diagonal_entry() {
        let (b, c) = (dir(0.8, 2.5), dir(1.9, 0.4));
        let y = generalized_sigma_y(&b, &c).op.matrix;
        assert!((y[(0, 0)] - re(0.8f64.sin() * (2.5f64 - 0.4).sin())).norm() < 1e-15);
    }

    #[test]
    fn squared_is_twice_identity() {
        let (b, c) = (dir(0.8, 2.5), dir(1.9, 0.4));
        let two = ComplexMatrix::identity(3).scale(re(2.0));
        assert!(sigma_squared(&b, &c).matrix.max_abs_diff(&two) < 1e-14);
        assert!(sigma_squared_from_components(&b, &c).max_abs_diff(&two) < 1e-14);
    }
}
