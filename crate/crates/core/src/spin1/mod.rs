//! Closed-form spin-1 objects: the standard matrices, the direction operator,
//! special and general amplitudes, probabilities, and the generalized
//! components with their eigenvectors.
//!
//! Index convention everywhere: 0 <-> projection +1, 1 <-> 0, 2 <-> -1.

mod amplitudes;
mod operators;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

pub use amplitudes::{
    closed_form_probabilities, general_amplitudes, general_matrix, probability_table,
    special_amplitudes, special_amplitudes_rephased, symmetry_residuals, AmplitudeTable,
    ProbabilityTable, SYMMETRY_RELATIONS,
};
pub use operators::{
    generalized_ladder, generalized_sigma_c, generalized_sigma_c_eigvecs, generalized_sigma_x,
    generalized_sigma_y, sigma_c_eigvec_columns, sigma_c_matrix, sigma_minus_matrix,
    sigma_plus_matrix, sigma_squared, sigma_squared_from_components, sigma_x_eigvec_columns,
    sigma_x_matrix, sigma_y_eigvec_columns, sigma_y_matrix, x_substitution, y_substitution,
    EigenTriple, OperatorWithVectors,
};

use crate::algebra::{c64, ComplexMatrix, ComplexVector};
use crate::direction::Direction;

/// A spin-1 projection quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projection {
    Plus,
    Zero,
    Minus,
}

impl Projection {
    pub const ALL: [Projection; 3] = [Projection::Plus, Projection::Zero, Projection::Minus];

    pub fn value(self) -> f64 {
        match self {
            Projection::Plus => 1.0,
            Projection::Zero => 0.0,
            Projection::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Projection::Plus => 0,
            Projection::Zero => 1,
            Projection::Minus => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// What an operator measures, relative to the measured direction `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    /// Projection along `c`.
    Along(Direction),
    /// Projection along the polar unit vector of `c` (`theta' + pi/2`).
    Polar(Direction),
    /// Projection along the azimuthal unit vector of `c`.
    Azimuthal(Direction),
    Raising(Direction),
    Lowering(Direction),
    Squared,
}

/// A 3x3 spin operator in the basis of projections along `basis`.
#[derive(Debug, Clone)]
pub struct SpinOperator {
    pub basis: Direction,
    pub component: Component,
    pub matrix: ComplexMatrix,
}

/// Amplitudes from one projection of `component` to the `basis` projections.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub projection: Projection,
    pub component: Component,
    pub basis: Direction,
    pub entries: ComplexVector,
}

/// The six textbook spin-1 matrices.
#[derive(Debug, Clone)]
pub struct StandardOperators {
    pub z: SpinOperator,
    pub x: SpinOperator,
    pub y: SpinOperator,
    pub plus: SpinOperator,
    pub minus: SpinOperator,
    pub squared: SpinOperator,
}

pub fn standard_operators() -> StandardOperators {
    let z_axis = Direction::z();
    let zero = c64(0.0, 0.0);
    let r2 = c64(SQRT_2, 0.0);
    let h = c64(FRAC_1_SQRT_2, 0.0);
    let ih = c64(0.0, FRAC_1_SQRT_2);

    let op = |component, matrix| SpinOperator {
        basis: z_axis,
        component,
        matrix,
    };
    StandardOperators {
        z: op(
            Component::Along(z_axis),
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]),
        ),
        x: op(
            Component::Polar(z_axis),
            ComplexMatrix::from_rows(&[[zero, h, zero], [h, zero, h], [zero, h, zero]]),
        ),
        y: op(
            Component::Azimuthal(z_axis),
            ComplexMatrix::from_rows(&[[zero, -ih, zero], [ih, zero, -ih], [zero, ih, zero]]),
        ),
        plus: op(
            Component::Raising(z_axis),
            ComplexMatrix::from_rows(&[[zero, r2, zero], [zero, zero, r2], [zero, zero, zero]]),
        ),
        minus: op(
            Component::Lowering(z_axis),
            ComplexMatrix::from_rows(&[[zero, zero, zero], [r2, zero, zero], [zero, r2, zero]]),
        ),
        squared: op(
            Component::Squared,
            ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 2.0]),
        ),
    }
}

/// `[sigma . a]` in the standard basis.
pub fn direction_operator(a: &Direction) -> SpinOperator {
    let (st, ct) = a.theta().sin_cos();
    let h = FRAC_1_SQRT_2 * st;
    let em = c64(0.0, -a.phi()).exp() * h;
    let ep = c64(0.0, a.phi()).exp() * h;
    let zero = c64(0.0, 0.0);
    let matrix = ComplexMatrix::from_rows(&[
        [c64(ct, 0.0), em, zero],
        [ep, zero, em],
        [zero, ep, c64(-ct, 0.0)],
    ]);
    SpinOperator {
        basis: Direction::z(),
        component: Component::Along(*a),
        matrix,
    }
}
