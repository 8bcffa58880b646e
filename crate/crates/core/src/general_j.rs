//! Spin operators and amplitudes for arbitrary J, built numerically by
//! diagonalising `sigma . a` and eliminating the intermediate `z` axis.
//!
//! Indices run over descending projections: index `k` carries `m = J - k`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{
    c64, hermitian_eigensystem, AlgebraError, ComplexMatrix, ComplexVector, EIGEN_TOL, MAX_DIM,
};
use crate::direction::{Angles, Direction};
use crate::lande::{
    compose, hermitian_flip, operator_from_amplitudes, BasisLabel, EigenvalueWeights,
    GenericAmplitudeTable, LandeError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneralJError {
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimTooLarge(usize),
    #[error("invalid spin {0:?}: expected a non-negative multiple of 1/2")]
    InvalidSpin(String),
    #[error("no shifted candidate reproduces the standard {0} component")]
    NoValidTransform(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lande(#[from] LandeError),
}

impl GeneralJError {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            GeneralJError::NoValidTransform(_)
                | GeneralJError::Algebra(AlgebraError::NoConvergence(_) | AlgebraError::NonFinite)
        )
    }
}

/// A spin `J = two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSystem {
    two_j: u32,
}

impl SpinSystem {
    pub fn new(two_j: u32) -> Result<Self, GeneralJError> {
        let dim = two_j as usize + 1;
        if dim > MAX_DIM {
            return Err(GeneralJError::DimTooLarge(dim));
        }
        Ok(Self { two_j })
    }

    pub fn spin_one() -> Self {
        Self { two_j: 2 }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `J, J-1, ..., -J`
    pub fn projections(&self) -> Vec<f64> {
        let j = self.j();
        (0..self.dim()).map(|k| j - k as f64).collect()
    }

    pub fn projection_weights(&self) -> EigenvalueWeights {
        EigenvalueWeights::new(self.projections()).expect("projections are finite")
    }

    /// `J (J + 1)`
    pub fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }
}

impl FromStr for SpinSystem {
    type Err = GeneralJError;

    /// Accepts `1`, `3/2` or `1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeneralJError::InvalidSpin(s.to_string());
        let t = s.trim();
        let two_j = if let Some((num, den)) = t.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => num.checked_mul(2).ok_or_else(bad)?,
                "2" => num,
                _ => return Err(bad()),
            }
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            let doubled = 2.0 * x;
            if !doubled.is_finite() || doubled < 0.0 || doubled.fract() != 0.0 || doubled > 1e6 {
                return Err(bad());
            }
            doubled as u32
        };
        SpinSystem::new(two_j)
    }
}

impl fmt::Display for SpinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

#[derive(Debug, Clone)]
pub struct StandardOperatorsJ {
    pub z: ComplexMatrix,
    pub plus: ComplexMatrix,
    pub minus: ComplexMatrix,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub squared: ComplexMatrix,
}

pub fn standard_operators_j(s: &SpinSystem) -> StandardOperatorsJ {
    let n = s.dim();
    let m = s.projections();
    let jj = s.casimir();
    // <m+1| J+ |m> sits at (k, k+1)
    let plus = ComplexMatrix::from_fn(n, |r, col| {
        if col == r + 1 {
            let mk = m[col];
            c64((jj - mk * (mk + 1.0)).max(0.0).sqrt(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let minus = plus.adjoint();
    let x = (&plus + &minus).scale(c64(0.5, 0.0));
    let y = (&plus - &minus).scale(c64(0.0, -0.5));
    StandardOperatorsJ {
        z: ComplexMatrix::from_real_diagonal(&m),
        plus,
        minus,
        x,
        y,
        squared: ComplexMatrix::from_real_diagonal(&vec![jj; n]),
    }
}

/// `sin t cos p [sigma_x] + sin t sin p [sigma_y] + cos t [sigma_z]`.
pub fn direction_operator_j(s: &SpinSystem, a: &Direction) -> ComplexMatrix {
    direction_matrix(s, a.angles())
}

fn direction_matrix(s: &SpinSystem, a: Angles) -> ComplexMatrix {
    let ops = standard_operators_j(s);
    let [nx, ny, nz] = a.unit_vector();
    let sum = &ops.x.scale(c64(nx, 0.0)) + &ops.y.scale(c64(ny, 0.0));
    &sum + &ops.z.scale(c64(nz, 0.0))
}

/// `exp(-i phi Jz) exp(-i theta Jy)`. Column `k` is the projection `J - k`
/// state along `a`.
pub fn rotation_matrix(s: &SpinSystem, a: &Direction) -> Result<ComplexMatrix, GeneralJError> {
    rotation_at(s, a.angles())
}

fn rotation_at(s: &SpinSystem, a: Angles) -> Result<ComplexMatrix, GeneralJError> {
    let ops = standard_operators_j(s);
    let eig = hermitian_eigensystem(&ops.y)?;
    let v = eig.vector_matrix();
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -a.theta * l))
        .collect();
    let n = s.dim();
    let small_d = &ComplexMatrix::from_fn(n, |i, j| v[(i, j)] * phases[j]) * &v.adjoint();
    let m = s.projections();
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        Complex64::from_polar(1.0, -a.phi * m[i]) * small_d[(i, j)]
    }))
}

/// How the free phase of each eigenvector is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// Overlap with the matching column of [`rotation_matrix`] made real and
    /// positive. Reproduces the closed-form spin-1 tables exactly and is
    /// analytic in the angles.
    #[default]
    Rotation,
    /// First component above 1e-10 in modulus made real and positive.
    FirstComponent,
}

/// Amplitudes from the projections along `a` to those along `z`: row `i` is
/// the eigenvector of `sigma . a` for eigenvalue `J - i`.
pub fn amplitudes_to_intermediate(
    s: &SpinSystem,
    a: &Direction,
) -> Result<GenericAmplitudeTable, GeneralJError> {
    amplitudes_to_intermediate_with(s, a, Gauge::default())
}

pub fn amplitudes_to_intermediate_with(
    s: &SpinSystem,
    a: &Direction,
    gauge: Gauge,
) -> Result<GenericAmplitudeTable, GeneralJError> {
    let entries = intermediate_entries(s, a.angles(), gauge)?;
    Ok(GenericAmplitudeTable::new(*a, Direction::z(), entries))
}

fn intermediate_entries(
    s: &SpinSystem,
    a: Angles,
    gauge: Gauge,
) -> Result<ComplexMatrix, GeneralJError> {
    let eig = hermitian_eigensystem(&direction_matrix(s, a))?;
    let rows: Vec<ComplexVector> = match gauge {
        Gauge::FirstComponent => eig.eigenvectors,
        Gauge::Rotation => {
            let rot = rotation_at(s, a)?;
            eig.eigenvectors
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let overlap = v.inner(&rot.column(k));
                    v.scale(overlap / overlap.norm())
                })
                .collect()
        }
    };
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|v| v.as_slice().to_vec()).collect();
    Ok(ComplexMatrix::from_rows(&rows))
}

/// `psi(m_i along a; m_f along c)` for any J.
pub fn general_amplitudes_j(
    s: &SpinSystem,
    a: &Direction,
    c: &Direction,
) -> Result<GenericAmplitudeTable, GeneralJError> {
    general_amplitudes_j_with(s, a, c, Gauge::default())
}

pub fn general_amplitudes_j_with(
    s: &SpinSystem,
    a: &Direction,
    c: &Direction,
    gauge: Gauge,
) -> Result<GenericAmplitudeTable, GeneralJError> {
    let ta = amplitudes_to_intermediate_with(s, a, gauge)?;
    let tc = amplitudes_to_intermediate_with(s, c, gauge)?;
    Ok(compose(&ta, &hermitian_flip(&tc))?)
}

fn general_at(
    s: &SpinSystem,
    a: Angles,
    c: Angles,
) -> Result<GenericAmplitudeTable, GeneralJError> {
    let z = BasisLabel::Axis(Direction::z());
    let ta = GenericAmplitudeTable::new(
        BasisLabel::Formal(a),
        z,
        intermediate_entries(s, a, Gauge::Rotation)?,
    );
    let tc = GenericAmplitudeTable::new(
        BasisLabel::Formal(c),
        z,
        intermediate_entries(s, c, Gauge::Rotation)?,
    );
    Ok(compose(&ta, &hermitian_flip(&tc))?)
}

/// Observable with eigenvalues `r` along `c`, written in the `b` basis.
pub fn generalized_operator_j(
    s: &SpinSystem,
    b: &Direction,
    c: &Direction,
    r: &EigenvalueWeights,
) -> Result<ComplexMatrix, GeneralJError> {
    operator_at(s, b.angles(), c.angles(), r)
}

fn operator_at(
    s: &SpinSystem,
    b: Angles,
    c: Angles,
    r: &EigenvalueWeights,
) -> Result<ComplexMatrix, GeneralJError> {
    if r.len() != s.dim() {
        return Err(LandeError::DimMismatch(s.dim(), r.len()).into());
    }
    Ok(operator_from_amplitudes(&general_at(s, b, c)?, r)?)
}

/// A substitution applied to the measured direction's angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleShift {
    Polar(f64),
    Azimuthal(f64),
    /// `theta' = pi/2` and `phi' += shift`.
    EquatorAzimuthal(f64),
}

impl AngleShift {
    pub fn apply(self, c: Angles) -> Angles {
        match self {
            AngleShift::Polar(d) => Angles::new(c.theta + d, c.phi),
            AngleShift::Azimuthal(d) => Angles::new(c.theta, c.phi + d),
            AngleShift::EquatorAzimuthal(d) => Angles::new(FRAC_PI_2, c.phi + d),
        }
    }
}

pub const X_CANDIDATES: [AngleShift; 4] = [
    AngleShift::Polar(FRAC_PI_2),
    AngleShift::Polar(-FRAC_PI_2),
    AngleShift::Azimuthal(FRAC_PI_2),
    AngleShift::Azimuthal(-FRAC_PI_2),
];

pub const Y_CANDIDATES: [AngleShift; 2] = [
    AngleShift::EquatorAzimuthal(FRAC_PI_2),
    AngleShift::EquatorAzimuthal(-FRAC_PI_2),
];

/// A generic direction at which every candidate is also screened, so that a
/// shift cannot pass by accident at a special `b`.
const PROBE: Angles = Angles::new(0.7, 1.3);

#[derive(Debug, Clone)]
pub struct ComponentOperators {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub x_shift: AngleShift,
    pub y_shift: AngleShift,
}

/// The transverse components `sigma_x`, `sigma_y` attached to `c`, written in
/// the `b` basis. Each is the first candidate shift whose `b = c` limit gives
/// the standard matrix.
pub fn component_operators_j(
    s: &SpinSystem,
    b: &Direction,
    c: &Direction,
) -> Result<ComponentOperators, GeneralJError> {
    let ops = standard_operators_j(s);
    let r = s.projection_weights();
    let pick = |candidates: &[AngleShift], target: &ComplexMatrix, name: &'static str| {
        for &shift in candidates {
            let mut ok = true;
            for probe in [b.angles(), PROBE] {
                let limit = operator_at(s, probe, shift.apply(probe), &r)?;
                if limit.max_abs_diff(target) > EIGEN_TOL {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok((
                    shift,
                    operator_at(s, b.angles(), shift.apply(c.angles()), &r)?,
                ));
            }
        }
        Err(GeneralJError::NoValidTransform(name))
    };
    let (x_shift, x) = pick(&X_CANDIDATES, &ops.x, "x")?;
    let (y_shift, y) = pick(&Y_CANDIDATES, &ops.y, "y")?;
    Ok(ComponentOperators {
        x,
        y,
        x_shift,
        y_shift,
    })
}
