//! Quantization axes in polar angles.

use std::f64::consts::{PI, TAU};
use std::fmt;

use thiserror::Error;

const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirectionError {
    #[error("polar angle {0} is outside [0, pi]")]
    ThetaOutOfRange(f64),
    #[error("angles must be finite")]
    NonFinite,
}

/// Raw polar angles with no range normalisation.
///
/// The closed-form spin-1 expressions are entire functions of the angles, so
/// they can be evaluated at formal arguments such as `theta + pi/2` that no
/// longer lie in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// `(sin t cos p, sin t sin p, cos t)`
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// A quantization direction `(theta, phi)` with `theta` in `[0, pi]` and `phi`
/// in `[0, 2 pi)`.
#[derive(Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// Normalise `phi` modulo 2 pi. `theta` within 1e-12 of a bound is clamped,
    /// anything further out is rejected.
    pub fn new(theta: f64, phi: f64) -> Result<Self, DirectionError> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(DirectionError::NonFinite);
        }
        let theta = if (-BOUND_SLACK..0.0).contains(&theta) {
            0.0
        } else if theta > PI && theta <= PI + BOUND_SLACK {
            PI
        } else if (0.0..=PI).contains(&theta) {
            theta
        } else {
            return Err(DirectionError::ThetaOutOfRange(theta));
        };
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    pub fn from_degrees(theta: f64, phi: f64) -> Result<Self, DirectionError> {
        Self::new(theta.to_radians(), phi.to_radians())
    }

    /// The z axis, `(0, 0)`.
    pub const fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn angles(&self) -> Angles {
        Angles::new(self.theta, self.phi)
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        self.angles().unit_vector()
    }

    /// Angle-wise equality; at either pole `phi` is ignored.
    pub fn same_axis(&self, other: &Self, tol: f64) -> bool {
        if (self.theta - other.theta).abs() > tol {
            return false;
        }
        let at_pole = self.theta <= tol || (PI - self.theta) <= tol;
        if at_pole {
            return true;
        }
        let d = (self.phi - other.phi).rem_euclid(TAU);
        d <= tol || TAU - d <= tol
    }
}

impl From<Direction> for Angles {
    fn from(d: Direction) -> Self {
        d.angles()
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction(theta={}, phi={})", self.theta, self.phi)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta, self.phi)
    }
}
