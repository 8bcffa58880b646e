//! Spin-independent amplitude machinery: composition through an intermediate
//! observable, argument reversal, operator assembly from amplitude tables,
//! expectation values and the reference-vector case taxonomy.
//!
//! A table `T` with `from = A`, `to = C` holds `T[(i, k)] = psi(A_i; C_k)`,
//! the amplitude for finding projection `k` along `C` given projection `i`
//! along `A`. Projections are ordered from the largest down.

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{ComplexMatrix, ComplexVector, CLOSED_FORM_TOL, EIGEN_TOL};
use crate::direction::{Angles, Direction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandeError {
    #[error("cannot compose: intermediate labels differ ({0} vs {1})")]
    LabelMismatch(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("eigenvalue weights must be finite")]
    NonFiniteWeight,
}

/// Identifies the observable a table index refers to.
#[derive(Debug, Clone, Copy)]
pub enum BasisLabel {
    /// Spin projection along a physical direction.
    Axis(Direction),
    /// Projection along formally substituted angles (e.g. `theta + pi/2`).
    Formal(Angles),
}

impl BasisLabel {
    pub fn matches(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Axis(a), Self::Axis(b)) => a.same_axis(b, CLOSED_FORM_TOL),
            (Self::Formal(a), Self::Formal(b)) => {
                (a.theta - b.theta).abs() <= CLOSED_FORM_TOL
                    && (a.phi - b.phi).abs() <= CLOSED_FORM_TOL
            }
            _ => false,
        }
    }
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Axis(d) => write!(f, "axis{d}"),
            Self::Formal(a) => write!(f, "formal({}, {})", a.theta, a.phi),
        }
    }
}

impl From<Direction> for BasisLabel {
    fn from(d: Direction) -> Self {
        Self::Axis(d)
    }
}

/// A (2J+1)x(2J+1) table of probability amplitudes between two bases.
#[derive(Debug, Clone)]
pub struct GenericAmplitudeTable {
    pub from: BasisLabel,
    pub to: BasisLabel,
    pub entries: ComplexMatrix,
}

impl GenericAmplitudeTable {
    pub fn new(
        from: impl Into<BasisLabel>,
        to: impl Into<BasisLabel>,
        entries: ComplexMatrix,
    ) -> Self {
        Self {
            from: from.into(),
            to: to.into(),
            entries,
        }
    }

    pub fn identity(label: impl Into<BasisLabel> + Copy, dim: usize) -> Self {
        Self::new(label, label, ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, initial: usize, fin: usize) -> Complex64 {
        self.entries[(initial, fin)]
    }

    /// Amplitudes from one initial projection to every final projection.
    pub fn row(&self, initial: usize) -> ComplexVector {
        self.entries.row(initial)
    }

    /// Entrywise squared moduli.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|k| self.get(i, k).norm_sqr()).collect())
            .collect()
    }
}

/// Observable values `r_k` attached to each projection of the final basis.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueWeights(Vec<f64>);

impl EigenvalueWeights {
    pub fn new(values: Vec<f64>) -> Result<Self, LandeError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LandeError::NonFiniteWeight);
        }
        Ok(Self(values))
    }

    pub fn constant(value: f64, dim: usize) -> Self {
        Self(vec![value; dim])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Landé expansion: `psi(A_i; C_k) = sum_j chi(A_i; B_j) phi(B_j; C_k)`.
pub fn compose(
    ab: &GenericAmplitudeTable,
    bc: &GenericAmplitudeTable,
) -> Result<GenericAmplitudeTable, LandeError> {
    if ab.dim() != bc.dim() {
        return Err(LandeError::DimMismatch(ab.dim(), bc.dim()));
    }
    if !ab.to.matches(&bc.from) {
        return Err(LandeError::LabelMismatch(
            ab.to.to_string(),
            bc.from.to_string(),
        ));
    }
    Ok(GenericAmplitudeTable {
        from: ab.from,
        to: bc.to,
        entries: &ab.entries * &bc.entries,
    })
}

/// Reverse the arguments with `psi(A; C) = psi*(C; A)`.
pub fn hermitian_flip(t: &GenericAmplitudeTable) -> GenericAmplitudeTable {
    GenericAmplitudeTable {
        from: t.to,
        to: t.from,
        entries: t.entries.adjoint(),
    }
}

/// Matrix of an observable `R` in the `from` basis of `phi`:
/// `R_kl = sum_n phi*(b_k; c_n) phi(b_l; c_n) r_n`.
pub fn operator_from_amplitudes(
    phi: &GenericAmplitudeTable,
    r: &EigenvalueWeights,
) -> Result<ComplexMatrix, LandeError> {
    let n = phi.dim();
    if r.len() != n {
        return Err(LandeError::DimMismatch(n, r.len()));
    }
    let e = &phi.entries;
    Ok(ComplexMatrix::from_fn(n, |k, l| {
        (0..n)
            .map(|m| e[(k, m)].conj() * e[(l, m)] * r.values()[m])
            .sum()
    }))
}

/// `<R> = state^dagger R state`, with the (round-off) imaginary part dropped.
pub fn expectation(state: &ComplexVector, r: &ComplexMatrix) -> Result<f64, LandeError> {
    if state.dim() != r.dim() {
        return Err(LandeError::DimMismatch(state.dim(), r.dim()));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > EIGEN_TOL {
        return Err(LandeError::NotNormalized(norm));
    }
    let defect = r.hermiticity_defect();
    if defect > EIGEN_TOL {
        return Err(LandeError::NotHermitian(defect));
    }
    Ok(state.inner(&r.mul_vec(state)).re)
}

/// Which of the five reference-vector configurations a choice of
/// (intermediate `b`, measured `c`, prepared `a`) falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `b != a`, `c != a`, `b != c`: general vectors and general operator.
    A,
    /// `b == a`: Kronecker-delta vectors, general operator in the `a` basis.
    B,
    /// `b == c != a`: amplitude vectors, diagonal operator.
    C,
    /// `c == a != b`: amplitude vectors, general operator; the vectors are
    /// eigenvectors of the operator.
    D,
    /// `b == c == a`: standard forms of both.
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorForm {
    KroneckerDelta,
    Amplitudes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorForm {
    Diagonal,
    General,
}

impl CaseTag {
    pub fn vector_form(self) -> VectorForm {
        match self {
            CaseTag::B | CaseTag::E => VectorForm::KroneckerDelta,
            _ => VectorForm::Amplitudes,
        }
    }

    pub fn operator_form(self) -> OperatorForm {
        match self {
            CaseTag::C | CaseTag::E => OperatorForm::Diagonal,
            _ => OperatorForm::General,
        }
    }

    pub fn letter(self) -> char {
        match self {
            CaseTag::A => 'a',
            CaseTag::B => 'b',
            CaseTag::C => 'c',
            CaseTag::D => 'd',
            CaseTag::E => 'e',
        }
    }
}

pub fn reference_case(b: &Direction, c: &Direction, a: &Direction) -> CaseTag {
    let eq = |x: &Direction, y: &Direction| x.same_axis(y, CLOSED_FORM_TOL);
    match (eq(b, a), eq(c, a), eq(b, c)) {
        (true, true, _) => CaseTag::E,
        (_, _, true) => CaseTag::C,
        (true, false, _) => CaseTag::B,
        (false, true, _) => CaseTag::D,
        (false, false, false) => CaseTag::A,
    }
}
