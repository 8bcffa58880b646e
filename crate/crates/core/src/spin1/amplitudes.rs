//! Closed-form spin-1 probability amplitudes and probabilities.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::algebra::ComplexMatrix;
use crate::direction::{Angles, Direction};
use crate::lande::GenericAmplitudeTable;

/// Trigonometric pieces of one polar angle that every formula needs.
#[derive(Clone, Copy)]
pub(crate) struct Trig {
    pub sin: f64,
    pub cos: f64,
    /// cos^2(theta / 2)
    pub ch: f64,
    /// sin^2(theta / 2)
    pub sh: f64,
}

impl Trig {
    pub fn of(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let (sh, ch) = (theta / 2.0).sin_cos();
        Self {
            sin: s,
            cos: c,
            ch: ch * ch,
            sh: sh * sh,
        }
    }
}

pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub(crate) fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// A 3x3 amplitude table between two physical directions. Row `i` is the
/// initial projection along `from`, column `f` the final projection along
/// `to`, both ordered (+1, 0, -1).
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub from: Direction,
    pub to: Direction,
    pub entries: ComplexMatrix,
}

impl AmplitudeTable {
    pub fn get(&self, initial: usize, fin: usize) -> Complex64 {
        self.entries[(initial, fin)]
    }

    pub fn to_generic(&self) -> GenericAmplitudeTable {
        GenericAmplitudeTable::new(self.from, self.to, self.entries.clone())
    }
}

impl From<AmplitudeTable> for GenericAmplitudeTable {
    fn from(t: AmplitudeTable) -> Self {
        GenericAmplitudeTable::new(t.from, t.to, t.entries)
    }
}

/// Amplitudes from the projections along `a` to those along the intermediate
/// axis obtained by diagonalising `sigma . a`: the rows are the eigenvectors
/// of [`super::direction_operator`], exactly as printed (row -1 included).
pub fn special_amplitudes(a: &Direction) -> AmplitudeTable {
    AmplitudeTable {
        from: *a,
        to: Direction::z(),
        entries: special_matrix(a.angles()),
    }
}

/// [`special_amplitudes`] with row -1 multiplied by -1. These are the tables
/// whose Landé composition reproduces [`general_amplitudes`] exactly.
pub fn special_amplitudes_rephased(a: &Direction) -> AmplitudeTable {
    let mut t = special_amplitudes(a);
    for f in 0..3 {
        t.entries[(2, f)] = -t.entries[(2, f)];
    }
    t
}

pub(crate) fn special_matrix(a: Angles) -> ComplexMatrix {
    let t = Trig::of(a.theta);
    let em = cis(-a.phi);
    let ep = cis(a.phi);
    let r = FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[
        [t.ch * em, re(r * t.sin), t.sh * ep],
        [-r * t.sin * em, re(t.cos), r * t.sin * ep],
        [-t.sh * em, re(r * t.sin), -t.ch * ep],
    ])
}

/// The nine amplitudes `psi(m_i along a; m_f along c)`.
pub fn general_amplitudes(a: &Direction, c: &Direction) -> AmplitudeTable {
    AmplitudeTable {
        from: *a,
        to: *c,
        entries: general_matrix(a.angles(), c.angles()),
    }
}

/// [`general_amplitudes`] evaluated at arbitrary (formal) angles.
pub fn general_matrix(a: Angles, c: Angles) -> ComplexMatrix {
    let t = Trig::of(a.theta);
    let u = Trig::of(c.theta);
    // every entry depends on phi - phi' only
    let delta = a.phi - c.phi;
    let em = cis(-delta);
    let ep = cis(delta);
    let r = FRAC_1_SQRT_2;
    let ss = t.sin * u.sin;

    let pp = t.ch * u.ch * em + t.sh * u.sh * ep + 0.5 * ss;
    let p0 = r * (t.sh * u.sin * ep - t.ch * u.sin * em + t.sin * u.cos);
    let pm = t.ch * u.sh * em + t.sh * u.ch * ep - 0.5 * ss;
    let zp = r * (-t.sin * u.ch * em + t.sin * u.sh * ep + t.cos * u.sin);
    let zz = 0.5 * ss * em + 0.5 * ss * ep + t.cos * u.cos;
    let zm = r * (-t.sin * u.sh * em + t.sin * u.ch * ep - t.cos * u.sin);
    let mp = t.sh * u.ch * em + t.ch * u.sh * ep - 0.5 * ss;
    let m0 = r * (-t.sh * u.sin * em + t.ch * u.sin * ep - t.sin * u.cos);
    let mm = t.sh * u.sh * em + t.ch * u.ch * ep + 0.5 * ss;

    ComplexMatrix::from_rows(&[[pp, p0, pm], [zp, zz, zm], [mp, m0, mm]])
}

/// Squared moduli of a spin-1 amplitude table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub from: Direction,
    pub to: Direction,
    pub entries: [[f64; 3]; 3],
}

impl ProbabilityTable {
    pub fn row_sums(&self) -> [f64; 3] {
        self.entries.map(|row| row.iter().sum())
    }
}

pub fn probability_table(a: &Direction, c: &Direction) -> ProbabilityTable {
    let amps = general_amplitudes(a, c);
    let mut entries = [[0.0; 3]; 3];
    for (i, row) in entries.iter_mut().enumerate() {
        for (f, p) in row.iter_mut().enumerate() {
            *p = amps.get(i, f).norm_sqr();
        }
    }
    ProbabilityTable {
        from: *a,
        to: *c,
        entries,
    }
}

/// The printed probability expressions, built from the three independent
/// values and the degeneracy pattern among the rest.
pub fn closed_form_probabilities(a: &Direction, c: &Direction) -> ProbabilityTable {
    let t = Trig::of(a.theta());
    let u = Trig::of(c.theta());
    let cos_dphi = (c.phi() - a.phi()).cos();
    let ss = t.sin * u.sin * cos_dphi;
    let dot = t.cos * u.cos + ss;

    let pp = (t.ch * u.ch + t.sh * u.sh + 0.5 * ss).powi(2);
    let p0 = 0.5 * (1.0 - dot * dot);
    let pm = (t.ch * u.sh + t.sh * u.ch - 0.5 * ss).powi(2);
    let zz = dot * dot;
    ProbabilityTable {
        from: *a,
        to: *c,
        entries: [[pp, p0, pm], [p0, zz, p0], [pm, p0, pp]],
    }
}

/// `(lhs, rhs, sign)` with `conj(T[lhs]) == sign * T[rhs]`.
pub type SymmetryRelation = ((usize, usize), (usize, usize), f64);

/// Conjugation identities between entries of one table.
pub const SYMMETRY_RELATIONS: [SymmetryRelation; 9] = [
    ((0, 0), (2, 2), 1.0),
    ((0, 1), (2, 1), -1.0),
    ((0, 2), (2, 0), 1.0),
    ((1, 0), (1, 2), -1.0),
    ((1, 1), (1, 1), 1.0),
    ((1, 2), (1, 0), -1.0),
    ((2, 0), (0, 2), 1.0),
    ((2, 1), (0, 1), -1.0),
    ((2, 2), (0, 0), 1.0),
];

/// Residual `|conj(T[lhs]) - sign * T[rhs]|` of each symmetry relation.
pub fn symmetry_residuals(t: &AmplitudeTable) -> [f64; 9] {
    SYMMETRY_RELATIONS.map(|(l, r, sign)| (t.entries[l].conj() - sign * t.entries[r]).norm())
}
