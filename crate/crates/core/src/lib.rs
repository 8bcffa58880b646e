//! Probability amplitudes and spin operators for spin J built from the
//! Landé composition rule, with closed forms for spin 1, a numerical engine
//! for any J up to 10, and a sequential-measurement simulator.

pub mod algebra;
pub mod cli;
pub mod direction;
pub mod general_j;
pub mod lande;
pub mod measure;
pub mod spin1;
pub mod verify;
