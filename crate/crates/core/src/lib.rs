//! Semi-quantum finite automata.
//!
//! This crate models the measure-once general quantum finite automaton (MO-1gQFA)
//! and three hybrid automata that pair a quantum register with classical control:
//!
//!  - CL-1QFA: per-symbol projective measurements whose outcome word must lie in a
//!    regular control language.
//!  - 1QFAC: a classical state picks both the unitary applied on each symbol and the
//!    final measurement.
//!  - 1QCFA: a general measurement on every step whose outcome drives the classical
//!    transition.
//!
//! Every hybrid automaton with `q` quantum basis states and `k` classical states is
//! simulated by a `q*k`-dimensional MO-1gQFA ([`conversion`]), and the size bounds that
//! follow from a sphere-packing argument on `vec(rho)` are evaluated and audited in
//! [`bounds`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, random generators and the
//! command line live in the companion `sqfa` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod conversion;
pub mod linalg;
pub mod matrix;
pub mod models;
mod sum;

pub use matrix::{CMatrix, Check, Complex, MatrixError, Tolerance};
pub use models::{
    Alphabet, ClQfa, Dfa, DfaRun, Model, ModelError, ModelKind, MoGqfa, QcfaAut, QfacAut,
    Violation,
};
pub use sum::CompensatedSum;
