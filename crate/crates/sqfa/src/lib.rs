//! File formats, seeded generators, equivalence fuzzing and the command-line interface
//! on top of `sqfa-core`.

pub mod cli;
pub mod format;
pub mod fuzz;
pub mod generate;

pub use format::{emit_automaton, parse_automaton, parse_unvalidated, FormatError};
pub use fuzz::{equivalence_fuzz, FuzzFailure, FuzzReport};
pub use generate::{gen_haar_unitary, gen_random_model, random_model, FuzzConfig};
