//! Exact polynomial mappings between musical note-sets.
//!
//! Pitches are rationals anchored at `C4 = 0`. Given two equally sized note-sets, [`mapping`]
//! derives the polynomial sending one onto the other by solving a Vandermonde system exactly;
//! chains of such polynomials turn one set into a whole progression.

pub mod cli;
pub mod expr;
pub mod harness;
pub mod mapping;
pub mod midi;
pub mod pitch;
pub mod poly;
pub mod progression;
pub mod rational;
pub mod realize;
pub mod score;
pub mod solver;

pub use expr::parse_function_expr;
pub use mapping::{interpolate, FunctionAlgorithm, InterpolationProblem, Pinning};
pub use pitch::{NoteSet, PitchSpelling, SpellingPolicy};
pub use poly::RationalPolynomial;
pub use rational::Rational;
