//! Hilbert's epsilon-substitution method for first-order arithmetic.
//!
//! The crate runs the H-process on a finite set of critical formulas, analyses
//! the resulting sequence of substitutions, and computes the ordinal-recursive
//! bound on its length together with a checkable termination certificate.

pub mod bound;
pub mod cli;
pub mod corpus;
pub mod eval;
pub mod hprocess;
pub mod io;
pub mod ordinal;
pub mod series;
pub mod syntax;
pub mod verify;
