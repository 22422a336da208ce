//! Equivalence, universality and conditional bisimilarity checks for
//! weighted automata and conditional transition systems over pluggable
//! semirings.

pub mod bdd;
pub mod construct;
pub mod control;
pub mod cts;
pub mod semiring;
pub mod solve;
pub mod wa;
