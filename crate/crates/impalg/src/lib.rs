//! Finite-model workbench for implication algebras `(A, →, 1)`.
//!
//! Evaluate axioms on Cayley tables, classify tables into named classes,
//! enumerate and count small algebras, and check implication claims by
//! exhaustive search.

pub mod claims;
pub mod classes;
pub mod cli;
pub mod core;
pub mod corpus;
pub mod io;
pub mod props;
pub mod search;

pub use crate::core::*;
