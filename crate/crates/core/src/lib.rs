//! Exact verification of tables of positive definite quaternary quadratic
//! forms: Jordan splittings, genus symbols, automorphism counts, local
//! densities and masses, checked against tabulated values.

pub mod arith;
pub mod audit;
pub mod autmass;
pub mod error;
pub mod ingest;
pub mod jordan;
pub mod model;
pub mod symbol;

pub use arith::{RatMatrix, Rational, UnitClass2};
pub use error::{Error, Result};
pub use model::{FormRecord, GenusRecord, QuadForm};
