//! Exact arithmetic for (denormalized) volume polynomials.
//!
//! The crate is organised bottom-up:
//!
//! - [`exponent`] and [`rational`]: exponent vectors and exact rational helpers.
//! - [`poly`]: sparse homogeneous polynomials with the normalization map,
//!   diagonalization, truncations, derived polynomials and differential operators.
//! - [`symmetric`]: complete homogeneous symmetric polynomials and Schur
//!   polynomials via Kostka numbers.
//! - [`poset`]: finite posets, linear extensions, chain statistics and the
//!   Kahn-Saks and Stanley polynomials.
//! - [`checks`]: coefficient inequalities (Khovanskii-Teissier and its
//!   reverse), poset inequalities, conjecture probes and identity verifiers.
//! - [`harness`]: seeded corpora and report generation used by the `volpoly` CLI.
//!
//! Everything is exact. No floating point enters a coefficient or a comparison.

pub mod checks;
pub mod error;
pub mod exponent;
pub mod harness;
pub mod poly;
pub mod poset;
pub mod random;
pub mod rational;
pub mod symmetric;

pub use checks::{CheckReport, Severity, Witness};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use poly::SparsePoly;
pub use poset::{Chain, GapTable, Poset, PositionTable};
pub use rational::Rational;
pub use symmetric::Partition;
