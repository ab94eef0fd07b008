//! Exact combinatorics for nilpotent orbits of classical Lie algebras of
//! adjoint type: induction and birational induction, Namikawa spaces and
//! Namikawa-Weyl groups, sheets and birational sheets, and orbit-method labels.
//!
//! Everything is integer or rational arithmetic. Group-theoretic data is found by
//! brute-force enumeration of Weyl groups, so ranks are kept small (default cap:
//! `|W(B7)|` elements).

pub mod error;
pub mod induction;
pub mod namikawa;
pub mod orbitmethod;
pub mod orbits;
pub mod partition;
pub mod rootsys;
pub mod sheets;
pub mod tables;

pub use error::{Error, Result};
pub use partition::Partition;

/// Exact rational numbers used for central parameters.
pub type Rational = num_rational::Ratio<i64>;

/// Bumped whenever results may change; part of every cache key.
pub const MODULE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+tables", "2");
