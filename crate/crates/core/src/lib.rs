//! Local Siegel series, Gross–Keating invariants, naive EGK data and
//! Fourier coefficients of Siegel lifts, in exact arithmetic.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod arith;
pub mod attach;
pub mod budget;
pub mod corpus;
pub mod egk;
pub mod error;
pub mod gross_keating;
pub mod lift;
pub mod oracle;
pub mod quadratic;

pub use budget::Budget;
pub use error::{Error, Result};
pub use quadratic::HalfIntegralMatrix;
