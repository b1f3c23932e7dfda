//! High-precision q-special functions, q⁻¹-Fibonacci polynomial families and
//! the N-extremal solutions of the associated indeterminate moment problem.
//!
//! Every numeric routine takes a [`QContext`] fixing the base `0 < q < 1`,
//! the working precision and the series tolerances, and returns a
//! [`SeriesValue`] carrying a truncation bound alongside the value.

pub mod error;
pub mod exact;
pub mod format;
pub mod nevanlinna;
pub mod par;
pub mod qcore;
pub mod qfunctions;
pub mod qpolynomials;
pub mod rootfinder;
pub mod verify;

pub use error::{QError, Result};
pub use par::Execution;
pub use qcore::{QContext, SeriesValue};
