//! Exact-arithmetic toolkit for finite-level evaluations of the two-variable
//! p-adic L-function of an ordinary weight-2 eigenform over an imaginary
//! quadratic field, together with truncated Iwasawa-algebra utilities and a
//! few arithmetic-invariant calculators.
//!
//! Everything is exact: integers and rationals are arbitrary precision,
//! p-adic quantities carry their precision explicitly, and roots of unity are
//! symbolic elements of cyclotomic rings.

pub mod arith;
pub mod cache;
pub mod data;
pub mod error;
pub mod hida;
pub mod invariants;
pub mod io;
pub mod iwasawa;
pub mod measures;
pub mod qexp;
pub mod quadclass;
pub mod ring;

pub use error::{Error, Result};
