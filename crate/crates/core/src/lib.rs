//! Verification toolkit for the existence of a prime in `[3n, 4n]`.

pub mod bigmath;
pub mod error;
pub mod exact_arith;
pub mod observations;
pub mod parallel;
pub mod prime_engine;
pub mod rational;
pub mod stirling_bounds;
pub mod verifier;

pub use error::{Error, Result};
