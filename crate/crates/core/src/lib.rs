//! Invariant metrics and distances of planar domains, with tools for checking
//! their boundary behaviour numerically.

pub mod asymptotics;
pub mod conformal;
pub mod distance;
pub mod domain;
pub mod error;
pub mod metrics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
