//! Numerical verification of curvature conditions on Riemannian and Kähler
//! charts and on immersed submanifolds.
//!
//! Metrics are given as expression matrices (or Kähler potentials) in a
//! small DSL; derivatives come from second-order forward-mode jets, so
//! Christoffel symbols and the curvature tensor are exact up to roundoff.
//! Only derivatives of fields along an immersion use finite differences.

// tensor code indexes several arrays with the same loop variable, and
// `!(x <= tol)` is deliberate so NaN fails a check
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod dsl;
pub mod error;
pub mod immersion;
pub mod jet;
pub mod kahler;
pub mod linalg;
pub mod riemann;
pub mod runner;
pub mod sampling;
pub mod verdict;

pub use error::{GeoError, Result};

/// Base tolerances: `exact` for jet-exact checks, `fd` for checks that use
/// finite differences along an immersion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub exact: f64,
    pub fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { exact: 1e-8, fd: 1e-4 }
    }
}
