//! Orthogonal polynomials for generalized Jacobi weights with an interior
//! algebraic singularity and a jump.
//!
//! The crate computes monic recurrence coefficients by a discretized
//! Stieltjes procedure, evaluates first-order asymptotic predictions for
//! them, and verifies the confluent hypergeometric local parametrix that
//! underlies those predictions.

pub mod asymptotics;
pub mod cfh;
pub mod cli;
pub mod mat2;
pub mod params;
pub mod quadrature;
pub mod recurrence;
pub mod szego;

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
