//! Linear and weakly nonlinear stability of small-gap Couette-Taylor flow.
//!
//! The crate is split bottom-up:
//! - [`spectral`]: Chebyshev collocation on `x in [-1/2, 1/2]`
//! - [`linstab`]: the linearized eigenproblem, neutral curves and critical points
//! - [`landau`]: critical eigenvectors, quadratic responses and the cubic coefficient `c`
//! - [`ginzburg`]: steady amplitude equations, their first integrals and orbit classes

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ginzburg;
pub mod landau;
pub mod linstab;
pub mod spectral;

pub use error::{Error, Result};
