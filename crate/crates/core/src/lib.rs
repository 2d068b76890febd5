//! Verification and exploration toolkit for the Feigin-Odesskii elliptic
//! algebras `Q_{n,k}(E, tau)`.
//!
//! The crate is split by subject:
//!
//! - [`theta`]: order-`n` theta functions on `C / (Z + Z eta)` and torus points.
//! - [`arith`]: negative continued fractions and the exact integer data
//!   attached to `n/k` (the `k_i`, `l_i`, the translation `sigma`, the group
//!   generated by the `s_i`, the quotient map `rho`).
//! - [`relations`]: the quadratic relations, the Belavin R-matrix, rank
//!   certification and the Yang-Baxter / graph-vanishing checks.
//! - [`rings`]: Hilbert functions and Néron-Severi arithmetic.
//! - [`slope`]: exact `(rank, degree)` arithmetic for bundles on `E`.
//! - [`cli`]: the `elliptica` command-line front end.

// `!(x > 0.0)` is used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod cli;
pub mod error;
pub mod relations;
pub mod rings;
pub mod slope;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
