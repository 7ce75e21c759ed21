//! Least-squares collocation for linear boundary-value problems of
//! higher-index differential-algebraic equations
//!
//! ```text
//! A(t) (D x)'(t) + B(t) x(t) = q(t),   G_a x(a) + G_b x(b) = d,   D = [I 0],
//! ```
//!
//! discretized on piecewise polynomials (degree `N` for the `k` differentiated
//! components, `N - 1` for the rest) and solved as an overdetermined,
//! equality-constrained linear least-squares problem.
//!
//! The pipeline is
//! [`model`] (problem and mesh) → [`basis`] (local ansatz functions) →
//! [`assembly`] (sparse system `min ‖𝒜c − r‖ s.t. 𝒞c = 0`) →
//! [`lsq`] (direct, weighted, deferred-correction solvers) →
//! [`analysis`] (evaluation and error norms).
//! The supporting kernels live in [`orthopoly`], [`nodes`] and [`vandermonde`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod assembly;
pub mod basis;
pub mod dense;
mod error;
pub mod lsq;
pub mod model;
pub mod nodes;
pub mod orthopoly;
pub mod sparse;
pub mod vandermonde;

pub use error::{Error, Result};

/// Unit roundoff of `f64`.
pub const EPS: f64 = f64::EPSILON;
