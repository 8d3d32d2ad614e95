//! Abelian vortex equations on constant-curvature Riemann surfaces.
//!
//! The crate treats the family of "Taubes-form" vortex equations
//!
//! ```text
//! Δ u + δ_D / Ω_0  =  -C_0 + C_2 e^{2u} + C_4 e^{4u} + ...
//! ```
//!
//! where `Δ` is the positive (Hodge) Laplacian of the background metric
//! `g_0 = Ω_0 dz dz̄`, `δ_D` is the delta distribution on the vortex divisor
//! and the `C_{2n}` are real vortex coefficients. It provides:
//!
//! - [`catalog`]: enumeration and classification of all admissible sign
//!   patterns at a given order, canonical rescalings, and the integrable
//!   subset with its constant-curvature geometries;
//! - [`surface`]: conformal factors, Baptista rescalings
//!   `Ω_{2n} = Ω_0 e^{2nu}`, finite-difference Laplace–Beltrami and Gauss
//!   curvature operators on sampled fields;
//! - [`liouville`]: closed-form solutions built from rational maps, their
//!   ramification divisors, Laplace-vortex solutions, and the singular
//!   backgrounds that carry Chern-Simons–type solutions;
//! - [`solver`]: damped-Newton radial solves of the non-integrable
//!   equations, residual evaluation, vortex superposition on Baptista
//!   backgrounds, and the constant-term elimination transform;
//! - [`diagnostics`]: flux and volume quadrature (two-chart on the sphere),
//!   Bradlow-type volume relations, conical deficit fits, and curvature
//!   identity checks.

pub mod catalog;
pub mod diagnostics;
pub mod error;
pub mod liouville;
pub mod solver;
pub mod surface;

pub use error::{Result, VortexError};

/// Complex coordinate on a chart.
pub type C64 = num_complex::Complex64;
