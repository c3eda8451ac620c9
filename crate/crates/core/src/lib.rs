//! Pseudospectral simulation and numerical verification for the fourth-order
//! Schrödinger equation with a derivative polynomial nonlinearity,
//!
//! ```text
//! i ∂_t u − Δ² u = ∂ P_m(u, ū),      P_m(f, g) = Σ_{α+β=m} c_{αβ} f^α g^β,
//! ```
//!
//! posed on a large periodic box standing in for ℝ^d (d ∈ {1, 2}).
//!
//! The crate is organised by subsystem:
//!
//! * [`spectral`]: grids, band-limited fields, dyadic Littlewood–Paley
//!   projections, Sobolev norms, scaling and the frequency-box data used by the
//!   norm-inflation experiments.
//! * [`evolution`]: the free propagator, pseudospectral nonlinearity, the
//!   integrating-factor RK4 stepper, mixed space-time norms, Strichartz
//!   sampling and scattering diagnostics.
//! * [`picard`]: resonance algebra and exact-in-frequency Duhamel iterates.
//! * [`variation`]: p-variation, U^p atoms, V^p_S norms and modulation
//!   projections.
//! * [`experiments`]: scenario runner, configuration and report output behind
//!   the `b4ns` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod picard;
pub mod spectral;
pub mod variation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
