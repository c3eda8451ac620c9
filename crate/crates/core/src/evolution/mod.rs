//! Linear propagator, pseudospectral nonlinearity, time stepping and the
//! space-time diagnostics computed on the resulting trajectories.
//!
//! The linear flow is `S(t) = e^{-it|ξ|⁴}` and solutions obey the Duhamel
//! form `u(t) = S(t)u₀ − i∫₀ᵗ S(t−t') ∂P_m(u, ū)(t') dt'`.

mod equation;
mod nonlinear;
mod norms;
mod propagate;
mod scattering;
mod stepper;
mod strichartz;
mod trajectory;

pub use equation::{Derivative, EquationSpec, Monomial};
pub use nonlinear::{apply_nonlinearity, Nonlinearity};
pub use norms::{lq_norm, mixed_norm};
pub use propagate::{free_propagate, propagator_symbol};
pub use scattering::{scattering_limit, ScatteringDiagnostics};
pub use stepper::{evolve, evolve_with, step_integrate, Scheme, Stepper, BLOW_UP_FACTOR};
pub use strichartz::{admissible_pair_check, strichartz_ratio, xs_exponents, Exponent};
pub use trajectory::{read_trajectory, write_trajectory, Trajectory, TRAJECTORY_MAGIC};
