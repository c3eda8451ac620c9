//! Picard iterates computed directly in frequency space, and the resonance
//! algebra that controls them.

mod duhamel;
mod iterate;
mod resonance;
mod weight;

pub use duhamel::duhamel_iterate;
pub use iterate::{
    cubic_amplitude, cubic_lower_constant, general_iterate, general_iterate_monte_carlo, inflation_slope,
    third_iterate_cubic, FrequencyBand, IterateResult, TENSOR_COST_LIMIT,
};
pub use resonance::{
    cubic_band_phase_bound, relative_discrepancy, resonance_factorization_check, resonance_omega, small_time_rule,
    Sign, SignPattern,
};
pub use weight::{oscillatory_weight, SERIES_THRESHOLD};
