//! Discrete `U^p` atoms, `p`-variation and `V^p_S` norms, and space-time
//! modulation projections.

mod modulation;
mod path;

pub use modulation::{
    check_high_modulation_bound, check_high_modulation_bound_with, free_leakage_floor, l2_tx, modulation_lemma_check,
    modulation_project, modulation_project_with, Modulation, Taper,
};
pub use path::{make_up_atom, p_variation, p_variation_scalar, variation_sum, vs_norm, y_norm, PathSample, StepPath};
