use num_complex::Complex64;
use rayon::prelude::*;

use crate::evolution::{free_propagate, EquationSpec, Nonlinearity};
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// `−i ∫₀ᵀ S(T − t') ∂P_m(S(t')u_1, …, S(t')u_m) dt'` by the trapezoid rule
/// with `steps` panels.
///
/// Each slot is evolved freely from its input; conjugated slots follow the
/// monomial layout of [`Nonlinearity::evaluate_slots`]. A single input fills
/// every slot, which gives the first Picard iterate of that datum.
pub fn duhamel_iterate(
    inputs: &[SpectralField],
    spec: &EquationSpec,
    horizon: f64,
    steps: usize,
) -> Result<SpectralField> {
    if steps < 16 {
        return Err(Error::domain(format!("need at least 16 quadrature panels, got {steps}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon must be non-negative, got {horizon}")));
    }
    let m = spec.degree();
    let slots: Vec<SpectralField> = match inputs.len() {
        1 => vec![inputs[0].clone(); m],
        k if k == m => inputs.to_vec(),
        k => return Err(Error::domain(format!("expected 1 or {m} inputs, got {k}"))),
    };
    let grid = *slots[0].grid();
    if slots.iter().any(|u| u.grid() != &grid) {
        return Err(Error::domain("inputs live on different grids"));
    }
    if grid.dim() != spec.dim() {
        return Err(Error::domain("inputs and equation disagree on dimension"));
    }
    if horizon == 0.0 {
        return Ok(SpectralField::zeros(grid));
    }
    let nl = Nonlinearity::new(grid, spec);
    let dt = horizon / steps as f64;
    let terms: Vec<SpectralField> = (0..=steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * dt;
            let evolved: Vec<SpectralField> = slots.iter().map(|u| free_propagate(u, t)).collect();
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            &free_propagate(&nl.evaluate_slots(&evolved), horizon - t) * w
        })
        .collect();
    let mut acc = SpectralField::zeros(grid);
    for term in &terms {
        acc = &acc + term;
    }
    Ok(acc.scale(Complex64::new(0.0, -dt)))
}
