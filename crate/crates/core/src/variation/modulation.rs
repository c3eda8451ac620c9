use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;

use super::path::{vs_norm, PathSample};
use crate::evolution::{free_propagate, Trajectory};
use crate::spectral::fft::transform_1d;
use crate::spectral::{chi, SpectralField};
use crate::{Error, Result};

/// Window applied in time before the modulation transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Taper {
    /// The sampled window is treated as one period.
    None,
    /// Tukey window: flat on the central `flat` fraction, raised-cosine ramps
    /// on the rest.
    Tukey { flat: f64 },
}

impl Default for Taper {
    fn default() -> Self {
        Taper::Tukey { flat: 0.8 }
    }
}

impl Taper {
    /// Window values at `count` uniform samples.
    pub fn weights(&self, count: usize) -> Vec<f64> {
        match *self {
            Taper::None => vec![1.0; count],
            Taper::Tukey { flat } => {
                let ramp = (1.0 - flat.clamp(0.0, 1.0)) / 2.0;
                (0..count)
                    .map(|k| {
                        let x = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.5 };
                        let edge = x.min(1.0 - x);
                        if ramp == 0.0 || edge >= ramp {
                            1.0
                        } else {
                            0.5 * (1.0 - (PI * edge / ramp).cos())
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    /// `Q^S_{≥M}`: multiplier `1 − χ(2|τ − |ξ|⁴|/M)`.
    High,
    /// `Q^S_{<M}`: multiplier `χ(2|τ − |ξ|⁴|/M)`.
    Low,
}

fn multiplier(mode: Modulation, sigma: f64, m: f64) -> f64 {
    let low = chi(2.0 * sigma.abs() / m);
    match mode {
        Modulation::High => 1.0 - low,
        Modulation::Low => low,
    }
}

/// [`modulation_project_with`] under the default Tukey taper.
pub fn modulation_project(traj: &Trajectory, scale: f64, mode: Modulation) -> Result<Trajectory> {
    modulation_project_with(traj, scale, mode, Taper::default())
}

/// Space-time modulation projection of a uniformly sampled trajectory.
///
/// Per spatial mode `ξ`: twist by `e^{it|ξ|⁴}` so that free waves are
/// constant, apply the taper, transform in time (a wave `e^{−iτt}` sits at
/// modulation `τ − |ξ|⁴`), multiply by the high or low multiplier, invert and
/// twist back. High and low parts sum to the tapered trajectory.
pub fn modulation_project_with(traj: &Trajectory, scale: f64, mode: Modulation, taper: Taper) -> Result<Trajectory> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("modulation scale must be positive, got {scale}")));
    }
    let count = traj.len();
    if count < 2 {
        return Err(Error::domain("modulation projection needs at least two samples"));
    }
    let dt = traj.step();
    let times = traj.times();
    let grid = *traj.states()[0].grid();
    let window = taper.weights(count);
    let sigma: Vec<f64> = (0..count)
        .map(|j| {
            let signed = if j < count.div_ceil(2) { j as f64 } else { j as f64 - count as f64 };
            2.0 * PI * signed / (count as f64 * dt)
        })
        .collect();
    let columns: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let r = grid.wavenumber(flat);
            let r4 = r * r * r * r;
            let mut series: Vec<Complex64> = (0..count)
                .map(|k| traj.states()[k].coeffs()[flat] * Complex64::from_polar(window[k], times[k] * r4))
                .collect();
            if series.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
                return series;
            }
            transform_1d(&mut series, FftDirection::Inverse);
            for (c, &s) in series.iter_mut().zip(&sigma) {
                *c *= multiplier(mode, s, scale) / count as f64;
            }
            transform_1d(&mut series, FftDirection::Forward);
            for (k, c) in series.iter_mut().enumerate() {
                *c *= Complex64::from_polar(1.0, -times[k] * r4);
            }
            series
        })
        .collect();
    let states = (0..count)
        .map(|k| SpectralField::new(grid, columns.iter().map(|col| col[k]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), states, traj.spec().clone())
}

/// `(Σ_k Δt ‖u(t_k)‖²_{L²})^{1/2}`.
pub fn l2_tx(traj: &Trajectory) -> f64 {
    let dt = traj.step();
    (traj.states().iter().map(|u| u.l2_norm().powi(2)).sum::<f64>() * dt).sqrt()
}

/// `‖Q^S_{≥M}u‖_{L²_{tx}} · M^{1/2} / ‖u‖_{V²_S}` with the default taper.
pub fn check_high_modulation_bound(traj: &Trajectory, scale: f64) -> Result<f64> {
    check_high_modulation_bound_with(traj, scale, Taper::default())
}

pub fn check_high_modulation_bound_with(traj: &Trajectory, scale: f64, taper: Taper) -> Result<f64> {
    let v = vs_norm(&PathSample::from_trajectory(traj)?, 2.0)?;
    if !(v > 0.0) {
        return Err(Error::domain("trajectory has zero V²_S norm"));
    }
    let high = modulation_project_with(traj, scale, Modulation::High, taper)?;
    Ok(l2_tx(&high) * scale.sqrt() / v)
}

/// The same ratio for the free evolution of the first sample over the same
/// window: the part of the high-modulation mass caused by the finite window
/// alone. A free wave has `‖S(·)φ‖_{V²_S} = ‖φ‖_{L²}`, which is used as the
/// denominator directly.
pub fn free_leakage_floor(traj: &Trajectory, scale: f64, taper: Taper) -> Result<f64> {
    let u0 = free_propagate(&traj.states()[0], -traj.times()[0]);
    let norm = u0.l2_norm();
    if !(norm > 0.0) {
        return Err(Error::domain("trajectory starts at zero"));
    }
    let free = traj.map_states(|t, _| free_propagate(&u0, t))?;
    let high = modulation_project_with(&free, scale, Modulation::High, taper)?;
    Ok(l2_tx(&high) * scale.sqrt() / norm)
}

/// Checks `max_j |τ_j − |ξ_j|⁴| ≥ (1/5) max_j |ξ_j|⁴` for
/// `Σ τ_j = Σ ξ_j = 0`. Returns `(lhs, rhs, ok)` with `1e-9` relative slack.
pub fn modulation_lemma_check(tau: &[f64; 5], xi: &[f64; 5]) -> Result<(f64, f64, bool)> {
    let tol = |v: &[f64; 5]| 1e-9 * v.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    let (st, sx) = (tau.iter().sum::<f64>(), xi.iter().sum::<f64>());
    if st.abs() > tol(tau) || sx.abs() > tol(xi) {
        return Err(Error::Constraint(format!("Σ τ = {st:e}, Σ ξ = {sx:e}; both must vanish")));
    }
    let lhs = tau.iter().zip(xi).map(|(t, x)| (t - x.powi(4)).abs()).fold(0.0, f64::max);
    let rhs = xi.iter().map(|x| x.powi(4)).fold(0.0, f64::max) / 5.0;
    Ok((lhs, rhs, lhs >= rhs - 1e-9 * rhs))
}
