use super::propagate::free_propagate;
use super::trajectory::Trajectory;
use crate::spectral::{sobolev_norm, SpectralField};
use crate::{Error, Result};

/// Cauchy increments of the profile `w(t) = S(−t)u(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringDiagnostics {
    /// `t_{k+1}` for each increment.
    pub times: Vec<f64>,
    /// `δ_k = ‖w(t_{k+1}) − w(t_k)‖_{Ḣ^{−1/2}}`.
    pub increments: Vec<f64>,
}

/// Estimates the scattering state `u⁺ ≈ S(−T)u(T)`.
pub fn scattering_limit(traj: &Trajectory) -> Result<(SpectralField, ScatteringDiagnostics)> {
    if traj.len() < 4 {
        return Err(Error::domain(format!("need at least 4 samples, got {}", traj.len())));
    }
    let profiles: Vec<SpectralField> =
        traj.times().iter().zip(traj.states()).map(|(&t, u)| free_propagate(u, -t)).collect();
    let increments =
        profiles.windows(2).map(|w| sobolev_norm(&(&w[1] - &w[0]), -0.5, true)).collect::<Result<Vec<_>>>()?;
    let diagnostics = ScatteringDiagnostics { times: traj.times()[1..].to_vec(), increments };
    Ok((profiles.last().cloned().expect("non-empty"), diagnostics))
}
