use std::io::{Read, Write};

use super::equation::EquationSpec;
use crate::spectral::{read_field, write_field, SpectralField};
use crate::{Error, Result};

/// Uniformly sampled solution `u(t_k)`, `t_k = t_0 + kΔt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<SpectralField>,
    spec: EquationSpec,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<SpectralField>, spec: EquationSpec) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::domain(format!(
                "trajectory needs matching non-empty times ({}) and states ({})",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("sample times must be strictly increasing"));
        }
        if times.len() > 2 {
            let step = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            let uneven = times
                .iter()
                .enumerate()
                .any(|(k, &t)| (t - (times[0] + k as f64 * step)).abs() > 1e-9 * step.max(t.abs()));
            if uneven {
                return Err(Error::domain("sample times must be uniformly spaced"));
            }
        }
        let grid = *states[0].grid();
        if states.iter().any(|s| *s.grid() != grid) {
            return Err(Error::domain("all states must share one grid"));
        }
        if grid.dim() != spec.dim() {
            return Err(Error::domain("state grid and equation disagree on dimension"));
        }
        Ok(Trajectory { times, states, spec })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn spec(&self) -> &EquationSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample spacing; zero for a single sample.
    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub fn last(&self) -> &SpectralField {
        self.states.last().expect("trajectories are non-empty")
    }

    /// Applies `f(t_k, u_k)` to every sample, keeping times and equation.
    pub fn map_states(&self, f: impl Fn(f64, &SpectralField) -> SpectralField) -> Result<Trajectory> {
        let states = self.times.iter().zip(&self.states).map(|(&t, u)| f(t, u)).collect();
        Trajectory::new(self.times.clone(), states, self.spec.clone())
    }
}

pub const TRAJECTORY_MAGIC: &[u8; 4] = b"B4NT";

/// Writes `"B4NT"`, the sample count (u64 LE), the time table (f64 LE) and
/// then one field record per sample. The equation is not serialised.
pub fn write_trajectory<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    w.write_all(TRAJECTORY_MAGIC)?;
    w.write_all(&(traj.len() as u64).to_le_bytes())?;
    for t in traj.times() {
        w.write_all(&t.to_le_bytes())?;
    }
    for s in traj.states() {
        write_field(&mut w, s)?;
    }
    Ok(())
}

pub fn read_trajectory<R: Read>(mut r: R, spec: EquationSpec) -> Result<Trajectory> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != TRAJECTORY_MAGIC {
        return Err(Error::Format(format!("bad trajectory magic {magic:?}")));
    }
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let count = u64::from_le_bytes(b) as usize;
    let mut times = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut b)?;
        times.push(f64::from_le_bytes(b));
    }
    let states = (0..count).map(|_| read_field(&mut r)).collect::<Result<Vec<_>>>()?;
    Trajectory::new(times, states, spec)
}
