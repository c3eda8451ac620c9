use std::f64::consts::PI;

use crate::{Error, Result};

/// A periodic box `[0, L)^d` sampled with `n` points per dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
}

/// Builds a [`Grid`]; `n` must be a power of two no smaller than 8.
pub fn make_grid(dim: usize, n: usize, length: f64) -> Result<Grid> {
    Grid::new(dim, n, length)
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Grid> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Grid(format!("dimension {dim} outside supported range 1..=2")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("modes per dimension must be a power of two >= 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("period must be positive and finite, got {length}")));
        }
        Ok(Grid { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Modes per dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Period `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Lattice spacing `2π/L` in frequency.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Physical grid spacing `L/n`.
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Total number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency-space quadrature weight `(2π/L)^d`.
    pub fn quadrature_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Signed lattice index of FFT slot `k` along one axis.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// FFT slot holding signed index `k`, if it is on the lattice.
    pub fn slot_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.n as i64) as usize)
        }
    }

    /// Per-axis signed indices of a flat (row-major) position. Unused axes are 0.
    pub fn lattice_index(&self, flat: usize) -> [i64; 2] {
        match self.dim {
            1 => [self.signed_index(flat), 0],
            _ => [self.signed_index(flat / self.n), self.signed_index(flat % self.n)],
        }
    }

    /// Flat position of the lattice point with the given signed indices.
    pub fn flat_index(&self, ks: [i64; 2]) -> Option<usize> {
        match self.dim {
            1 => self.slot_of(ks[0]),
            _ => Some(self.slot_of(ks[0])? * self.n + self.slot_of(ks[1])?),
        }
    }

    pub fn wavevector(&self, flat: usize) -> [f64; 2] {
        let k = self.lattice_index(flat);
        let h = self.spacing();
        [k[0] as f64 * h, k[1] as f64 * h]
    }

    pub fn wavenumber(&self, flat: usize) -> f64 {
        let [a, b] = self.wavevector(flat);
        a.hypot(b)
    }

    /// True when any axis sits on the unpaired Nyquist index `−n/2`.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = -((self.n / 2) as i64);
        self.lattice_index(flat)[..self.dim].contains(&half)
    }

    /// Largest resolved frequency along one axis, `(n/2 − 1)·2π/L`.
    pub fn max_frequency(&self) -> f64 {
        (self.n / 2 - 1) as f64 * self.spacing()
    }

    /// Largest lattice `|ξ|` over non-Nyquist points.
    pub fn max_wavenumber(&self) -> f64 {
        self.max_frequency() * (self.dim as f64).sqrt()
    }

    pub fn with_modes(&self, n: usize) -> Result<Grid> {
        Grid::new(self.dim, n, self.length)
    }

    pub fn with_length(&self, length: f64) -> Result<Grid> {
        Grid::new(self.dim, self.n, length)
    }

    /// Factor `κ` with `u(x_j) = κ Σ_ξ û(ξ) e^{i x_j ξ}`.
    pub(crate) fn synthesis_scale(&self) -> f64 {
        (2.0 * PI).powf(self.dim as f64 / 2.0) / self.length.powi(self.dim as i32)
    }

    /// Physical coordinates of a flat position.
    pub fn position(&self, flat: usize) -> [f64; 2] {
        let dx = self.dx();
        match self.dim {
            1 => [flat as f64 * dx, 0.0],
            _ => [(flat / self.n) as f64 * dx, (flat % self.n) as f64 * dx],
        }
    }
}
