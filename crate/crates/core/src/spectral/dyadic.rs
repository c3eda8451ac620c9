use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result};

/// Even cutoff with `χ = 1` on `[−1, 1]` and `χ = 0` outside `(−2, 2)`.
///
/// The transition on `1 < |t| < 2` is the `C^∞` smooth step built from
/// `e^{−1/x}`.
pub fn chi(t: f64) -> f64 {
    let r = t.abs() - 1.0;
    if r <= 0.0 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        let a = bump(1.0 - r);
        a / (a + bump(r))
    }
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// `ψ(t) = χ(t) − χ(2t)`, supported in `1/2 ≤ |t| ≤ 2`.
pub fn psi(t: f64) -> f64 {
    chi(t) - chi(2.0 * t)
}

/// The dyadic levels `N = 2^j`, `j ∈ [min_exp, max_exp]`, of a
/// Littlewood–Paley decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicBank {
    min_exp: i32,
    max_exp: i32,
}

impl DyadicBank {
    pub fn with_exponents(min_exp: i32, max_exp: i32) -> Result<Self> {
        if min_exp > max_exp {
            return Err(Error::domain(format!("empty dyadic range 2^{min_exp}..2^{max_exp}")));
        }
        Ok(DyadicBank { min_exp, max_exp })
    }

    /// Smallest bank whose levels sum to one on every nonzero lattice
    /// frequency of `grid`.
    pub fn for_grid(grid: &Grid) -> Self {
        let lo = grid.spacing().log2().floor() as i32;
        let hi = grid.max_wavenumber().log2().ceil() as i32;
        DyadicBank { min_exp: lo, max_exp: hi.max(lo) }
    }

    pub fn levels(&self) -> impl Iterator<Item = f64> {
        (self.min_exp..=self.max_exp).map(|j| 2f64.powi(j))
    }

    pub fn len(&self) -> usize {
        (self.max_exp - self.min_exp + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, level: f64) -> bool {
        if !(level > 0.0) {
            return false;
        }
        let j = level.log2().round();
        2f64.powi(j as i32) == level && (self.min_exp as f64..=self.max_exp as f64).contains(&j)
    }

    /// `ψ_N(t) = ψ(t/N)`.
    pub fn weight(&self, level: f64, t: f64) -> f64 {
        psi(t / level)
    }
}

/// `P_N u`: multiplies `û(ξ)` by `ψ_N(|ξ|)`. Levels outside the bank give zero.
pub fn dyadic_project(u: &SpectralField, level: f64, bank: &DyadicBank) -> SpectralField {
    if !bank.contains(level) {
        return SpectralField::zeros(*u.grid());
    }
    u.map_modes(|xi, c| c * psi(xi[0].hypot(xi[1]) / level))
}

/// `argmax_N N^s ‖P_N u‖_{L²}`.
#[cfg(test)]
pub(crate) fn dominant_level(u: &SpectralField, s: f64, bank: &DyadicBank) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for level in bank.levels() {
        let v = level.powf(s) * dyadic_project(u, level, bank).l2_norm();
        if v > best.0 {
            best = (v, level);
        }
    }
    best.1
}
