use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft;
use super::grid::Grid;
use crate::{Error, Result};

/// A band-limited complex field, stored by its Fourier coefficients.
///
/// Nyquist coefficients are always zero; every constructor enforces it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Wraps coefficients in FFT storage order, zeroing the Nyquist modes.
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Grid(format!("expected {} coefficients, got {}", grid.len(), coeffs.len())));
        }
        let mut field = SpectralField { grid, coeffs };
        field.clear_nyquist();
        Ok(field)
    }

    /// Coefficient `f(ξ)` at every lattice frequency.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 2]) -> Complex64) -> Self {
        let coeffs = (0..grid.len()).map(|i| f(grid.wavevector(i))).collect();
        let mut field = SpectralField { grid, coeffs };
        field.clear_nyquist();
        field
    }

    /// Transforms samples `u(x_j)`, `x_j = j·L/n`, into a field.
    pub fn from_physical(grid: Grid, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        let mut coeffs = values.to_vec();
        fft::transform(&mut coeffs, grid.n(), grid.dim(), FftDirection::Forward);
        let scale = 1.0 / (grid.synthesis_scale() * grid.len() as f64);
        coeffs.iter_mut().for_each(|c| *c *= scale);
        SpectralField::new(grid, coeffs)
    }

    /// The plane wave `a·e^{ik·x·2π/L}` with physical amplitude `a`.
    pub fn plane_wave(grid: Grid, ks: [i64; 2], amplitude: Complex64) -> Result<Self> {
        let flat = grid
            .flat_index(ks)
            .filter(|&i| !grid.is_nyquist(i))
            .ok_or_else(|| Error::Grid(format!("mode {ks:?} is not a resolved lattice point")))?;
        let mut field = SpectralField::zeros(grid);
        field.coeffs[flat] = amplitude / grid.synthesis_scale();
        Ok(field)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at signed lattice indices; zero off the lattice.
    pub fn mode(&self, ks: [i64; 2]) -> Complex64 {
        self.grid.flat_index(ks).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Physical samples on the grid points.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut values = self.coeffs.clone();
        fft::transform(&mut values, self.grid.n(), self.grid.dim(), FftDirection::Inverse);
        let scale = self.grid.synthesis_scale();
        values.iter_mut().for_each(|v| *v *= scale);
        values
    }

    /// Physical samples after zero-padded upsampling by `factor` per axis.
    pub fn to_physical_upsampled(&self, factor: usize) -> Vec<Complex64> {
        let grid = self.grid.with_modes(self.grid.n() * factor.max(1)).expect("upsampled grid inherits a valid shape");
        self.resample(grid).to_physical()
    }

    /// Copies coefficients onto another lattice with the same period,
    /// truncating or zero-padding by signed index.
    pub fn resample(&self, grid: Grid) -> SpectralField {
        debug_assert_eq!(grid.length(), self.grid.length());
        debug_assert_eq!(grid.dim(), self.grid.dim());
        let mut out = SpectralField::zeros(grid);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some(j) = grid.flat_index(self.grid.lattice_index(i)) {
                out.coeffs[j] = *c;
            }
        }
        out.clear_nyquist();
        out
    }

    /// Applies `f(ξ, û(ξ))` pointwise in frequency.
    pub fn map_modes(&self, f: impl Fn([f64; 2], Complex64) -> Complex64) -> SpectralField {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| f(self.grid.wavevector(i), c)).collect();
        let mut out = SpectralField { grid: self.grid, coeffs };
        out.clear_nyquist();
        out
    }

    /// Multiplies by a precomputed symbol in storage order.
    pub fn apply_symbol(&self, symbol: &[Complex64]) -> SpectralField {
        debug_assert_eq!(symbol.len(), self.coeffs.len());
        let coeffs = self.coeffs.iter().zip(symbol).map(|(c, m)| c * m).collect();
        SpectralField { grid: self.grid, coeffs }
    }

    pub fn scale(&self, factor: Complex64) -> SpectralField {
        SpectralField { grid: self.grid, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// `self + a·other`; grids must agree.
    pub fn axpy(&self, a: Complex64, other: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + a * y).collect();
        SpectralField { grid: self.grid, coeffs }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.quadrature_weight()).sqrt()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn clear_nyquist(&mut self) {
        let half = self.grid.n() / 2;
        match self.grid.dim() {
            1 => self.coeffs[half] = Complex64::new(0.0, 0.0),
            _ => {
                let n = self.grid.n();
                for k in 0..n {
                    self.coeffs[half * n + k] = Complex64::new(0.0, 0.0);
                    self.coeffs[k * n + half] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(Complex64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// `(Σ_ξ w(ξ)|û(ξ)|² (2π/L)^d)^{1/2}` with `w = |ξ|^{2s}` (homogeneous) or
/// `(1+|ξ|²)^s`.
///
/// The homogeneous norm with `s < 0` skips the zero mode, which must then be
/// negligible (below `1e-13` of the largest coefficient).
pub fn sobolev_norm(u: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    let grid = u.grid();
    let coeffs = u.coeffs();
    if homogeneous && s < 0.0 {
        let zero = coeffs[0].norm();
        if zero > 1e-13 * u.max_coeff() {
            return Err(Error::domain(format!(
                "homogeneous norm with s = {s} needs a vanishing zero mode (|û(0)| = {zero:e})"
            )));
        }
    }
    let mut acc = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let mag = c.norm_sqr();
        if mag == 0.0 {
            continue;
        }
        let k = grid.wavenumber(i);
        let w = if homogeneous {
            if k == 0.0 {
                if s == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                k.powf(2.0 * s)
            }
        } else {
            (1.0 + k * k).powf(s)
        };
        acc += w * mag;
    }
    Ok((acc * grid.quadrature_weight()).sqrt())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::make_grid;

    fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> SpectralField {
        SpectralField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn single_mode_h1() {
        for (d, l) in [(1, 2.0 * PI), (1, 8.0 * PI), (2, 4.0 * PI)] {
            let g = make_grid(d, 32, l).unwrap();
            let per_unit = (l / (2.0 * PI)).round() as i64;
            let mut u = SpectralField::zeros(g);
            let flat = g.flat_index([2 * per_unit, 0]).unwrap();
            let mut c = u.clone().into_coeffs();
            c[flat] = Complex64::new(1.0, 0.0);
            u = SpectralField::new(g, c).unwrap();
            let expected = 2.0 * g.spacing().powf(d as f64 / 2.0);
            let got = sobolev_norm(&u, 1.0, true).unwrap();
            assert!((got - expected).abs() < 1e-14, "d={d}: {got} vs {expected}");
        }
    }

    #[test]
    fn parseval_against_physical_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let d = 1 + trial % 2;
            let g = make_grid(d, 16, 3.0 + trial as f64).unwrap();
            let u = random_field(g, &mut rng);
            let phys = u.to_physical();
            let quad = (phys.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.dx().powi(d as i32)).sqrt();
            let spec = sobolev_norm(&u, 0.0, false).unwrap();
            assert!((quad - spec).abs() <= 1e-12 * spec, "{quad} vs {spec}");
            assert_eq!(spec, sobolev_norm(&u, 0.0, true).unwrap());
        }
    }

    #[test]
    fn round_trip_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [1, 2] {
            let g = make_grid(d, 32, 10.0).unwrap();
            let u = random_field(g, &mut rng);
            let back = SpectralField::from_physical(g, &u.to_physical()).unwrap();
            let err = (&back - &u).l2_norm() / u.l2_norm();
            assert!(err < 1e-12, "d={d}: {err}");
        }
    }

    #[test]
    fn plane_wave_has_physical_amplitude() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let a = Complex64::new(0.3, -0.2);
        let u = SpectralField::plane_wave(g, [3, 0], a).unwrap();
        for (j, v) in u.to_physical().iter().enumerate() {
            let x = g.position(j)[0];
            let want = a * Complex64::from_polar(1.0, 3.0 * x);
            assert!((v - want).norm() < 1e-14);
        }
        assert!(SpectralField::plane_wave(g, [-8, 0], a).is_err());
    }

    #[test]
    fn nyquist_is_zeroed() {
        let g = make_grid(2, 8, 1.0).unwrap();
        let u = SpectralField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        for i in 0..g.len() {
            assert_eq!(u.coeffs()[i] == Complex64::new(0.0, 0.0), g.is_nyquist(i));
        }
    }

    #[test]
    fn homogeneous_negative_needs_mean_zero() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let u = SpectralField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(sobolev_norm(&u, -0.5, true), Err(Error::Domain(_))));
        assert!(sobolev_norm(&u, -0.5, false).is_ok());
        let v = u.map_modes(|xi, c| if xi[0] == 0.0 { Complex64::new(0.0, 0.0) } else { c });
        assert!(sobolev_norm(&v, -0.5, true).is_ok());
    }

    #[test]
    fn upsampling_interpolates() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = SpectralField::plane_wave(g, [2, 0], Complex64::new(1.0, 0.0)).unwrap();
        let fine = u.to_physical_upsampled(4);
        assert_eq!(fine.len(), 64);
        for (j, v) in fine.iter().enumerate() {
            let x = j as f64 * 2.0 * PI / 64.0;
            assert!((v - Complex64::from_polar(1.0, 2.0 * x)).norm() < 1e-13);
        }
    }
}
