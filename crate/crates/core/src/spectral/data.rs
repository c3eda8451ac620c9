use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result};

/// `s_c = d/2 − 3/(m−1)`, the regularity left invariant by
/// `u ↦ λ^{−3/(m−1)} u(λ^{−4}t, λ^{−1}x)`.
pub fn critical_exponent(dim: usize, degree: usize) -> Result<f64> {
    if degree < 2 {
        return Err(Error::domain(format!("degree must be at least 2, got {degree}")));
    }
    if dim < 1 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(dim as f64 / 2.0 - 3.0 / (degree as f64 - 1.0))
}

/// Frequency-localised data for the norm-inflation constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxKind {
    /// `N^{−s+1/2}·1_{[N−1/N, N+1/N]}` in frequency (1-d only).
    Band,
    /// `N^{−s−d/2}·1_{[−N, N]^d}` in frequency.
    Cube,
}

/// Indicator data on a frequency band or cube, sampled on the lattice.
///
/// The band variant requires at least 8 lattice points across
/// `[N−1/N, N+1/N]`, which holds once `L ≥ 8πN`.
pub fn freq_box_data(kind: BoxKind, s: f64, scale: f64, grid: &Grid) -> Result<SpectralField> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::config(format!("frequency scale must be positive, got {scale}")));
    }
    let h = grid.spacing();
    match kind {
        BoxKind::Band => {
            if grid.dim() != 1 {
                return Err(Error::config("band data is one-dimensional"));
            }
            let (lo, hi) = (scale - 1.0 / scale, scale + 1.0 / scale);
            let slack = 1e-12 * hi;
            let first = ((lo - slack) / h).ceil() as i64;
            let last = ((hi + slack) / h).floor() as i64;
            let count = last - first + 1;
            if count < 8 {
                return Err(Error::config(format!(
                    "band [{lo}, {hi}] holds {count} lattice points; need >= 8, i.e. period L >= {:.6}",
                    8.0 * PI * scale
                )));
            }
            if hi >= grid.max_frequency() {
                return Err(Error::config(format!(
                    "band edge {hi} exceeds the largest resolved frequency {}",
                    grid.max_frequency()
                )));
            }
            let amp = Complex64::new(scale.powf(0.5 - s), 0.0);
            let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
            for k in first..=last {
                coeffs[grid.slot_of(k).expect("band checked against the lattice")] = amp;
            }
            SpectralField::new(*grid, coeffs)
        }
        BoxKind::Cube => {
            if scale >= grid.max_frequency() {
                return Err(Error::config(format!(
                    "cube half-width {scale} exceeds the largest resolved frequency {}",
                    grid.max_frequency()
                )));
            }
            if scale / h < 4.0 {
                return Err(Error::config(format!(
                    "cube [-{scale}, {scale}] holds fewer than 8 lattice points per axis; need L >= {:.6}",
                    8.0 * PI / scale
                )));
            }
            let amp = Complex64::new(scale.powf(-s - grid.dim() as f64 / 2.0), 0.0);
            let edge = scale * (1.0 + 1e-12);
            Ok(SpectralField::from_fn(*grid, |xi| {
                if xi[0].abs() <= edge && xi[1].abs() <= edge {
                    amp
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
        }
    }
}

/// `x ↦ λ^{−3/(m−1)} u0(x/λ)` on the box of period `λL`.
///
/// For dyadic `λ` the rescaled field lives on the same index lattice, so the
/// map is an exact reindexing: coefficients are multiplied by
/// `λ^{d−3/(m−1)}`.
pub fn scale_field(u0: &SpectralField, lambda: f64, degree: usize) -> Result<SpectralField> {
    if degree < 2 {
        return Err(Error::domain(format!("degree must be at least 2, got {degree}")));
    }
    let k = lambda.log2().round();
    if !(lambda > 0.0) || 2f64.powi(k as i32) != lambda {
        return Err(Error::domain(format!("scale factor must be a power of two, got {lambda}")));
    }
    let grid = u0.grid().with_length(u0.grid().length() * lambda)?;
    let d = grid.dim() as f64;
    let factor = lambda.powf(d - 3.0 / (degree as f64 - 1.0));
    SpectralField::new(grid, u0.coeffs().iter().map(|c| c * factor).collect())
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::{dyadic::dominant_level, make_grid, sobolev_norm, DyadicBank};

    #[test]
    fn critical_exponents() {
        assert_eq!(critical_exponent(1, 4).unwrap(), -0.5);
        assert_eq!(critical_exponent(1, 3).unwrap(), -1.0);
        assert_eq!(critical_exponent(2, 3).unwrap(), -0.5);
        assert!(critical_exponent(1, 1).is_err());
    }

    #[test]
    fn band_amplitude() {
        let g = make_grid(1, 8192, 8.0 * PI * 16.0 * 1.1).unwrap();
        let f = freq_box_data(BoxKind::Band, -0.5, 16.0, &g).unwrap();
        let nonzero: Vec<_> = f.coeffs().iter().filter(|c| c.norm() > 0.0).collect();
        assert!(nonzero.len() >= 8);
        assert!(nonzero.iter().all(|c| (c.re - 16.0).abs() < 1e-12 && c.im == 0.0));
    }

    #[test]
    fn unresolved_band_reports_minimal_period() {
        let g = make_grid(1, 2048, 100.0).unwrap();
        match freq_box_data(BoxKind::Band, 0.0, 16.0, &g) {
            Err(Error::Config(msg)) => assert!(msg.contains("402.12"), "{msg}"),
            other => panic!("expected configuration error, got {other:?}"),
        }
        let g2 = make_grid(2, 64, 100.0).unwrap();
        assert!(freq_box_data(BoxKind::Band, 0.0, 1.0, &g2).is_err());
    }

    /// Continuum `‖·‖_{H^s}` of an indicator with amplitude `a` on `[lo, hi]`,
    /// by a dense midpoint rule.
    fn continuum_band_norm(a: f64, lo: f64, hi: f64, s: f64) -> f64 {
        let n = 200_000;
        let h = (hi - lo) / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * h;
                (1.0 + x * x).powf(s)
            })
            .sum();
        a * (sum * h).sqrt()
    }

    #[test]
    fn band_norm_is_scale_independent_and_matches_continuum() {
        let s = -0.5;
        let mut norms = Vec::new();
        for scale in [16.0, 32.0, 64.0] {
            let n = (scale * scale * 8.0 * 1.25) as usize;
            let g = make_grid(1, n.next_power_of_two() * 2, 8.0 * PI * scale * 1.25).unwrap();
            let f = freq_box_data(BoxKind::Band, s, scale, &g).unwrap();
            let discrete = sobolev_norm(&f, s, false).unwrap();
            let cont = continuum_band_norm(scale.powf(0.5 - s), scale - 1.0 / scale, scale + 1.0 / scale, s);
            assert!(discrete / cont < 2.0 && cont / discrete < 2.0, "N={scale}: {discrete} vs {cont}");
            norms.push(discrete);
        }
        let (lo, hi) = norms.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi / lo < 2.0, "{norms:?}");
    }

    #[test]
    fn cube_norm_is_scale_independent_above_minus_half() {
        // ‖g_N‖_{H^s} ~ 1 needs s > −d/2; the low frequencies dominate below that.
        let s = -0.25;
        let norm = |scale: f64| {
            let g = make_grid(1, 1024, 16.0 * PI).unwrap();
            sobolev_norm(&freq_box_data(BoxKind::Cube, s, scale, &g).unwrap(), s, false).unwrap()
        };
        let (a, b) = (norm(8.0), norm(16.0));
        assert!(a / b < 2.0 && b / a < 2.0, "{a} {b}");
    }

    #[test]
    fn cube_norm_at_critical_regularity_grows() {
        // d = 1, m = 2: s_c = −5/2 < −d/2, so ‖g_N‖ ∝ N^{−s−1/2} = N².
        let s = critical_exponent(1, 2).unwrap();
        let norm = |scale: f64| {
            let g = make_grid(1, 1024, 16.0 * PI).unwrap();
            sobolev_norm(&freq_box_data(BoxKind::Cube, s, scale, &g).unwrap(), s, false).unwrap()
        };
        let ratio = norm(16.0) / norm(8.0);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }

    fn random_mean_zero(grid: Grid, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralField::from_fn(grid, |xi| {
            let k = xi[0].hypot(xi[1]);
            if k == 0.0 || k > 6.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
    }

    #[test]
    fn scaling_preserves_critical_norm() {
        for (d, m) in [(1, 4), (1, 3), (2, 3), (1, 2)] {
            let g = make_grid(d, 32, 2.0 * PI).unwrap();
            let u = random_mean_zero(g, 11);
            let sc = critical_exponent(d, m).unwrap();
            assert_eq!(scale_field(&u, 1.0, m).unwrap(), u);
            for lambda in [2.0, 4.0, 0.5] {
                let v = scale_field(&u, lambda, m).unwrap();
                let (a, b) = (sobolev_norm(&u, sc, true).unwrap(), sobolev_norm(&v, sc, true).unwrap());
                assert!((a - b).abs() <= 1e-12 * a, "d={d} m={m} λ={lambda}");
                let l2 = v.l2_norm() / u.l2_norm();
                assert!((l2 - lambda.powf(sc)).abs() < 1e-12 * l2);
            }
        }
        assert!(scale_field(&random_mean_zero(make_grid(1, 8, 1.0).unwrap(), 1), 3.0, 4).is_err());
    }

    #[test]
    fn scaling_shifts_dominant_level() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let u = random_mean_zero(g, 5);
        let bank = DyadicBank::with_exponents(-6, 8).unwrap();
        let sc = critical_exponent(1, 4).unwrap();
        let base = dominant_level(&u, sc, &bank);
        for lambda in [2.0, 4.0] {
            let v = scale_field(&u, lambda, 4).unwrap();
            assert_eq!(dominant_level(&v, sc, &bank), base / lambda);
        }
    }
}
