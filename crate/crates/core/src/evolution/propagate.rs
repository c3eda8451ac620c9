use num_complex::Complex64;

use crate::spectral::{Grid, SpectralField};

/// Multiplier `e^{-it|ξ|⁴}` in storage order.
pub fn propagator_symbol(grid: &Grid, t: f64) -> Vec<Complex64> {
    (0..grid.len())
        .map(|i| {
            let [a, b] = grid.wavevector(i);
            let k2 = a * a + b * b;
            Complex64::from_polar(1.0, -t * k2 * k2)
        })
        .collect()
}

/// `S(t)u`: the free fourth-order Schrödinger evolution.
pub fn free_propagate(u: &SpectralField, t: f64) -> SpectralField {
    if t == 0.0 {
        return u.clone();
    }
    u.apply_symbol(&propagator_symbol(u.grid(), t))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::{make_grid, sobolev_norm};

    fn random(grid: Grid, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralField::from_fn(grid, |xi| {
            if xi == [0.0, 0.0] {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
    }

    #[test]
    fn identity_at_zero() {
        let u = random(make_grid(1, 16, 2.0 * PI).unwrap(), 1);
        assert_eq!(free_propagate(&u, 0.0), u);
    }

    #[test]
    fn single_mode_phase() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = SpectralField::plane_wave(g, [1, 0], Complex64::new(1.0, 0.0)).unwrap();
        let v = free_propagate(&u, PI);
        assert!((v.mode([1, 0]) + u.mode([1, 0])).norm() < 1e-15);
    }

    #[test]
    fn unitary_on_every_sobolev_scale() {
        for (d, seed) in [(1, 2), (2, 3)] {
            let u = random(make_grid(d, 16, 2.0 * PI).unwrap(), seed);
            for t in [0.1, 1.0, 17.3] {
                let v = free_propagate(&u, t);
                for s in [-1.0, -0.5, 0.0, 1.5] {
                    let (a, b) = (sobolev_norm(&u, s, true).unwrap(), sobolev_norm(&v, s, true).unwrap());
                    assert!((a - b).abs() <= 1e-12 * a);
                }
            }
        }
    }

    #[test]
    fn group_law() {
        for seed in 0..10 {
            // Phases t|ξ|⁴ stay O(100) here, so rounding in the exponent is negligible.
            let u = random(make_grid(1 + seed as usize % 2, 16, 8.0 * PI).unwrap(), seed);
            let (t1, t2) = (0.37 + seed as f64 * 0.1, 1.21);
            let a = free_propagate(&free_propagate(&u, t1), t2);
            let b = free_propagate(&u, t1 + t2);
            assert!((&a - &b).l2_norm() <= 1e-12 * u.l2_norm());
        }
    }
}
