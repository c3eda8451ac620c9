use super::trajectory::Trajectory;
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Upsampling factor used for physical-space `L^q` with `q ≠ 2`.
const UPSAMPLE: usize = 4;

/// `‖u‖_{L^q_x}`. `q = 2` is the exact lattice sum; other exponents use the
/// 4× zero-padded physical grid (`q = ∞` takes the maximum there).
pub fn lq_norm(u: &SpectralField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::domain(format!("space exponent must be >= 1, got {q}")));
    }
    if q == 2.0 {
        return Ok(u.l2_norm());
    }
    let values = u.to_physical_upsampled(UPSAMPLE);
    if q.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.norm())));
    }
    let grid = u.grid();
    let cell = (grid.dx() / UPSAMPLE as f64).powi(grid.dim() as i32);
    let sum: f64 = values.iter().map(|v| v.norm().powf(q)).sum();
    Ok((sum * cell).powf(1.0 / q))
}

/// `‖u‖_{L^p_t L^q_x}` over the sampled window: trapezoid in time, `q` as in
/// [`lq_norm`]; `p = ∞` takes the maximum over samples.
pub fn mixed_norm(traj: &Trajectory, p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("time exponent must be >= 1, got {p}")));
    }
    let spatial = traj.states().iter().map(|u| lq_norm(u, q)).collect::<Result<Vec<_>>>()?;
    if p.is_infinite() {
        return Ok(spatial.iter().fold(0.0, |m: f64, &v| m.max(v)));
    }
    if spatial.len() < 2 {
        return Ok(0.0);
    }
    let h = traj.step();
    let powered: Vec<f64> = spatial.iter().map(|v| v.powf(p)).collect();
    let n = powered.len();
    let interior: f64 = powered[1..n - 1].iter().sum();
    let integral = h * (interior + 0.5 * (powered[0] + powered[n - 1]));
    Ok(integral.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::evolution::{free_propagate, EquationSpec};
    use crate::spectral::make_grid;

    fn packet(width: f64) -> SpectralField {
        let g = make_grid(1, 256, 64.0).unwrap();
        SpectralField::from_fn(g, |xi| Complex64::new((-(xi[0] - 2.0).powi(2) / (2.0 * width * width)).exp(), 0.0))
    }

    #[test]
    fn constant_in_time() {
        let u = packet(0.3);
        let spec = EquationSpec::cubic();
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
        let traj = Trajectory::new(times, vec![u.clone(); 21], spec).unwrap();
        for (p, q) in [(1.0, 2.0), (4.0, f64::INFINITY), (3.0, 4.0)] {
            let want = 2f64.powf(1.0 / p) * lq_norm(&u, q).unwrap();
            let got = mixed_norm(&traj, p, q).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "p={p} q={q}");
        }
    }

    #[test]
    fn sup_in_time_is_max_l2() {
        let u = packet(0.3);
        let states: Vec<_> = (0..5).map(|k| &u * (1.0 + k as f64)).collect();
        let traj = Trajectory::new((0..5).map(|k| k as f64).collect(), states, EquationSpec::cubic()).unwrap();
        assert!((mixed_norm(&traj, f64::INFINITY, 2.0).unwrap() - 5.0 * u.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn lq_matches_l2_and_bounds() {
        let u = packet(0.5);
        let l2 = u.l2_norm();
        let quad = {
            let values = u.to_physical_upsampled(4);
            (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * u.grid().dx() / 4.0).sqrt()
        };
        assert!((quad - l2).abs() < 1e-12 * l2);
        let linf = lq_norm(&u, f64::INFINITY).unwrap();
        let phys_max = u.to_physical().iter().fold(0.0f64, |m, v| m.max(v.norm()));
        assert!(linf >= phys_max);
        assert!(lq_norm(&u, 0.5).is_err());
    }

    #[test]
    fn free_packet_mixed_norm_is_refinement_stable() {
        let u = packet(0.4);
        let spec = EquationSpec::cubic();
        let run = |samples: usize| {
            let times: Vec<f64> = (0..=samples).map(|k| 2.0 * k as f64 / samples as f64).collect();
            let states = times.iter().map(|&t| free_propagate(&u, t)).collect();
            mixed_norm(&Trajectory::new(times, states, spec.clone()).unwrap(), 4.0, f64::INFINITY).unwrap()
        };
        let (coarse, fine) = (run(400), run(800));
        assert!((coarse - fine).abs() < 0.02 * fine, "{coarse} vs {fine}");
    }
}
