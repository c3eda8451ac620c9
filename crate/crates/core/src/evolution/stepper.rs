use num_complex::Complex64;

use super::equation::EquationSpec;
use super::nonlinear::Nonlinearity;
use super::propagate::propagator_symbol;
use super::trajectory::Trajectory;
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Abort threshold on `‖u(t)‖_{L²}/‖u₀‖_{L²}`.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Lawson integrating-factor RK4 on `w = S(−t)u`.
    #[default]
    IntegratingFactorRk4,
    /// Strang splitting: half linear step, RK4 on the nonlinear flow, half
    /// linear step. Second order; kept as a cross-check.
    Strang,
}

/// A fixed-step integrator for one equation on one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    nonlinearity: Nonlinearity,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    scheme: Scheme,
}

impl Stepper {
    pub fn new(u: &SpectralField, spec: &EquationSpec, dt: f64, scheme: Scheme) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if u.grid().dim() != spec.dim() {
            return Err(Error::domain("field and equation disagree on dimension"));
        }
        let grid = *u.grid();
        Ok(Stepper {
            nonlinearity: Nonlinearity::new(grid, spec),
            dt,
            half: propagator_symbol(&grid, dt / 2.0),
            full: propagator_symbol(&grid, dt),
            scheme,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `−i∂P_m(u, ū)`, the right-hand side of the twisted system.
    fn rhs(&self, u: &SpectralField) -> SpectralField {
        self.nonlinearity.evaluate(u).scale(Complex64::new(0.0, -1.0))
    }

    /// Advances one step; `index` only labels overflow errors.
    pub fn step(&self, u: &SpectralField, index: usize) -> Result<SpectralField> {
        let next = match self.scheme {
            Scheme::IntegratingFactorRk4 => self.lawson(u),
            Scheme::Strang => {
                let mid = self.rk4_nonlinear(&u.apply_symbol(&self.half));
                mid.apply_symbol(&self.half)
            }
        };
        if !next.is_finite() {
            return Err(Error::Overflow { step: index, reason: "non-finite coefficient".into() });
        }
        Ok(next)
    }

    fn lawson(&self, u: &SpectralField) -> SpectralField {
        let h = self.dt;
        let c = |x: f64| Complex64::new(x, 0.0);
        let k1 = self.rhs(u);
        let eu = u.apply_symbol(&self.half);
        let ek1 = k1.apply_symbol(&self.half);
        let k2 = self.rhs(&eu.axpy(c(h / 2.0), &ek1));
        let k3 = self.rhs(&eu.axpy(c(h / 2.0), &k2));
        let k4 = self.rhs(&u.apply_symbol(&self.full).axpy(c(h), &k3.apply_symbol(&self.half)));
        let mid = (&k2 + &k3).apply_symbol(&self.half);
        u.axpy(c(h / 6.0), &k1).apply_symbol(&self.full).axpy(c(h / 3.0), &mid).axpy(c(h / 6.0), &k4)
    }

    fn rk4_nonlinear(&self, u: &SpectralField) -> SpectralField {
        let h = self.dt;
        let c = |x: f64| Complex64::new(x, 0.0);
        let k1 = self.rhs(u);
        let k2 = self.rhs(&u.axpy(c(h / 2.0), &k1));
        let k3 = self.rhs(&u.axpy(c(h / 2.0), &k2));
        let k4 = self.rhs(&u.axpy(c(h), &k3));
        u.axpy(c(h / 6.0), &k1).axpy(c(h / 3.0), &k2).axpy(c(h / 3.0), &k3).axpy(c(h / 6.0), &k4)
    }
}

/// One integrating-factor RK4 step of size `dt`.
pub fn step_integrate(u: &SpectralField, spec: &EquationSpec, dt: f64) -> Result<SpectralField> {
    Stepper::new(u, spec, dt, Scheme::IntegratingFactorRk4)?.step(u, 0)
}

/// Integrates on `[0, T]` with integrating-factor RK4, keeping every
/// `stride`-th state. `T/dt` must be an integer.
pub fn evolve(u0: &SpectralField, spec: &EquationSpec, horizon: f64, dt: f64, stride: usize) -> Result<Trajectory> {
    evolve_with(u0, spec, horizon, dt, stride, Scheme::IntegratingFactorRk4)
}

pub fn evolve_with(
    u0: &SpectralField,
    spec: &EquationSpec,
    horizon: f64,
    dt: f64,
    stride: usize,
    scheme: Scheme,
) -> Result<Trajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
    }
    if stride == 0 {
        return Err(Error::domain("sampling stride must be at least 1"));
    }
    let stepper = Stepper::new(u0, spec, dt, scheme)?;
    let steps = (horizon / dt).round();
    if steps < 1.0 || (steps * dt - horizon).abs() > 1e-9 * horizon {
        return Err(Error::domain(format!("horizon {horizon} is not a whole number of steps {dt}")));
    }
    let steps = steps as usize;
    let initial = u0.l2_norm();
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut u = u0.clone();
    for k in 1..=steps {
        u = stepper.step(&u, k)?;
        if initial > 0.0 {
            let growth = u.l2_norm() / initial;
            if growth > BLOW_UP_FACTOR {
                return Err(Error::BlowUp { step: k, factor: growth });
            }
        }
        if k % stride == 0 {
            times.push(k as f64 * dt);
            states.push(u.clone());
        }
    }
    Trajectory::new(times, states, spec.clone())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::evolution::free_propagate;
    use crate::spectral::{make_grid, Grid};

    fn smooth(grid: Grid, amp: f64) -> SpectralField {
        SpectralField::from_fn(grid, |xi| {
            let k = xi[0];
            if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(amp * (-(k - 1.5) * (k - 1.5)).exp(), amp * 0.3 * (-(k + 1.0) * (k + 1.0)).exp())
            }
        })
    }

    #[test]
    fn zero_coefficients_reduce_to_free_flow() {
        let g = make_grid(1, 32, 2.0 * PI).unwrap();
        let u = smooth(g, 1.0);
        let spec = EquationSpec::cubic().scaled(0.0);
        let v = step_integrate(&u, &spec, 0.01).unwrap();
        assert!((&v - &free_propagate(&u, 0.01)).max_coeff() < 1e-15);
        let traj = evolve(&u, &spec, 1.0, 0.01, 10).unwrap();
        for (t, s) in traj.times().iter().zip(traj.states()) {
            assert!((s - &free_propagate(&u, *t)).l2_norm() <= 1e-12 * u.l2_norm());
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let traj = evolve(&SpectralField::zeros(g), &EquationSpec::quartic_conjugate(), 0.5, 0.05, 1).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.states().iter().all(|s| s.max_coeff() == 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = smooth(g, 0.1);
        let spec = EquationSpec::cubic();
        assert!(evolve(&u, &spec, 1.0, 0.3, 1).is_err());
        assert!(evolve(&u, &spec, 1.0, 0.1, 0).is_err());
        assert!(evolve(&u, &spec, -1.0, 0.1, 1).is_err());
        assert!(step_integrate(&u, &spec, 0.0).is_err());
    }

    #[test]
    fn blow_up_guard_and_overflow() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = smooth(g, 50.0);
        let spec = EquationSpec::monomial(1, 3, 2, crate::evolution::Derivative::Modulus).unwrap().scaled(1e3);
        match evolve(&u, &spec, 10.0, 0.1, 1) {
            Err(Error::BlowUp { .. }) | Err(Error::Overflow { .. }) => {}
            other => panic!("expected the run to abort, got {:?}", other.map(|t| t.len())),
        }
    }

    /// Self-convergence estimate `log₂(|u_h − u_{h/2}| / |u_{h/2} − u_{h/4}|)`.
    /// The steps need `dt·max|ξ|⁴` well below one to be asymptotic.
    fn observed_order(scheme: Scheme) -> f64 {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u0 = smooth(g, 0.6);
        let spec = EquationSpec::cubic();
        let run = |dt: f64| evolve_with(&u0, &spec, 0.08, dt, 1, scheme).unwrap().last().clone();
        let h = 0.08 / 512.0;
        let (a, b, c) = (run(h), run(h / 2.0), run(h / 4.0));
        ((&a - &b).l2_norm() / (&b - &c).l2_norm()).log2()
    }

    #[test]
    fn lawson_is_fourth_order() {
        let p = observed_order(Scheme::IntegratingFactorRk4);
        assert!((p - 4.0).abs() < 0.3, "order {p}");
    }

    #[test]
    fn strang_is_second_order() {
        let p = observed_order(Scheme::Strang);
        assert!((p - 2.0).abs() < 0.3, "order {p}");
    }

    #[test]
    fn half_steps_agree_to_fifth_order() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = smooth(g, 0.6);
        let spec = EquationSpec::cubic();
        let defect = |dt: f64| {
            let one = step_integrate(&u, &spec, dt).unwrap();
            let two = step_integrate(&step_integrate(&u, &spec, dt / 2.0).unwrap(), &spec, dt / 2.0).unwrap();
            (&one - &two).l2_norm()
        };
        let ratio = (defect(2e-4) / defect(1e-4)).log2();
        assert!((ratio - 5.0).abs() < 0.4, "local order {ratio}");
    }
}
