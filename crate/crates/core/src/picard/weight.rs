use num_complex::Complex64;

/// Below this `|Ωt|` the weight uses its Taylor expansion.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// `∫₀ᵗ e^{iΩt'} dt' = (e^{iΩt} − 1)/(iΩ)`.
///
/// Evaluated as `t·e^{iθ/2}·sin(θ/2)/(θ/2)` with `θ = Ωt`, which has no
/// cancellation; for `|θ| < 1e-8` the series `t(1 + iθ/2 − θ²/6)` is used.
pub fn oscillatory_weight(omega: f64, t: f64) -> Complex64 {
    let theta = omega * t;
    if theta.abs() < SERIES_THRESHOLD {
        return Complex64::new(t * (1.0 - theta * theta / 6.0), t * theta / 2.0);
    }
    let half = theta / 2.0;
    Complex64::from_polar(t * half.sin() / half, half)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    /// Composite Gauss–Legendre (5 points) on `[0, t]`.
    fn quadrature(omega: f64, t: f64, panels: usize) -> Complex64 {
        const X: [f64; 5] =
            [0.0, -0.5384693101056831, 0.5384693101056831, -0.906_179_845_938_664, 0.906_179_845_938_664];
        const W: [f64; 5] =
            [0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891, 0.2369268850561891];
        let h = t / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in X.iter().zip(W) {
                acc += Complex64::from_polar(w * h / 2.0, omega * (mid + x * h / 2.0));
            }
        }
        acc
    }

    #[test]
    fn zero_phase_is_t() {
        assert_eq!(oscillatory_weight(0.0, 0.37), Complex64::new(0.37, 0.0));
    }

    #[test]
    fn pi_matches_quadrature() {
        let w = oscillatory_weight(PI, 1.0);
        assert!((w.norm() - 2.0 / PI).abs() < 1e-15);
        assert!((w - quadrature(PI, 1.0, 64)).norm() < 1e-10);
        for (om, t) in [(3.7, 2.0), (-120.0, 0.5), (1e-3, 4.0)] {
            assert!((oscillatory_weight(om, t) - quadrature(om, t, 512)).norm() < 1e-10 * t);
        }
    }

    #[test]
    fn continuous_at_branch() {
        for t in [1e-3, 1.0, 50.0] {
            let omega = SERIES_THRESHOLD / t;
            let below = oscillatory_weight(omega * (1.0 - 1e-12), t);
            let above = oscillatory_weight(omega * (1.0 + 1e-12), t);
            assert!((below - above).norm() <= 1e-12 * t, "{}", (below - above).norm() / t);
        }
    }

    #[test]
    fn magnitude_bound() {
        for i in 0..200 {
            let omega = (i as f64 - 100.0) * 0.731;
            for t in [1e-6, 0.01, 0.3, 1.0, 7.0] {
                let m = oscillatory_weight(omega, t).norm();
                let cap = if omega == 0.0 { t } else { t.min(2.0 / omega.abs()) };
                assert!(m <= cap * (1.0 + 1e-15));
            }
        }
    }
}
