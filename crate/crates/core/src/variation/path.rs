use crate::evolution::{free_propagate, Trajectory};
use crate::spectral::{dyadic_project, DyadicBank, SpectralField};
use crate::{Error, Result};

/// Samples `v(t_k)` of a path `t ↦ v(t) ∈ L²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    times: Vec<f64>,
    values: Vec<SpectralField>,
}

impl PathSample {
    pub fn new(times: Vec<f64>, values: Vec<SpectralField>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::domain(format!(
                "path needs at least two samples with matching times ({}) and values ({})",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("sample times must be strictly increasing"));
        }
        let grid = *values[0].grid();
        if values.iter().any(|v| *v.grid() != grid) {
            return Err(Error::domain("path values must share one grid"));
        }
        Ok(PathSample { times, values })
    }

    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        Self::new(traj.times().to_vec(), traj.states().to_vec())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[SpectralField] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// A step function `Σ_k 1_{[t_k, t_{k+1})} φ_k`, zero from `t_K` on.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    partition: Vec<f64>,
    blocks: Vec<SpectralField>,
    final_jump: bool,
}

impl StepPath {
    /// `partition` has one more point than `blocks`; its last point may be
    /// `+∞`. `final_jump` records the convention `v(t_K) := 0`.
    pub fn new(partition: Vec<f64>, blocks: Vec<SpectralField>, final_jump: bool) -> Result<Self> {
        if blocks.is_empty() || partition.len() != blocks.len() + 1 {
            return Err(Error::domain(format!(
                "{} partition points for {} blocks; need one more point than blocks",
                partition.len(),
                blocks.len()
            )));
        }
        if partition[0].is_nan() || partition.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("partition must be strictly increasing"));
        }
        if partition[..blocks.len()].iter().any(|t| !t.is_finite()) {
            return Err(Error::domain("only the last partition point may be infinite"));
        }
        let grid = *blocks[0].grid();
        if blocks.iter().any(|b| *b.grid() != grid) {
            return Err(Error::domain("blocks must share one grid"));
        }
        Ok(StepPath { partition, blocks, final_jump })
    }

    pub fn partition(&self) -> &[f64] {
        &self.partition
    }

    pub fn blocks(&self) -> &[SpectralField] {
        &self.blocks
    }

    pub fn final_jump(&self) -> bool {
        self.final_jump
    }

    /// `v(t)`, or `None` outside `[t_0, t_K)`.
    pub fn value_at(&self, t: f64) -> Option<&SpectralField> {
        if t < self.partition[0] || t >= self.partition[self.blocks.len()] {
            return None;
        }
        let k = self.partition.partition_point(|&p| p <= t) - 1;
        Some(&self.blocks[k])
    }

    /// The path sampled at `t_0, …, t_{K−1}`. A one-block path is sampled
    /// twice inside its only interval.
    pub fn to_sample(&self) -> PathSample {
        let mut times = self.partition[..self.blocks.len()].to_vec();
        let mut values = self.blocks.clone();
        if self.blocks.len() == 1 {
            let end = self.partition[1];
            times.push(if end.is_finite() { (self.partition[0] + end) / 2.0 } else { self.partition[0] + 1.0 });
            values.push(self.blocks[0].clone());
        }
        PathSample { times, values }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must lie in [1, ∞), got {p}")));
    }
    Ok(())
}

/// `max` over increasing index chains of `Σ dist(i, j)^p`, by the `O(n²)`
/// recursion `best(j) = max(0, max_{i<j} best(i) + dist(i, j)^p)`.
///
/// Floating-point addition is monotone, so this returns bit-for-bit the
/// largest left-to-right partition sum.
pub fn variation_sum(n: usize, p: f64, dist: impl Fn(usize, usize) -> f64) -> f64 {
    let mut best = vec![0.0f64; n];
    let mut top = 0.0f64;
    for j in 1..n {
        let mut b = 0.0f64;
        for (i, bi) in best[..j].iter().enumerate() {
            b = b.max(bi + dist(i, j).powf(p));
        }
        best[j] = b;
        top = top.max(b);
    }
    top
}

/// `sup_{t_k} (Σ ‖v(t_k) − v(t_{k−1})‖^p_{L²})^{1/p}` over sub-partitions of
/// the sample times. With `with_endpoint_jump` a terminal value `0` is
/// appended after the last sample.
pub fn p_variation(path: &PathSample, p: f64, with_endpoint_jump: bool) -> Result<f64> {
    check_exponent(p)?;
    let vals = path.values();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("path values must be finite"));
    }
    let n = vals.len();
    let norms: Vec<f64> = vals.iter().map(SpectralField::l2_norm).collect();
    let total = n + usize::from(with_endpoint_jump);
    let weight = vals[0].grid().quadrature_weight();
    let dist = |i: usize, j: usize| {
        let (a, b) = (vals[i].coeffs(), vals[j].coeffs());
        (a.iter().zip(b).map(|(x, y)| (y - x).norm_sqr()).sum::<f64>() * weight).sqrt()
    };
    let sum = variation_sum(total, p, |i, j| if j == n { norms[i] } else { dist(i, j) });
    Ok(sum.powf(1.0 / p))
}

/// [`p_variation`] of a real-valued path.
pub fn p_variation_scalar(values: &[f64], p: f64, with_endpoint_jump: bool) -> Result<f64> {
    check_exponent(p)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("path values must be finite"));
    }
    let n = values.len();
    let total = n + usize::from(with_endpoint_jump);
    let sum = variation_sum(total, p, |i, j| if j == n { values[i].abs() } else { (values[j] - values[i]).abs() });
    Ok(sum.powf(1.0 / p))
}

/// A `U^p` atom: the blocks rescaled so that `Σ_k ‖φ_k‖^p_{L²} = 1`. The
/// terminal convention `v(t_K) := 0` is switched on.
pub fn make_up_atom(partition: &[f64], blocks: &[SpectralField], p: f64) -> Result<StepPath> {
    check_exponent(p)?;
    let mass: f64 = blocks.iter().map(|b| b.l2_norm().powf(p)).sum();
    if !(mass > 0.0) {
        return Err(Error::domain("atom blocks must not all vanish"));
    }
    let scale = mass.powf(-1.0 / p);
    StepPath::new(partition.to_vec(), blocks.iter().map(|b| b * scale).collect(), true)
}

/// `‖v‖_{V^p_S} = ‖S(−·)v‖_{V^p}` with the terminal jump to zero.
pub fn vs_norm(path: &PathSample, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let twisted: Vec<SpectralField> =
        path.times().iter().zip(path.values()).map(|(&t, v)| free_propagate(v, -t)).collect();
    p_variation(&PathSample { times: path.times.clone(), values: twisted }, p, true)
}

/// `(Σ_N N^{2s} ‖P_N u‖²_{V²_S})^{1/2}` over the levels of `bank`.
pub fn y_norm(traj: &Trajectory, s: f64, bank: &DyadicBank) -> Result<f64> {
    let path = PathSample::from_trajectory(traj)?;
    if s < 0.0 {
        let u0 = &traj.states()[0];
        let zero = u0.grid().flat_index([0, 0]).map(|i| u0.coeffs()[i].norm()).unwrap_or(0.0);
        if zero > 1e-13 * u0.max_coeff() {
            return Err(Error::domain(format!("s = {s} < 0 needs mean-zero data (|û(0)| = {zero:e})")));
        }
    }
    let mut acc = 0.0;
    for level in bank.levels() {
        let values: Vec<SpectralField> = path.values().iter().map(|v| dyadic_project(v, level, bank)).collect();
        let piece = PathSample { times: path.times.clone(), values };
        acc += level.powf(2.0 * s) * vs_norm(&piece, 2.0)?.powi(2);
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::evolution::{evolve, EquationSpec};
    use crate::spectral::{make_grid, Grid};

    fn pv(v: &[f64], p: f64) -> f64 {
        p_variation_scalar(v, p, false).unwrap()
    }

    #[test]
    fn worked_values() {
        assert_eq!(pv(&[0.0, 1.0, 2.0, 3.0], 1.0), 3.0);
        assert!((pv(&[0.0, 1.0, 0.0], 2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((pv(&[0.0, 3.0, 1.0], 2.0) - 13f64.sqrt()).abs() < 1e-15);
        assert_eq!(p_variation_scalar(&[2.0, 2.0], 1.0, true).unwrap(), 2.0);
        assert!(p_variation_scalar(&[0.0, 1.0], 0.5, false).is_err());
    }

    fn random_field(grid: Grid, rng: &mut impl Rng) -> SpectralField {
        SpectralField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn field_path_matches_scalar_embedding() {
        let g = make_grid(1, 8, 2.0 * PI).unwrap();
        let unit = SpectralField::plane_wave(g, [1, 0], Complex64::new(1.0, 0.0)).unwrap();
        let unit = &unit * (1.0 / unit.l2_norm());
        let xs = [0.3, -1.2, 0.7, 0.7, 2.5];
        let path = PathSample::new((0..5).map(f64::from).collect(), xs.iter().map(|&x| &unit * x).collect()).unwrap();
        for p in [1.0, 2.0, 3.5] {
            for jump in [false, true] {
                let a = p_variation(&path, p, jump).unwrap();
                let b = p_variation_scalar(&xs, p, jump).unwrap();
                assert!((a - b).abs() < 1e-12 * b, "{a} {b}");
            }
        }
    }

    #[test]
    fn atoms_are_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = make_grid(1, 8, 2.0 * PI).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let blocks: Vec<_> = (0..5).map(|_| random_field(g, &mut rng)).collect();
            let atom = make_up_atom(&[0.0, 1.0, 1.5, 2.0, 4.0, f64::INFINITY], &blocks, p).unwrap();
            let mass: f64 = atom.blocks().iter().map(|b| b.l2_norm().powf(p)).sum();
            assert!((mass - 1.0).abs() < 1e-12);
            assert!(p_variation(&atom.to_sample(), p, true).unwrap() <= 2.0);
        }
        let one = make_up_atom(&[0.0, 1.0], &[random_field(g, &mut rng)], 2.0).unwrap();
        assert!((one.blocks()[0].l2_norm() - 1.0).abs() < 1e-12);
        assert!(make_up_atom(&[0.0, 1.0], &[SpectralField::zeros(g)], 2.0).is_err());
    }

    #[test]
    fn step_path_lookup() {
        let g = make_grid(1, 8, 2.0 * PI).unwrap();
        let b: Vec<_> =
            (1..=3).map(|k| SpectralField::plane_wave(g, [k, 0], Complex64::new(1.0, 0.0)).unwrap()).collect();
        let path = StepPath::new(vec![0.0, 1.0, 2.0, 3.0], b.clone(), true).unwrap();
        assert_eq!(path.value_at(1.0), Some(&b[1]));
        assert_eq!(path.value_at(0.999), Some(&b[0]));
        assert_eq!(path.value_at(3.0), None);
        assert_eq!(path.value_at(-0.1), None);
        assert!(StepPath::new(vec![0.0, 1.0], b.clone(), true).is_err());
        assert!(StepPath::new(vec![0.0, 2.0, 1.0, 3.0], b, true).is_err());
    }

    fn smooth(g: Grid, amp: f64) -> SpectralField {
        SpectralField::from_fn(g, |xi| {
            if xi[0] == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(amp * (-(xi[0] - 1.0).powi(2)).exp(), 0.0)
            }
        })
    }

    #[test]
    fn free_trajectory_norms() {
        let g = make_grid(1, 32, 4.0 * PI).unwrap();
        let phi = smooth(g, 1.0);
        let spec = EquationSpec::cubic().scaled(0.0);
        let traj = evolve(&phi, &spec, 1.0, 0.01, 5).unwrap();
        let path = PathSample::from_trajectory(&traj).unwrap();
        assert!((vs_norm(&path, 2.0).unwrap() - phi.l2_norm()).abs() < 1e-12 * phi.l2_norm());
        let bank = DyadicBank::for_grid(&g);
        for s in [-0.5, 0.0, 1.0] {
            let want: f64 = bank
                .levels()
                .map(|n| n.powf(2.0 * s) * dyadic_project(&phi, n, &bank).l2_norm().powi(2))
                .sum::<f64>()
                .sqrt();
            let got = y_norm(&traj, s, &bank).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "s = {s}");
        }
    }

    #[test]
    fn zero_path() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let path = PathSample::new(vec![0.0, 0.5, 1.0], vec![SpectralField::zeros(g); 3]).unwrap();
        assert_eq!(vs_norm(&path, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn small_data_vs_norm_is_perturbative() {
        let g = make_grid(1, 32, 4.0 * PI).unwrap();
        let u0 = smooth(g, 0.01);
        let traj = evolve(&u0, &EquationSpec::quartic_conjugate(), 2.0, 0.002, 10).unwrap();
        let v = vs_norm(&PathSample::from_trajectory(&traj).unwrap(), 2.0).unwrap();
        let l2 = u0.l2_norm();
        assert!(v >= 0.5 * l2 && v <= 2.0 * l2, "{v} vs {l2}");
        let fine = evolve(&u0, &EquationSpec::quartic_conjugate(), 2.0, 0.002, 5).unwrap();
        let bank = DyadicBank::for_grid(&g);
        let (a, b) = (y_norm(&traj, 0.0, &bank).unwrap(), y_norm(&fine, 0.0, &bank).unwrap());
        assert!((a - b).abs() < 0.01 * b);
    }

    #[test]
    fn y_norm_rejects_nonzero_mean() {
        let g = make_grid(1, 16, 2.0 * PI).unwrap();
        let u = SpectralField::plane_wave(g, [0, 0], Complex64::new(1.0, 0.0)).unwrap();
        let traj = evolve(&u, &EquationSpec::cubic().scaled(0.0), 0.1, 0.05, 1).unwrap();
        assert!(y_norm(&traj, -0.5, &DyadicBank::for_grid(&g)).is_err());
    }
}
