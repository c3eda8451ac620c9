use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::resonance::{cubic_band_phase_bound, SignPattern};
use super::weight::oscillatory_weight;
use crate::evolution::EquationSpec;
use crate::experiments::{fit_power_law, PowerLawFit};
use crate::{Error, Result};

/// Largest `d(m−1)` handled by full tensor quadrature.
pub const TENSOR_COST_LIMIT: usize = 4;

/// Equispaced midpoint nodes across `[center − halfwidth, center + halfwidth]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyBand {
    center: f64,
    halfwidth: f64,
    samples: usize,
}

impl FrequencyBand {
    pub fn new(center: f64, halfwidth: f64, samples: usize) -> Result<Self> {
        if !(halfwidth > 0.0 && halfwidth.is_finite() && center.is_finite()) {
            return Err(Error::domain(format!("band needs a positive halfwidth, got {halfwidth}")));
        }
        if samples < 8 {
            return Err(Error::domain(format!("band needs at least 8 nodes, got {samples}")));
        }
        Ok(FrequencyBand { center, halfwidth, samples })
    }

    /// `[N − 1/N, N + 1/N]`.
    pub fn witness(scale: f64, samples: usize) -> Result<Self> {
        if !(scale > 1.0) {
            return Err(Error::domain(format!("band scale must exceed 1, got {scale}")));
        }
        Self::new(scale, 1.0 / scale, samples)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn lower(&self) -> f64 {
        self.center - self.halfwidth
    }

    pub fn upper(&self) -> f64 {
        self.center + self.halfwidth
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / self.samples as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        midpoints(self.lower(), self.upper(), self.samples)
    }
}

fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Output of an exact-in-frequency iterate evaluation.
///
/// `mesh` holds `d` coordinates per output node, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateResult {
    pub s: f64,
    #[serde(rename = "N")]
    pub scale: f64,
    pub t: f64,
    pub m: usize,
    pub d: usize,
    pub hs_norm: f64,
    pub mesh: Vec<f64>,
    pub amp_re: Vec<f64>,
    pub amp_im: Vec<f64>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, f64>,
}

impl IterateResult {
    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.amp_re.iter().zip(&self.amp_im).map(|(&re, &im)| Complex64::new(re, im)).collect()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.mesh[i * self.d..(i + 1) * self.d]
    }

    pub fn len(&self) -> usize {
        self.amp_re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp_re.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("evaluation time must be non-negative, got {t}")));
    }
    Ok(())
}

/// `û(ξ)` of the third iterate of `f_N = N^{1/2−s} 𝓕⁻¹[1_B]`, `B = [N − 1/N, N + 1/N]`,
/// for `i∂_t u − ∂_x⁴ u = ∂_x(|u|²u)`.
///
/// `ξ₃ = ξ − ξ₁ + ξ₂` is eliminated; `ξ₁` runs over `nodes` midpoints of `B`
/// and `ξ₂` over `nodes` midpoints of the exact feasible interval, with the
/// time integral done in closed form.
pub fn cubic_amplitude(xi: f64, s: f64, scale: f64, t: f64, nodes: usize) -> Result<Complex64> {
    let band = FrequencyBand::witness(scale, nodes)?;
    check_time(t)?;
    Ok(cubic_amplitude_on(xi, s, &band, t))
}

fn cubic_amplitude_on(xi: f64, s: f64, band: &FrequencyBand, t: f64) -> Complex64 {
    let (a, b) = (band.lower(), band.upper());
    let n = band.samples();
    let mut acc = Complex64::new(0.0, 0.0);
    for x1 in band.nodes() {
        let lo = a.max(a - xi + x1);
        let hi = b.min(b - xi + x1);
        if hi <= lo {
            continue;
        }
        let h2 = (hi - lo) / n as f64;
        let mut inner = Complex64::new(0.0, 0.0);
        for x2 in midpoints(lo, hi, n) {
            let x3 = xi - x1 + x2;
            let quad = 2.0 * x1 * x1 + x2 * x2 + 2.0 * x3 * x3 - x1 * x2 - x2 * x3 + 3.0 * x3 * x1;
            let omega = 2.0 * (x1 - x2) * (x2 - x3) * quad;
            inner += oscillatory_weight(-omega, t);
        }
        acc += inner * h2;
    }
    let amp = band.center().powf(0.5 - s);
    // −i·(iξ)·e^{−itξ⁴}·(2π)^{−1}·A³·∫∫
    let phase = Complex64::from_polar(1.0, -t * xi.powi(4));
    acc * phase * (xi * amp.powi(3) * band.spacing() / (2.0 * PI))
}

/// The third iterate of the band data at time `t`, on the band mesh refined
/// twice over `[N − 3/N, N + 3/N]`. `hs_norm` is the midpoint-rule `H^s`
/// norm over that mesh, which carries the whole support.
pub fn third_iterate_cubic(s: f64, scale: f64, t: f64, band: &FrequencyBand) -> Result<IterateResult> {
    check_time(t)?;
    let expected = FrequencyBand::witness(scale, band.samples())?;
    if (band.center() - expected.center()).abs() > 1e-12 * scale
        || (band.halfwidth() - expected.halfwidth()).abs() > 1e-12 * expected.halfwidth()
    {
        return Err(Error::domain(format!("band must be [N − 1/N, N + 1/N] for N = {scale}")));
    }
    if band.samples() < 16 {
        return Err(Error::domain(format!("band needs at least 16 nodes, got {}", band.samples())));
    }
    let h = band.halfwidth();
    let count = 6 * band.samples();
    let mesh = midpoints(scale - 3.0 * h, scale + 3.0 * h, count);
    let dx = 6.0 * h / count as f64;
    let amps: Vec<Complex64> = mesh.par_iter().map(|&xi| cubic_amplitude_on(xi, s, band, t)).collect();
    let hs = mesh.iter().zip(&amps).map(|(xi, a)| (1.0 + xi * xi).powf(s) * a.norm_sqr()).sum::<f64>() * dx;
    let mut extra = BTreeMap::new();
    extra.insert("nodes".into(), band.samples() as f64);
    extra.insert("t_omega_max".into(), t * cubic_band_phase_bound(scale)?);
    Ok(IterateResult {
        s,
        scale,
        t,
        m: 3,
        d: 1,
        hs_norm: hs.sqrt(),
        mesh,
        amp_re: amps.iter().map(|a| a.re).collect(),
        amp_im: amps.iter().map(|a| a.im).collect(),
        extra,
    })
}

/// Quadrature nodes for the free variables `ξ_1 … ξ_{m−2}` and the unit
/// offsets that place `ξ_{m−1}` inside its feasible box.
struct NodeSet {
    free: Vec<f64>,
    free_weight: f64,
    last: Vec<[f64; 2]>,
    paired: bool,
}

impl NodeSet {
    fn count(&self, width: usize) -> usize {
        self.free.len().checked_div(width).unwrap_or(1)
    }
}

struct BoxProblem<'a> {
    spec: &'a EquationSpec,
    patterns: Vec<(SignPattern, f64)>,
    scale: f64,
    amp: f64,
    t: f64,
}

impl BoxProblem<'_> {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn degree(&self) -> usize {
        self.spec.degree()
    }

    /// `Σ_α c_α ∫ W(−Ω_α, t)` over the node range `range` of `nodes`.
    fn integral(&self, xi: [f64; 2], nodes: &NodeSet, range: std::ops::Range<usize>) -> Complex64 {
        let d = self.dim();
        let m = self.degree();
        let width = (m - 2) * d;
        let n = self.scale;
        let norm4 = |v: [f64; 2]| {
            let r2 = v[0] * v[0] + v[1] * v[1];
            r2 * r2
        };
        let out4 = norm4(xi);
        let mut total = Complex64::new(0.0, 0.0);
        for (pattern, coeff) in &self.patterns {
            let signs = pattern.signs();
            let mut acc = Complex64::new(0.0, 0.0);
            for k in range.clone() {
                let free = &nodes.free[k * width..(k + 1) * width];
                let mut rest = [0.0; 2];
                let mut phase = -out4;
                for (j, sign) in signs.iter().take(m - 2).enumerate() {
                    let mut v = [0.0; 2];
                    v[..d].copy_from_slice(&free[j * d..(j + 1) * d]);
                    let sg = sign.value();
                    rest[0] += sg * v[0];
                    rest[1] += sg * v[1];
                    phase += sg * norm4(v);
                }
                let s_last = signs[m - 2].value();
                let s_end = signs[m - 1].value();
                // ±ξ_{m−1} ∈ (ξ − rest) + [−N, N]^d and ξ_{m−1} ∈ [−N, N]^d.
                let mut lo = [0.0; 2];
                let mut hi = [0.0; 2];
                let mut volume = 1.0;
                let mut empty = false;
                for a in 0..d {
                    let c = xi[a] - rest[a];
                    let (l, h) = if s_last > 0.0 { (c - n, c + n) } else { (-c - n, -c + n) };
                    lo[a] = l.max(-n);
                    hi[a] = h.min(n);
                    if hi[a] <= lo[a] {
                        empty = true;
                    }
                    volume *= hi[a] - lo[a];
                }
                if empty {
                    continue;
                }
                let offsets: &[[f64; 2]] = if nodes.paired { &nodes.last[k..k + 1] } else { &nodes.last };
                let mut inner = Complex64::new(0.0, 0.0);
                for off in offsets {
                    let mut v = [0.0; 2];
                    let mut w = [0.0; 2];
                    for a in 0..d {
                        v[a] = lo[a] + off[a] * (hi[a] - lo[a]);
                        // ±ξ_m = ξ − rest − (±ξ_{m−1})
                        w[a] = s_end * (xi[a] - rest[a] - s_last * v[a]);
                    }
                    let omega = phase + s_last * norm4(v) + s_end * norm4(w);
                    inner += oscillatory_weight(-omega, self.t);
                }
                acc += inner * (volume / offsets.len() as f64);
            }
            total += acc * *coeff;
        }
        total * nodes.free_weight
    }

    /// `−i σ(ξ) e^{−it|ξ|⁴} (2π)^{−(m−1)d/2} A^m · integral`.
    fn prefactor(&self, xi: [f64; 2]) -> Complex64 {
        let d = self.dim() as i32;
        let m = self.degree() as i32;
        let r4 = (xi[0] * xi[0] + xi[1] * xi[1]).powi(2);
        let c = self.amp.powi(m) * (2.0 * PI).powf(-((m - 1) * d) as f64 / 2.0);
        Complex64::new(0.0, -1.0) * self.spec.symbol(xi) * Complex64::from_polar(c, -self.t * r4)
    }
}

fn sign_weights(spec: &EquationSpec) -> Result<Vec<(SignPattern, f64)>> {
    spec.terms()
        .iter()
        .filter(|t| t.coeff != 0.0)
        .map(|t| Ok((SignPattern::from_monomial(t.alpha, t.beta)?, t.coeff)))
        .collect()
}

/// Output mesh of spacing `2N/nodes` over `[−mN, mN]^d`.
fn output_mesh(d: usize, m: usize, scale: f64, nodes: usize) -> Vec<[f64; 2]> {
    let axis = midpoints(-(m as f64) * scale, m as f64 * scale, m * nodes);
    if d == 1 {
        axis.iter().map(|&x| [x, 0.0]).collect()
    } else {
        axis.iter().flat_map(|&x| axis.iter().map(move |&y| [x, y])).collect()
    }
}

fn in_window(p: [f64; 2], d: usize, scale: f64) -> bool {
    p[..d].iter().all(|&x| x >= scale / 2.0 && x <= scale)
}

/// Midpoint `H^s` norms over the witness window `[N/2, N]^d` and over the
/// whole mesh.
fn box_norms(mesh: &[[f64; 2]], amps: &[Complex64], s: f64, d: usize, scale: f64, cell: f64) -> (f64, f64) {
    let mut window = 0.0;
    let mut full = 0.0;
    for (p, a) in mesh.iter().zip(amps) {
        let v = (1.0 + p[0] * p[0] + p[1] * p[1]).powf(s) * a.norm_sqr() * cell;
        full += v;
        if in_window(*p, d, scale) {
            window += v;
        }
    }
    (window.sqrt(), full.sqrt())
}

fn check_box_args(spec: &EquationSpec, s: f64, scale: f64, t: f64, nodes: usize) -> Result<()> {
    check_time(t)?;
    if !(scale >= 1.0 && scale.is_finite()) || !s.is_finite() {
        return Err(Error::domain(format!("need N >= 1 and finite s, got N = {scale}, s = {s}")));
    }
    if nodes < 4 || !nodes.is_multiple_of(4) {
        return Err(Error::domain(format!("nodes per dimension must be a positive multiple of 4, got {nodes}")));
    }
    if spec.terms().iter().all(|t| t.coeff == 0.0) {
        return Err(Error::domain("nonlinearity has no non-zero monomial"));
    }
    Ok(())
}

fn box_result(
    problem: &BoxProblem<'_>,
    s: f64,
    nodes: usize,
    mesh: Vec<[f64; 2]>,
    amps: Vec<Complex64>,
    mut extra: BTreeMap<String, f64>,
) -> IterateResult {
    let d = problem.dim();
    let cell = (2.0 * problem.scale / nodes as f64).powi(d as i32);
    let (window, full) = box_norms(&mesh, &amps, s, d, problem.scale, cell);
    extra.insert("hs_norm_full".into(), full);
    extra.insert("nodes".into(), nodes as f64);
    IterateResult {
        s,
        scale: problem.scale,
        t: problem.t,
        m: problem.degree(),
        d,
        hs_norm: window,
        mesh: mesh.iter().flat_map(|p| p[..d].to_vec()).collect(),
        amp_re: amps.iter().map(|a| a.re).collect(),
        amp_im: amps.iter().map(|a| a.im).collect(),
        extra,
    }
}

/// The `m`-th iterate of `g_N = N^{−s−d/2} 𝓕⁻¹[1_{[−N,N]^d}]` at time `t`,
/// summing one sign pattern per monomial of `spec` (use
/// [`EquationSpec::all_sign_patterns`] for the full `2^m` sum).
///
/// Full tensor midpoint quadrature with `nodes` points per axis; the last
/// free variable runs over its exact feasible box. Refuses `d(m−1) > 4`; see
/// [`general_iterate_monte_carlo`]. `hs_norm` is taken over `[N/2, N]^d`,
/// the full-mesh norm is in `extra["hs_norm_full"]`.
pub fn general_iterate(spec: &EquationSpec, s: f64, scale: f64, t: f64, nodes: usize) -> Result<IterateResult> {
    check_box_args(spec, s, scale, t, nodes)?;
    let (d, m) = (spec.dim(), spec.degree());
    if d * (m - 1) > TENSOR_COST_LIMIT {
        return Err(Error::domain(format!(
            "d(m−1) = {} exceeds the tensor quadrature limit {TENSOR_COST_LIMIT}; use the Monte Carlo variant",
            d * (m - 1)
        )));
    }
    let problem = BoxProblem { spec, patterns: sign_weights(spec)?, scale, amp: scale.powf(-s - d as f64 / 2.0), t };
    let axis = midpoints(-scale, scale, nodes);
    let width = (m - 2) * d;
    let count = nodes.pow(width as u32);
    let mut free = Vec::with_capacity(count * width);
    for k in 0..count {
        let mut r = k;
        for _ in 0..width {
            free.push(axis[r % nodes]);
            r /= nodes;
        }
    }
    let unit = midpoints(0.0, 1.0, nodes);
    let last = if d == 1 {
        unit.iter().map(|&u| [u, 0.0]).collect()
    } else {
        unit.iter().flat_map(|&u| unit.iter().map(move |&v| [u, v])).collect()
    };
    let set = NodeSet { free, free_weight: (2.0 * scale / nodes as f64).powi(width as i32), last, paired: false };
    let mesh = output_mesh(d, m, scale, nodes);
    let total = set.count(width);
    let amps: Vec<Complex64> =
        mesh.par_iter().map(|&xi| problem.prefactor(xi) * problem.integral(xi, &set, 0..total)).collect();
    Ok(box_result(&problem, s, nodes, mesh, amps, BTreeMap::new()))
}

/// Batches used for the Monte Carlo error bar.
const BATCHES: usize = 16;

/// [`general_iterate`] with `samples` random nodes (seeded, shared by every
/// output point and sign pattern) in place of the tensor rule. The output
/// mesh still uses `nodes` per axis. `extra["hs_norm_err"]` is the standard
/// error of the window norm across 16 independent batches.
pub fn general_iterate_monte_carlo(
    spec: &EquationSpec,
    s: f64,
    scale: f64,
    t: f64,
    nodes: usize,
    samples: usize,
    seed: u64,
) -> Result<IterateResult> {
    check_box_args(spec, s, scale, t, nodes)?;
    if samples < BATCHES || !samples.is_multiple_of(BATCHES) {
        return Err(Error::domain(format!("samples must be a positive multiple of {BATCHES}, got {samples}")));
    }
    let (d, m) = (spec.dim(), spec.degree());
    let problem = BoxProblem { spec, patterns: sign_weights(spec)?, scale, amp: scale.powf(-s - d as f64 / 2.0), t };
    let width = (m - 2) * d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free: Vec<f64> = (0..samples * width).map(|_| rng.random_range(-scale..scale)).collect();
    let last: Vec<[f64; 2]> = (0..samples)
        .map(|_| {
            let u = rng.random::<f64>();
            let v = if d == 2 { rng.random::<f64>() } else { 0.0 };
            [u, v]
        })
        .collect();
    let set = NodeSet {
        free,
        free_weight: (2.0 * scale).powi(width as i32) / (samples / BATCHES) as f64,
        last,
        paired: true,
    };
    let per = samples / BATCHES;
    let mesh = output_mesh(d, m, scale, nodes);
    let batches: Vec<Vec<Complex64>> = mesh
        .par_iter()
        .map(|&xi| {
            let pre = problem.prefactor(xi);
            (0..BATCHES).map(|b| pre * problem.integral(xi, &set, b * per..(b + 1) * per)).collect()
        })
        .collect();
    let amps: Vec<Complex64> = batches.iter().map(|bs| bs.iter().sum::<Complex64>() / BATCHES as f64).collect();
    let cell = (2.0 * scale / nodes as f64).powi(d as i32);
    let norms: Vec<f64> = (0..BATCHES)
        .map(|b| {
            let col: Vec<Complex64> = batches.iter().map(|bs| bs[b]).collect();
            box_norms(&mesh, &col, s, d, scale, cell).0
        })
        .collect();
    let mean = norms.iter().sum::<f64>() / BATCHES as f64;
    let var = norms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
    let mut extra = BTreeMap::new();
    extra.insert("hs_norm_err".into(), (var / BATCHES as f64).sqrt());
    extra.insert("samples".into(), samples as f64);
    extra.insert("seed".into(), seed as f64);
    Ok(box_result(&problem, s, nodes, mesh, amps, extra))
}

/// Least-squares power law of `hs_norm` against `N`.
pub fn inflation_slope(results: &[IterateResult]) -> Result<PowerLawFit> {
    if results.len() < 4 {
        return Err(Error::domain(format!("need at least 4 iterate results, got {}", results.len())));
    }
    let first = &results[0];
    for r in results {
        if r.s != first.s || r.m != first.m || r.d != first.d {
            return Err(Error::domain("iterate results differ in (s, m, d)"));
        }
    }
    let mut scales: Vec<f64> = results.iter().map(|r| r.scale).collect();
    scales.sort_by(f64::total_cmp);
    if scales.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("iterate results must have distinct N"));
    }
    let xs: Vec<f64> = results.iter().map(|r| r.scale).collect();
    let ys: Vec<f64> = results.iter().map(|r| r.hs_norm).collect();
    fit_power_law(&xs, &ys)
}

/// Smallest `|û|/(t N^{1/2−3s})` over the middle half of the output band.
pub fn cubic_lower_constant(result: &IterateResult) -> f64 {
    let h = 1.0 / result.scale;
    let reference = result.t * result.scale.powf(0.5 - 3.0 * result.s);
    result
        .mesh
        .iter()
        .zip(result.amplitudes())
        .filter(|(xi, _)| (**xi - result.scale).abs() <= 1.5 * h)
        .map(|(_, a)| a.norm() / reference)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::Derivative;
    use crate::spectral::critical_exponent;

    #[test]
    fn band_validation() {
        assert!(FrequencyBand::new(4.0, 0.0, 16).is_err());
        assert!(FrequencyBand::new(4.0, 0.1, 7).is_err());
        let b = FrequencyBand::witness(16.0, 32).unwrap();
        assert_eq!(b.nodes().len(), 32);
        assert!((b.spacing() - 2.0 / 16.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_zero() {
        let band = FrequencyBand::witness(16.0, 16).unwrap();
        let r = third_iterate_cubic(-0.25, 16.0, 0.0, &band).unwrap();
        assert!(r.amplitudes().iter().all(|a| a.norm() == 0.0));
        assert_eq!(r.hs_norm, 0.0);
        assert!(third_iterate_cubic(-0.25, 16.0, -1.0, &band).is_err());
        let g = general_iterate(&EquationSpec::monomial(1, 2, 2, Derivative::Modulus).unwrap(), -3.0, 8.0, 0.0, 16)
            .unwrap();
        assert_eq!(g.hs_norm, 0.0);
    }

    #[test]
    fn wrong_band_is_rejected() {
        let band = FrequencyBand::witness(32.0, 16).unwrap();
        assert!(third_iterate_cubic(-0.25, 16.0, 1e-3, &band).is_err());
        let coarse = FrequencyBand::witness(16.0, 8).unwrap();
        assert!(third_iterate_cubic(-0.25, 16.0, 1e-3, &coarse).is_err());
    }

    /// With `t → 0` the weight is `t`, so the amplitude at the band centre is
    /// `t·ξ·A³·(area of the feasible set)/(2π)`; the feasible set at `ξ = N`
    /// is a hexagon of area `3h²` (three quarters of the `2h × 2h` square).
    #[test]
    fn small_time_centre_value() {
        let (n, s, t) = (16.0, -0.25, 1e-9);
        let a = cubic_amplitude(n, s, n, t, 64).unwrap();
        let h = 1.0 / n;
        let want = t * n * n.powf(0.5 - s).powi(3) * 3.0 * h * h / (2.0 * PI);
        assert!((a.norm() - want).abs() < 1e-3 * want, "{} vs {want}", a.norm());
    }

    #[test]
    fn lower_bound_constant_uniform() {
        let t = super::super::small_time_rule(&[16.0, 256.0]).unwrap();
        let mut consts = vec![];
        for n in [16.0, 64.0, 256.0] {
            let r = third_iterate_cubic(-0.25, n, t, &FrequencyBand::witness(n, 32).unwrap()).unwrap();
            consts.push(cubic_lower_constant(&r));
        }
        let c0 = consts[0];
        assert!(c0 > 0.0);
        for c in &consts {
            assert!(*c >= 0.5 * c0, "{consts:?}");
        }
    }

    #[test]
    fn quadrature_converges() {
        let t = 1e-2;
        let a = third_iterate_cubic(-0.25, 64.0, t, &FrequencyBand::witness(64.0, 32).unwrap()).unwrap();
        let b = third_iterate_cubic(-0.25, 64.0, t, &FrequencyBand::witness(64.0, 64).unwrap()).unwrap();
        assert!((a.hs_norm - b.hs_norm).abs() < 0.005 * b.hs_norm);
    }

    #[test]
    fn general_scale_exponent() {
        let spec = EquationSpec::all_sign_patterns(1, 2, Derivative::Modulus).unwrap();
        for (s, want) in [(-3.0, 0.5), (critical_exponent(1, 2).unwrap(), 0.0)] {
            let rs: Vec<_> = [16.0, 32.0, 64.0, 128.0]
                .iter()
                .map(|&n: &f64| general_iterate(&spec, s, n, n.powi(-4), 32).unwrap())
                .collect();
            let fit = inflation_slope(&rs).unwrap();
            assert!((fit.slope - want).abs() < 0.05, "s = {s}: {fit:?}");
        }
    }

    #[test]
    fn cost_guard() {
        let spec = EquationSpec::monomial(2, 4, 4, Derivative::Modulus).unwrap();
        assert!(general_iterate(&spec, -1.0, 4.0, 1e-3, 4).is_err());
        let r = general_iterate_monte_carlo(&spec, -1.0, 4.0, 4f64.powi(-4), 4, 64, 3).unwrap();
        assert!(r.hs_norm > 0.0 && r.extra["hs_norm_err"] >= 0.0);
        let again = general_iterate_monte_carlo(&spec, -1.0, 4.0, 4f64.powi(-4), 4, 64, 3).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn monte_carlo_tracks_tensor() {
        let spec = EquationSpec::monomial(1, 3, 3, Derivative::Modulus).unwrap();
        let n: f64 = 8.0;
        let exact = general_iterate(&spec, -1.0, n, n.powi(-4), 16).unwrap();
        let mc = general_iterate_monte_carlo(&spec, -1.0, n, n.powi(-4), 16, 4096, 11).unwrap();
        let err = mc.extra["hs_norm_err"];
        assert!(
            (mc.hs_norm - exact.hs_norm).abs() < 5.0 * err + 0.05 * exact.hs_norm,
            "{} {} {err}",
            mc.hs_norm,
            exact.hs_norm
        );
    }

    #[test]
    fn slope_needs_four_distinct() {
        let spec = EquationSpec::all_sign_patterns(1, 2, Derivative::Modulus).unwrap();
        let r = general_iterate(&spec, -3.0, 8.0, 1e-4, 8).unwrap();
        assert!(inflation_slope(&[r.clone(), r.clone(), r.clone()]).is_err());
        assert!(inflation_slope(&[r.clone(), r.clone(), r.clone(), r]).is_err());
    }

    #[test]
    fn json_keys() {
        let band = FrequencyBand::witness(16.0, 16).unwrap();
        let r = third_iterate_cubic(-0.25, 16.0, 1e-3, &band).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for k in ["s", "N", "t", "m", "d", "hs_norm", "mesh", "amp_re", "amp_im"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        let back: IterateResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
