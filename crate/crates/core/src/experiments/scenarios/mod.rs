use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ExperimentConfig, ResultRecord, Scenario};
use crate::{Error, Result};

mod dynamics;
mod fuzz;
mod inflation;
mod paths;

/// Runs one scenario. Results depend only on the config: every random
/// draw comes from a generator keyed by `(seed, task index)`.
pub fn run_scenario(config: &ExperimentConfig) -> Result<ResultRecord> {
    let scenario = config.scenario();
    let started = Instant::now();
    let mut record = ResultRecord::new(scenario.name(), config.params().clone());
    let outcome = match scenario {
        Scenario::InflationCubic => inflation::cubic(config, &mut record),
        Scenario::InflationGeneral => inflation::general(config, &mut record),
        Scenario::ScatteringSmallData => dynamics::scattering(config, &mut record),
        Scenario::ScalingInvariance => dynamics::scaling(config, &mut record),
        Scenario::ResonanceFuzz => fuzz::resonance(config, &mut record),
        Scenario::ModulationFuzz => fuzz::modulation(config, &mut record),
        Scenario::StrichartzSample => dynamics::strichartz(config, &mut record),
        Scenario::VariationProps => paths::variation(config, &mut record),
        Scenario::SolverOrder => dynamics::solver_order(config, &mut record),
    };
    outcome.map_err(|e| Error::Scenario { scenario: scenario.name().to_string(), source: Box::new(e) })?;
    record.wall_time = started.elapsed().as_secs_f64();
    Ok(record)
}

pub(super) fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = mean;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation, ties given their mean rank.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("spearman needs two equal-length samples of size ≥ 2"));
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Smooth bump supported on `(lo, hi)`, peak 1 at the midpoint.
pub(super) fn bump(x: f64, lo: f64, hi: f64) -> f64 {
    let r = (2.0 * x - lo - hi) / (hi - lo);
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}
