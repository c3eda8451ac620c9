use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{spearman, task_rng};
use crate::evolution::{free_propagate, EquationSpec, Trajectory};
use crate::experiments::{format_float, Comparison, ExperimentConfig, ResultRecord, Table};
use crate::spectral::{Grid, SpectralField};
use crate::variation::{
    free_leakage_floor, l2_tx, make_up_atom, modulation_project, p_variation, p_variation_scalar, vs_norm, Modulation,
    PathSample, Taper,
};
use crate::{Error, Result};

const ATOM_STREAMS: u64 = 1 << 40;
const ENSEMBLE_STREAMS: u64 = 2 << 40;
const ORACLE_EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];

/// Brute force over every sub-partition that keeps both end points, summing
/// left to right.
fn enumerate_variation(values: &[f64], p: f64, jump: bool) -> f64 {
    let mut v = values.to_vec();
    if jump {
        v.push(0.0);
    }
    let n = v.len();
    let dist = |i: usize, j: usize| if jump && j == n - 1 { v[i].abs() } else { (v[j] - v[i]).abs() };
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << (n - 2)) {
        let mut prev = 0;
        let mut sum = 0.0;
        for k in 1..n {
            if k == n - 1 || mask & (1 << (k - 1)) != 0 {
                sum += dist(prev, k).powf(p);
                prev = k;
            }
        }
        best = best.max(sum);
    }
    best.powf(1.0 / p)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn band_noise(grid: Grid, band: f64, rng: &mut impl Rng) -> SpectralField {
    SpectralField::from_fn(grid, |xi| if xi[0].abs() <= band { gaussian(rng) } else { Complex64::new(0.0, 0.0) })
}

fn oracle(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (seed, paths, max_len) = (cfg.u64("seed")?, cfg.usize("paths")?, cfg.usize("max_len")?);
    if !(2..=20).contains(&max_len) {
        return Err(Error::config(format!("max_len must lie in [2, 20], got {max_len}")));
    }
    let per_path = (0..paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let len = rng.random_range(2..=max_len);
            let values: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
            let p = ORACLE_EXPONENTS[rng.random_range(0..ORACLE_EXPONENTS.len())];
            let jump = rng.random::<bool>();
            let dp = p_variation_scalar(&values, p, jump)?;
            let mismatch = dp.to_bits() != enumerate_variation(&values, p, jump).to_bits();
            let by_p = [1.0, 2.0, 3.0, 4.0]
                .iter()
                .map(|&q| p_variation_scalar(&values, q, jump))
                .collect::<Result<Vec<_>>>()?;
            let rises = by_p.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12));
            Ok((mismatch, rises))
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches = per_path.iter().filter(|r| r.0).count() as f64;
    let rises = per_path.iter().filter(|r| r.1).count() as f64;
    rec.output("oracle_paths", paths as f64);
    rec.output("oracle_mismatches", mismatches);
    rec.output("monotonicity_violations", rises);
    rec.check("oracle_mismatches", mismatches, Comparison::Le, 0.0);
    rec.check("monotonicity_violations", rises, Comparison::Le, 0.0);
    Ok(())
}

fn atoms(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (seed, count) = (cfg.u64("seed")?, cfg.usize("atoms")?);
    let exponents = cfg.f64_list("atom_exponents")?;
    if exponents.is_empty() {
        return Err(Error::config("atom_exponents is empty"));
    }
    let grid = Grid::new(1, 8, 2.0 * PI)?;
    let values = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, ATOM_STREAMS + i as u64);
            let p = exponents[i % exponents.len()];
            let k = rng.random_range(1..=8);
            let mut partition: Vec<f64> = (0..=k).map(|_| rng.random::<f64>()).collect();
            partition.sort_by(f64::total_cmp);
            partition.dedup();
            if partition.len() != k + 1 {
                return Err(Error::domain("degenerate random partition"));
            }
            if rng.random::<bool>() {
                partition[k] = f64::INFINITY;
            }
            let blocks: Vec<SpectralField> = (0..k).map(|_| band_noise(grid, 3.0, &mut rng)).collect();
            let atom = make_up_atom(&partition, &blocks, p)?;
            p_variation(&atom.to_sample(), p, true)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = values.iter().copied().fold(0.0, f64::max);
    let violations = values.iter().filter(|&&v| v > 2.0).count() as f64;
    rec.output("atoms", count as f64);
    rec.output("atom_max_variation", worst);
    rec.output("atom_violations", violations);
    rec.check("atom_violations", violations, Comparison::Le, 0.0);
    Ok(())
}

/// A random step path in the twisted frame: `S(t)φ_j` between jumps, with
/// Gaussian blocks and increments on `|ξ| ≤ 3`.
fn ensemble_member(grid: Grid, samples: usize, dt: f64, jumps: usize, rng: &mut impl Rng) -> Result<Trajectory> {
    if jumps >= samples {
        return Err(Error::config("more jumps than samples"));
    }
    let mut at: Vec<usize> = index::sample(rng, samples - 1, jumps).into_iter().map(|k| k + 1).collect();
    at.sort_unstable();
    let mut block = band_noise(grid, 3.0, rng);
    let mut next = at.iter().peekable();
    let mut states = Vec::with_capacity(samples);
    for k in 0..samples {
        if next.peek() == Some(&&k) {
            next.next();
            block = &block + &band_noise(grid, 3.0, rng);
        }
        states.push(free_propagate(&block, k as f64 * dt));
    }
    let times = (0..samples).map(|k| k as f64 * dt).collect();
    Trajectory::new(times, states, EquationSpec::cubic().scaled(0.0))
}

fn ensemble(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (seed, count) = (cfg.u64("seed")?, cfg.usize("ensemble")?);
    let (samples, dt, jumps) = (cfg.usize("ensemble_samples")?, cfg.f64("ensemble_dt")?, cfg.usize("jumps")?);
    let scales = cfg.f64_list("modulations")?;
    let grid = Grid::new(1, 16, 2.0 * PI)?;
    let rows = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, ENSEMBLE_STREAMS + i as u64);
            let traj = ensemble_member(grid, samples, dt, jumps, &mut rng)?;
            let v = vs_norm(&PathSample::from_trajectory(&traj)?, 2.0)?;
            scales
                .iter()
                .map(|&m| {
                    let high = modulation_project(&traj, m, Modulation::High)?;
                    let floor = free_leakage_floor(&traj, m, Taper::default())?;
                    Ok((i, m, l2_tx(&high) * m.sqrt() / v, v, floor))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let ms: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let rho = spearman(&ms, &ratios)?;
    let floor = rows.iter().map(|r| r.4).fold(0.0, f64::max);
    rec.output("ensemble_paths", count as f64);
    rec.output("max_modulation_ratio", worst);
    rec.output("min_modulation_ratio", ratios.iter().copied().fold(f64::INFINITY, f64::min));
    rec.output("max_leakage_floor", floor);
    rec.output("spearman", rho);
    rec.check("max_modulation_ratio", worst, Comparison::Le, cfg.f64("ratio_max")?);
    rec.check("spearman", rho, Comparison::Le, cfg.f64("spearman_max")?);
    rec.tables.push(Table {
        name: "ensemble".into(),
        columns: ["path_id", "p", "M", "ratio", "vs_norm", "leakage_floor"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|&(i, m, r, v, f)| {
                vec![i.to_string(), "2".into(), format_float(m), format_float(r), format_float(v), format_float(f)]
            })
            .collect(),
    });
    Ok(())
}

pub(super) fn variation(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    oracle(cfg, rec)?;
    atoms(cfg, rec)?;
    ensemble(cfg, rec)
}
