use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{bump, task_rng};
use crate::evolution::{
    evolve, free_propagate, scattering_limit, strichartz_ratio, Derivative, EquationSpec, Exponent,
};
use crate::experiments::{format_float, Comparison, ExperimentConfig, ResultRecord, Series, Table};
use crate::spectral::{critical_exponent, scale_field, sobolev_norm, Grid, SpectralField};
use crate::{Error, Result};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Positive-frequency bump on `[lo, hi]` normalised to `‖u‖_{Ḣ^s} = eps`.
fn band_data(grid: Grid, lo: f64, hi: f64, s: f64, eps: f64) -> Result<SpectralField> {
    let u = SpectralField::from_fn(grid, |xi| Complex64::new(bump(xi[0], lo, hi), 0.0));
    let norm = sobolev_norm(&u, s, true)?;
    if norm == 0.0 {
        return Err(Error::config(format!("no lattice frequency inside the band ({lo}, {hi})")));
    }
    Ok(u.scale(Complex64::new(eps / norm, 0.0)))
}

pub(super) fn scattering(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let grid = Grid::new(1, cfg.usize("n")?, cfg.f64("length")?)?;
    let u0 = band_data(grid, cfg.f64("band_lo")?, cfg.f64("band_hi")?, -0.5, cfg.f64("eps")?)?;
    let spec = EquationSpec::quartic_conjugate();
    let traj = evolve(&u0, &spec, cfg.f64("horizon")?, cfg.f64("dt")?, cfg.usize("stride")?)?;
    let (limit, diag) = scattering_limit(&traj)?;
    let after = cfg.f64("after")?;
    let norm0 = sobolev_norm(&u0, -0.5, true)?;
    let late: Vec<f64> =
        diag.times.iter().zip(&diag.increments).filter(|(t, _)| **t > after).map(|(_, d)| *d).collect();
    if late.len() < 2 {
        return Err(Error::config(format!("fewer than two increments after t = {after}")));
    }
    let rises = late.windows(2).filter(|w| w[1] > w[0]).count();
    let last = *late.last().expect("non-empty");
    rec.output("u0_norm", norm0);
    rec.output("limit_norm", sobolev_norm(&limit, -0.5, true)?);
    rec.output("increments", late.len() as f64);
    rec.output("increment_rises", rises as f64);
    rec.output("first_increment", diag.increments[0]);
    rec.output("last_increment", last);
    rec.output("last_increment_rel", last / norm0);
    rec.check("increment_rises", rises as f64, Comparison::Le, 0.0);
    rec.check("last_increment_rel", last / norm0, Comparison::Lt, cfg.f64("final_tol")?);
    rec.tables.push(Table {
        name: "increments".into(),
        columns: vec!["t".into(), "delta".into()],
        rows: diag.times.iter().zip(&diag.increments).map(|(t, d)| vec![format_float(*t), format_float(*d)]).collect(),
    });
    Ok(())
}

pub(super) fn scaling(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (lambda, d, m) = (cfg.f64("lambda")?, cfg.usize("d")?, cfg.usize("m")?);
    if d != 1 {
        return Err(Error::config("scaling-invariance runs in one dimension"));
    }
    let grid = Grid::new(d, cfg.usize("n")?, cfg.f64("length")?)?;
    let sc = critical_exponent(d, m)?;
    let u0 = band_data(grid, 0.25, 2.5, sc, cfg.f64("eps")?)?;
    let spec = EquationSpec::monomial(d, m, 0, Derivative::Coordinate(0))?;
    let (horizon, dt, stride) = (cfg.f64("horizon")?, cfg.f64("dt")?, cfg.usize("stride")?);
    let dilation = lambda.powi(4);

    let scaled0 = scale_field(&u0, lambda, m)?;
    let (n0, n1) = (sobolev_norm(&u0, sc, true)?, sobolev_norm(&scaled0, sc, true)?);
    let direct = evolve(&u0, &spec, horizon, dt, stride)?;
    let rescaled = evolve(&scaled0, &spec, horizon * dilation, dt * dilation, stride)?;
    if direct.len() != rescaled.len() {
        return Err(Error::config("direct and rescaled runs sampled different instants"));
    }
    let mut worst: f64 = 0.0;
    let mut time_gap: f64 = 0.0;
    for k in 0..direct.len() {
        let expected = scale_field(&direct.states()[k], lambda, m)?;
        worst = worst.max((&rescaled.states()[k] - &expected).l2_norm() / expected.l2_norm());
        time_gap = time_gap.max((rescaled.times()[k] - dilation * direct.times()[k]).abs());
    }
    let norm_err = (n1 - n0).abs() / n0;
    let free_end = free_propagate(&u0, horizon);
    let nonlinear = (direct.last() - &free_end).l2_norm() / u0.l2_norm();
    rec.output("s_c", sc);
    rec.output("initial_norm", n0);
    rec.output("initial_norm_scaled", n1);
    rec.output("initial_norm_rel_err", norm_err);
    rec.output("trajectory_rel_err", worst);
    rec.output("nonlinear_deviation", nonlinear);
    rec.output("time_mismatch", time_gap);
    rec.check("trajectory_rel_err", worst, Comparison::Lt, cfg.f64("traj_tol")?);
    rec.check("initial_norm_rel_err", norm_err, Comparison::Le, cfg.f64("norm_tol")?);
    Ok(())
}

fn exponent(cfg: &ExperimentConfig, key: &str) -> Result<Exponent> {
    match cfg.get(key)? {
        "inf" => Ok(Exponent::Infinity),
        text => match text.split_once('/') {
            Some((a, b)) => Exponent::ratio(cfg_u64(a)?, cfg_u64(b)?),
            None => Ok(Exponent::integer(cfg_u64(text)?)),
        },
    }
}

fn cfg_u64(text: &str) -> Result<u64> {
    text.trim().parse().map_err(|_| Error::config(format!("`{text}` is not an exponent")))
}

/// Three randomly placed packets on the band `[K, 2K]`.
fn packet_data(grid: Grid, k: f64, rng: &mut impl Rng) -> SpectralField {
    let packets: Vec<(Complex64, f64)> = (0..3)
        .map(|_| {
            let a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            (a, rng.random_range(-4.0..=4.0) / k)
        })
        .collect();
    SpectralField::from_fn(grid, |xi| {
        let w = bump(xi[0], k, 2.0 * k);
        if w == 0.0 {
            return zero();
        }
        packets.iter().map(|(a, x)| a * Complex64::from_polar(w, -xi[0] * x)).sum()
    })
}

pub(super) fn strichartz(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (count, seed) = (cfg.usize("count")?, cfg.u64("seed")?);
    let (base, octaves) = (cfg.f64("bandwidth")?, cfg.f64("octaves")?);
    let (p, q) = (exponent(cfg, "p")?, exponent(cfg, "q")?);
    let (time_coeff, samples) = (cfg.f64("time_coeff")?, cfg.usize("samples")?);
    // Fast packets travel 32K³T = 32·time_coeff/K, so a box of 128/K₀ holds
    // every member; the lattice reaches twice the top frequency.
    let length = 128.0 / base;
    let top = 2.0 * base * 2f64.powf(octaves);
    let n = (2.0 * top * length / (2.0 * std::f64::consts::PI)).ceil() as usize;
    let grid = Grid::new(1, n.next_power_of_two().max(16), length)?;
    let rows = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let k = base * 2f64.powf(octaves * rng.random::<f64>());
            let phi = packet_data(grid, k, &mut rng);
            let ratio = strichartz_ratio(&phi, p, q, time_coeff * k.powi(-4), samples)?;
            Ok((k, ratio))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    rec.output("grid_n", grid.n() as f64);
    rec.output("min_ratio", lo);
    rec.output("max_ratio", hi);
    rec.output("spread", hi / lo);
    rec.check("spread", hi / lo, Comparison::Le, cfg.f64("ratio_max")?);
    rec.tables.push(Table {
        name: "ratios".into(),
        columns: vec!["id".into(), "K".into(), "ratio".into()],
        rows: rows
            .iter()
            .enumerate()
            .map(|(i, (k, r))| vec![i.to_string(), format_float(*k), format_float(*r)])
            .collect(),
    });
    Ok(())
}

pub(super) fn solver_order(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let grid = Grid::new(1, cfg.usize("n")?, cfg.f64("length")?)?;
    let amp = cfg.f64("amplitude")?;
    let u0 = SpectralField::from_fn(grid, |xi| {
        let k = xi[0];
        if k == 0.0 {
            zero()
        } else {
            Complex64::new(amp * (-(k - 1.5) * (k - 1.5)).exp(), 0.3 * amp * (-(k + 1.0) * (k + 1.0)).exp())
        }
    });
    let spec = EquationSpec::cubic();
    let (horizon, dt) = (cfg.f64("horizon")?, cfg.f64("dt")?);
    let finals = [dt, dt / 2.0, dt / 4.0]
        .par_iter()
        .map(|&h| Ok(evolve(&u0, &spec, horizon, h, (horizon / h).round() as usize)?.last().clone()))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = finals.windows(2).map(|w| (&w[0] - &w[1]).l2_norm()).collect();
    let order = (diffs[0] / diffs[1]).log2();
    rec.output("order", order);
    rec.check("order", order, Comparison::Ge, cfg.f64("order_min")?);

    let (steps, linear_dt) = (cfg.usize("linear_steps")?, cfg.f64("linear_dt")?);
    let free = evolve(&u0, &spec.scaled(0.0), steps as f64 * linear_dt, linear_dt, steps)?;
    let drift = (free.last().l2_norm() - u0.l2_norm()).abs() / u0.l2_norm();
    rec.output("linear_l2_drift", drift);
    rec.check("linear_l2_drift", drift, Comparison::Le, cfg.f64("linear_tol")?);
    rec.series.push(Series {
        name: "self_convergence".into(),
        x_label: "dt".into(),
        y_label: "difference".into(),
        points: diffs.iter().enumerate().map(|(i, &e)| (dt / 2f64.powi(i as i32), e)).collect(),
        fit: None,
        theory_slope: Some(4.0),
    });
    Ok(())
}
