use rand::Rng;
use rayon::prelude::*;

use super::task_rng;
use crate::experiments::{Comparison, ExperimentConfig, ResultRecord};
use crate::picard::{relative_discrepancy, resonance_factorization_check, resonance_omega, FrequencyBand, SignPattern};
use crate::variation::modulation_lemma_check;
use crate::{Error, Result};

const CHUNK: usize = 1 << 14;

/// Streams below this offset belong to the bulk fuzzing chunks.
const SIDE_STREAMS: u64 = 1 << 40;

fn chunks(count: usize) -> Vec<(u64, usize)> {
    (0..count.div_ceil(CHUNK)).map(|c| (c as u64, CHUNK.min(count - c * CHUNK))).collect()
}

pub(super) fn resonance(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (count, seed, range) = (cfg.usize("count")?, cfg.u64("seed")?, cfg.f64("range")?);
    let worst = chunks(count)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = task_rng(seed, c);
            let mut worst: f64 = 0.0;
            for _ in 0..len {
                let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(-range..=range));
                let (lhs, rhs) = resonance_factorization_check(x[0], x[1], x[2]);
                worst = worst.max(relative_discrepancy(lhs, rhs));
            }
            worst
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    rec.output("samples", count as f64);
    rec.output("max_relative_discrepancy", worst);
    rec.check("max_relative_discrepancy", worst, Comparison::Lt, cfg.f64("tol")?);

    let scales = cfg.f64_list("phase_scales")?;
    if scales.len() < 2 {
        return Err(Error::config("phase_scales needs at least two band scales"));
    }
    let samples = cfg.usize("phase_samples")?;
    let pattern = SignPattern::alternating(3)?;
    let maxima = scales
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let band = FrequencyBand::witness(n, 32)?;
            let mut rng = task_rng(seed, SIDE_STREAMS + i as u64);
            let mut top: f64 = 0.0;
            for _ in 0..samples {
                let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(band.lower()..=band.upper()));
                top = top.max(resonance_omega(pattern.combine(&x), &x, &pattern)?.abs());
            }
            Ok(top)
        })
        .collect::<Result<Vec<_>>>()?;
    for (n, m) in scales.iter().zip(&maxima) {
        rec.output(format!("max_band_phase_N{n}"), *m);
    }
    let growth = maxima[maxima.len() - 1] / maxima[0];
    rec.output("band_phase_growth", growth);
    rec.check("band_phase_growth", growth, Comparison::Lt, cfg.f64("growth_max")?);
    Ok(())
}

/// A constrained 5-tuple. Near-resonant draws spread the deficit
/// `Σ|ξ_j|⁴` evenly over the five slots, which is where the lemma is tight.
fn draw_tuple(rng: &mut impl Rng, range: f64, near: bool) -> ([f64; 5], [f64; 5]) {
    let mut xi = [0.0; 5];
    for x in &mut xi[..4] {
        *x = rng.random_range(-range..=range);
    }
    xi[4] = -(xi[0] + xi[1] + xi[2] + xi[3]);
    let mut tau = [0.0; 5];
    if near {
        let total: f64 = xi.iter().map(|x| x.powi(4)).sum();
        for (t, x) in tau.iter_mut().zip(&xi).take(4) {
            *t = x.powi(4) - total / 5.0 + 1e-6 * total * rng.random_range(-1.0..=1.0);
        }
    } else {
        let r4 = range.powi(4);
        for t in &mut tau[..4] {
            *t = rng.random_range(-r4..=r4);
        }
    }
    tau[4] = -(tau[0] + tau[1] + tau[2] + tau[3]);
    (tau, xi)
}

pub(super) fn modulation(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (count, seed, range) = (cfg.usize("count")?, cfg.u64("seed")?, cfg.f64("range")?);
    let (near_fraction, slack) = (cfg.f64("near_fraction")?, cfg.f64("slack")?);
    if !(0.0..=1.0).contains(&near_fraction) {
        return Err(Error::config(format!("near_fraction must lie in [0, 1], got {near_fraction}")));
    }
    let per_chunk = chunks(count)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = task_rng(seed, c);
            let (mut violations, mut margin, mut near_count) = (0u64, f64::INFINITY, 0u64);
            for _ in 0..len {
                let near = rng.random::<f64>() < near_fraction;
                near_count += u64::from(near);
                let (tau, xi) = draw_tuple(&mut rng, range, near);
                let (lhs, rhs, _) = modulation_lemma_check(&tau, &xi)?;
                violations += u64::from(lhs < rhs * (1.0 - slack));
                if rhs > 0.0 {
                    margin = margin.min(lhs / rhs);
                }
            }
            Ok((violations, margin, near_count))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: u64 = per_chunk.iter().map(|c| c.0).sum();
    let margin = per_chunk.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let near: u64 = per_chunk.iter().map(|c| c.2).sum();
    rec.output("samples", count as f64);
    rec.output("near_resonant_samples", near as f64);
    rec.output("min_lhs_over_rhs", margin);
    rec.output("violations", violations as f64);
    rec.check("violations", violations as f64, Comparison::Le, 0.0);
    Ok(())
}
