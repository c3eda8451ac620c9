use rayon::prelude::*;

use crate::evolution::{Derivative, EquationSpec};
use crate::experiments::{Comparison, ExperimentConfig, ResultRecord, Series};
use crate::picard::{
    cubic_lower_constant, general_iterate, general_iterate_monte_carlo, inflation_slope, small_time_rule,
    third_iterate_cubic, FrequencyBand, IterateResult, TENSOR_COST_LIMIT,
};
use crate::spectral::critical_exponent;
use crate::{Error, Result};

fn series(name: &str, results: &[IterateResult], theory: f64) -> Result<Series> {
    Ok(Series {
        name: name.to_string(),
        x_label: "N".into(),
        y_label: "H^s norm".into(),
        points: results.iter().map(|r| (r.scale, r.hs_norm)).collect(),
        fit: Some(inflation_slope(results)?),
        theory_slope: Some(theory),
    })
}

pub(super) fn cubic(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let s = cfg.f64("s")?;
    let scales = cfg.f64_list("scales")?;
    let nodes = cfg.usize("nodes")?;
    let t = match cfg.get("t")? {
        "rule" => small_time_rule(&scales)?,
        _ => cfg.f64("t")?,
    };
    let results = scales
        .par_iter()
        .map(|&n| third_iterate_cubic(s, n, t, &FrequencyBand::witness(n, nodes)?))
        .collect::<Result<Vec<_>>>()?;
    let fit = inflation_slope(&results)?;
    let theory = -2.0 * s;
    let t_omega = results.iter().map(|r| r.extra["t_omega_max"]).fold(0.0, f64::max);
    let lower: Vec<f64> = results.iter().map(cubic_lower_constant).collect();
    for r in &results {
        rec.output(format!("hs_norm_N{}", r.scale), r.hs_norm);
    }
    rec.output("t", t);
    rec.output("t_omega_max", t_omega);
    rec.output("slope", fit.slope);
    rec.output("r2", fit.r2);
    rec.output("theory_slope", theory);
    rec.output("lower_constant_min", lower.iter().copied().fold(f64::INFINITY, f64::min));
    rec.output("lower_constant_max", lower.iter().copied().fold(0.0, f64::max));
    rec.check("t_omega_max", t_omega, Comparison::Le, 0.5 * (1.0 + 1e-12));
    rec.check("slope_error", (fit.slope - theory).abs(), Comparison::Le, cfg.f64("slope_tol")?);
    rec.check("r2", fit.r2, Comparison::Ge, cfg.f64("r2_min")?);
    rec.series.push(series("hs_norm", &results, theory)?);
    Ok(())
}

fn general_spec(cfg: &ExperimentConfig, d: usize, m: usize) -> Result<EquationSpec> {
    let derivative = match cfg.get("derivative")? {
        "modulus" => Derivative::Modulus,
        "coordinate" => Derivative::Coordinate(0),
        other => return Err(Error::config(format!("derivative must be `modulus` or `coordinate`, got `{other}`"))),
    };
    match cfg.get("patterns")? {
        "all" => EquationSpec::all_sign_patterns(d, m, derivative),
        _ => EquationSpec::monomial(d, m, cfg.usize("patterns")?, derivative),
    }
}

fn general_run(cfg: &ExperimentConfig, spec: &EquationSpec, s: f64, scales: &[f64]) -> Result<Vec<IterateResult>> {
    let (nodes, t_coeff) = (cfg.usize("nodes")?, cfg.f64("t_coeff")?);
    let tensor = spec.dim() * (spec.degree() - 1) <= TENSOR_COST_LIMIT;
    let (samples, seed) = (cfg.usize("mc_samples")?, cfg.u64("seed")?);
    scales
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let t = t_coeff * n.powi(-4);
            if tensor {
                general_iterate(spec, s, n, t, nodes)
            } else {
                general_iterate_monte_carlo(spec, s, n, t, nodes, samples, seed.wrapping_add(i as u64))
            }
        })
        .collect()
}

pub(super) fn general(cfg: &ExperimentConfig, rec: &mut ResultRecord) -> Result<()> {
    let (d, m, s) = (cfg.usize("d")?, cfg.usize("m")?, cfg.f64("s")?);
    let spec = general_spec(cfg, d, m)?;
    let scales = cfg.f64_list("scales")?;
    let sc = critical_exponent(d, m)?;
    let theory = |s: f64| -((m - 1) as f64) * s + ((m - 1) * d) as f64 / 2.0 - 3.0;

    let results = general_run(cfg, &spec, s, &scales)?;
    let fit = inflation_slope(&results)?;
    let critical = general_run(cfg, &spec, sc, &scales)?;
    let fit_c = inflation_slope(&critical)?;
    for r in &results {
        rec.output(format!("hs_norm_N{}", r.scale), r.hs_norm);
    }
    rec.output("s_c", sc);
    rec.output("slope", fit.slope);
    rec.output("r2", fit.r2);
    rec.output("theory_slope", theory(s));
    rec.output("critical_slope", fit_c.slope);
    rec.output("critical_r2", fit_c.r2);
    rec.check("slope_error", (fit.slope - theory(s)).abs(), Comparison::Le, cfg.f64("slope_tol")?);
    rec.check("critical_slope_error", (fit_c.slope - theory(sc)).abs(), Comparison::Le, cfg.f64("critical_tol")?);
    rec.series.push(series("hs_norm", &results, theory(s))?);
    rec.series.push(series("hs_norm_critical", &critical, theory(sc))?);
    Ok(())
}
