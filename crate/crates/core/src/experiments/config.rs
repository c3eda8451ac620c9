use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

/// The runnable experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    InflationCubic,
    InflationGeneral,
    ScatteringSmallData,
    ScalingInvariance,
    ResonanceFuzz,
    ModulationFuzz,
    StrichartzSample,
    VariationProps,
    SolverOrder,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::InflationCubic,
        Scenario::InflationGeneral,
        Scenario::ScatteringSmallData,
        Scenario::ScalingInvariance,
        Scenario::ResonanceFuzz,
        Scenario::ModulationFuzz,
        Scenario::StrichartzSample,
        Scenario::VariationProps,
        Scenario::SolverOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::InflationCubic => "inflation-cubic",
            Scenario::InflationGeneral => "inflation-general",
            Scenario::ScatteringSmallData => "scattering-smalldata",
            Scenario::ScalingInvariance => "scaling-invariance",
            Scenario::ResonanceFuzz => "resonance-fuzz",
            Scenario::ModulationFuzz => "modulation-fuzz",
            Scenario::StrichartzSample => "strichartz-sample",
            Scenario::VariationProps => "variation-props",
            Scenario::SolverOrder => "solver-order",
        }
    }

    /// Keys a config for this scenario may set, with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Scenario::InflationCubic => &[
                ("s", "-0.25"),
                ("scales", "16,32,64,128,256"),
                ("nodes", "32"),
                ("t", "rule"),
                ("slope_tol", "0.15"),
                ("r2_min", "0.98"),
            ],
            Scenario::InflationGeneral => &[
                ("d", "1"),
                ("m", "2"),
                ("s", "-3"),
                ("scales", "16,32,64,128,256"),
                ("nodes", "32"),
                ("t_coeff", "1"),
                ("derivative", "modulus"),
                ("patterns", "all"),
                ("slope_tol", "0.2"),
                ("critical_tol", "0.15"),
                ("mc_samples", "100000"),
                ("seed", "5"),
            ],
            Scenario::ScatteringSmallData => &[
                ("eps", "0.01"),
                ("n", "2048"),
                ("length", "1024"),
                ("band_lo", "0.5"),
                ("band_hi", "1.0"),
                ("horizon", "10"),
                ("dt", "0.005"),
                ("stride", "20"),
                ("after", "1"),
                ("final_tol", "1e-6"),
            ],
            Scenario::ScalingInvariance => &[
                ("lambda", "2"),
                ("d", "1"),
                ("m", "4"),
                ("n", "64"),
                ("length", "50.26548245743669"),
                ("eps", "0.5"),
                ("horizon", "1"),
                ("dt", "0.001"),
                ("stride", "100"),
                ("traj_tol", "1e-4"),
                ("norm_tol", "1e-12"),
            ],
            Scenario::ResonanceFuzz => &[
                ("count", "1000000"),
                ("seed", "1"),
                ("range", "10"),
                ("tol", "1e-10"),
                ("phase_samples", "100000"),
                ("phase_scales", "16,256"),
                ("growth_max", "2"),
            ],
            Scenario::ModulationFuzz => {
                &[("count", "1000000"), ("seed", "2"), ("range", "10"), ("near_fraction", "0.5"), ("slack", "1e-9")]
            }
            Scenario::StrichartzSample => &[
                ("count", "100"),
                ("seed", "3"),
                ("bandwidth", "4"),
                ("octaves", "2"),
                ("p", "4"),
                ("q", "inf"),
                ("time_coeff", "0.5"),
                ("samples", "256"),
                ("ratio_max", "8"),
            ],
            Scenario::VariationProps => &[
                ("seed", "4"),
                ("paths", "1000"),
                ("max_len", "12"),
                ("atoms", "10000"),
                ("atom_exponents", "1,2,4"),
                ("ensemble", "100"),
                ("ensemble_samples", "2048"),
                ("ensemble_dt", "0.001953125"),
                ("jumps", "16"),
                ("modulations", "32,64,128,256,512"),
                ("ratio_max", "10"),
                ("spearman_max", "0.2"),
            ],
            Scenario::SolverOrder => &[
                ("n", "16"),
                ("length", "6.283185307179586"),
                ("amplitude", "0.6"),
                ("horizon", "0.08"),
                ("dt", "0.00015625"),
                ("order_min", "3.7"),
                ("linear_steps", "10000"),
                ("linear_dt", "0.01"),
                ("linear_tol", "1e-12"),
            ],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::config(format!("unknown scenario `{s}`")))
    }
}

/// A scenario plus its parameters, defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    scenario: Scenario,
    params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Defaults only.
    pub fn new(scenario: Scenario) -> Self {
        let params = scenario.defaults().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentConfig { scenario, params }
    }

    /// Parses `key = value` lines; `#` starts a comment. A `scenario` key,
    /// if present, must agree with `scenario`. Unknown keys are errors.
    pub fn parse(scenario: Scenario, text: &str) -> Result<Self> {
        let mut cfg = Self::new(scenario);
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            if key == "scenario" {
                if value != scenario.name() {
                    return Err(Error::config(format!("config is for `{value}`, not `{scenario}`")));
                }
                continue;
            }
            cfg.set(key, value).map_err(|e| match e {
                Error::Config(msg) => Error::config(format!("line {}: {msg}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn from_path(scenario: Scenario, path: &Path) -> Result<Self> {
        Self::parse(scenario, &std::fs::read_to_string(path)?)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !self.params.contains_key(key) {
            return Err(Error::config(format!("unknown key `{key}` for scenario `{}`", self.scenario)));
        }
        self.params.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::config(format!("scenario `{}` has no key `{key}`", self.scenario)))
    }

    pub fn parse_as<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.get(key)?;
        raw.parse()
            .map_err(|_| Error::config(format!("`{key}` = `{raw}` is not a valid {}", std::any::type_name::<T>())))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        match self.get(key)? {
            "inf" | "infinity" => Ok(f64::INFINITY),
            _ => self.parse_as(key),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.parse_as(key)
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.parse_as(key)
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.get(key)?
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| Error::config(format!("`{key}` must be a comma-separated list of numbers")))
            })
            .collect()
    }
}
