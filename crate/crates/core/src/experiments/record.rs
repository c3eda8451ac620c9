use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fit::PowerLawFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Comparison {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Lt => value < threshold,
            Comparison::Le => value <= threshold,
            Comparison::Ge => value >= threshold,
            Comparison::Gt => value > threshold,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        })
    }
}

/// One pass/fail condition `value op threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub op: Comparison,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, op: Comparison, threshold: f64) -> Self {
        Check { name: name.into(), value, op, threshold, pass: op.holds(value, threshold) }
    }
}

/// A log-log data series for plotting, with an optional fit and reference
/// slope.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<PowerLawFit>,
    pub theory_slope: Option<f64>,
}

/// Per-sample rows written next to the main report.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a scenario run reports.
///
/// `pass` is the conjunction of the checks. Wall time, series and tables
/// are not serialised into the record itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub scenario: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub series: Vec<Series>,
    #[serde(skip)]
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub wall_time: f64,
}

impl ResultRecord {
    pub fn new(scenario: impl Into<String>, inputs: BTreeMap<String, String>) -> Self {
        ResultRecord {
            scenario: scenario.into(),
            inputs,
            outputs: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            series: Vec::new(),
            tables: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn output(&mut self, key: impl Into<String>, value: f64) {
        self.outputs.insert(key.into(), value);
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, op: Comparison, threshold: f64) {
        let c = Check::new(name, value, op, threshold);
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
