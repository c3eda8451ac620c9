//! Reproducible experiments: configs, scenario runners and reports.

mod config;
mod fit;
pub mod record;
mod report;
mod scenarios;

pub use config::{ExperimentConfig, Scenario};
pub use fit::{fit_power_law, PowerLawFit};
pub use record::{Check, Comparison, ResultRecord, Series, Table};
pub use report::{emit_report, format_float, results_csv, series_svg, table_csv, write_timing, Format};
pub use scenarios::{run_scenario, spearman};
