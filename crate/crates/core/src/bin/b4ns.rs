use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use b4ns_core::experiments::{emit_report, run_scenario, write_timing, ExperimentConfig, Format, Scenario};

/// Runs one experiment and writes its report under `<out>/<scenario>/`.
#[derive(Debug, Parser)]
#[command(name = "b4ns", version)]
struct Cli {
    /// One of the scenario names, e.g. `resonance-fuzz`.
    scenario: Scenario,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; `B4NS_OUT` takes precedence.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write SVG slope plots.
    #[arg(long)]
    plot: bool,
}

fn run(cli: Cli) -> b4ns_core::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| b4ns_core::Error::Config(format!("cannot start {n} threads: {e}")))?;
    }
    let mut config = ExperimentConfig::from_path(cli.scenario, &cli.config)?;
    if let Some(seed) = cli.seed {
        config.set("seed", &seed.to_string())?;
    }
    let record = run_scenario(&config)?;
    let out = std::env::var_os("B4NS_OUT").map(PathBuf::from).unwrap_or(cli.out).join(cli.scenario.name());
    let mut formats = vec![Format::Csv, Format::Json];
    if cli.plot {
        formats.push(Format::Svg);
    }
    let records = [record];
    emit_report(&records, &out, &formats)?;
    write_timing(&records, &out)?;
    let record = &records[0];
    for c in &record.checks {
        println!("{} {}: {:e} {} {:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.op, c.threshold);
    }
    println!(
        "{} {} ({:.2} s) -> {}",
        record.scenario,
        if record.pass { "passed" } else { "failed" },
        record.wall_time,
        out.display()
    );
    Ok(record.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
