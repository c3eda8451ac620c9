use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use b4ns_core::experiments::{emit_report, run_scenario, ExperimentConfig, Format, Scenario};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn quick(scenario: Scenario, text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(scenario, text).unwrap()
}

fn csv_bytes(config: &ExperimentConfig, dir: &Path) -> Vec<u8> {
    let record = run_scenario(config).unwrap();
    emit_report(&[record], dir, &[Format::Csv, Format::Json]).unwrap();
    let mut bytes = fs::read(dir.join("results.csv")).unwrap();
    bytes.extend(fs::read(dir.join("results.json")).unwrap());
    bytes
}

#[test]
fn shipped_configs_parse() {
    for scenario in Scenario::ALL {
        let path = configs().join(format!("{scenario}.conf"));
        let config = ExperimentConfig::from_path(scenario, &path).unwrap();
        assert_eq!(config.params(), ExperimentConfig::new(scenario).params(), "{scenario} drifted from its defaults");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        quick(Scenario::ResonanceFuzz, "count = 50000\nphase_samples = 2000\n"),
        quick(
            Scenario::VariationProps,
            "paths = 50\natoms = 200\nensemble = 3\nensemble_samples = 256\njumps = 4\nmodulations = 32,64,128,256\n",
        ),
        quick(Scenario::InflationCubic, "scales = 16,32,64,128\n"),
    ];
    for config in &cases {
        let a = csv_bytes(config, &dir.path().join("a"));
        let b = csv_bytes(config, &dir.path().join("b"));
        assert_eq!(a, b, "{}", config.scenario());
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let config = quick(Scenario::ModulationFuzz, "count = 100000\n");
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| run_scenario(&config)).unwrap();
    let b = wide.install(|| run_scenario(&config)).unwrap();
    assert_eq!(a.outputs, b.outputs);
}

#[test]
fn scenarios_are_isolated() {
    let fuzz = quick(Scenario::ResonanceFuzz, "count = 20000\nphase_samples = 1000\n");
    let order = quick(Scenario::SolverOrder, "linear_steps = 10\n");
    let first = run_scenario(&fuzz).unwrap().outputs;
    run_scenario(&order).unwrap();
    assert_eq!(run_scenario(&fuzz).unwrap().outputs, first);
}

#[test]
fn failures_carry_scenario_context() {
    let config = quick(Scenario::InflationCubic, "scales = 16,32\n");
    let err = run_scenario(&config).unwrap_err().to_string();
    assert!(err.contains("inflation-cubic") && err.contains("4"), "{err}");
}

fn b4ns(args: &[&str], out: &Path) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_b4ns")).args(args).env("B4NS_OUT", out).output().unwrap();
    let text = String::from_utf8_lossy(&output.stdout).to_string() + &String::from_utf8_lossy(&output.stderr);
    (output.status.code().unwrap(), text)
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("fuzz.conf");
    fs::write(&conf, "scenario = resonance-fuzz\ncount = 10000\nphase_samples = 1000\n").unwrap();
    let out = dir.path().join("env-out");
    let (code, text) =
        b4ns(&["resonance-fuzz", "--config", conf.to_str().unwrap(), "--out", "ignored", "--threads", "2"], &out);
    assert_eq!(code, 0, "{text}");
    for file in ["results.csv", "results.json", "timing.csv"] {
        assert!(out.join("resonance-fuzz").join(file).exists(), "{file}");
    }
    assert!(!Path::new("ignored").exists());

    fs::write(&conf, "count = 10000\nphase_samples = 1000\ntol = 1e-300\n").unwrap();
    let (code, text) = b4ns(&["resonance-fuzz", "--config", conf.to_str().unwrap(), "--seed", "9"], &out);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("FAIL max_relative_discrepancy"), "{text}");
    let csv = fs::read_to_string(out.join("resonance-fuzz/results.csv")).unwrap();
    assert!(csv.contains("seed=9"), "{csv}");

    fs::write(&conf, "cnt = 10\n").unwrap();
    let (code, text) = b4ns(&["resonance-fuzz", "--config", conf.to_str().unwrap()], &out);
    assert_eq!(code, 2);
    assert!(text.contains("cnt"), "{text}");

    fs::write(&conf, "scenario = modulation-fuzz\n").unwrap();
    let (code, _) = b4ns(&["resonance-fuzz", "--config", conf.to_str().unwrap()], &out);
    assert_eq!(code, 2);

    fs::write(&conf, "").unwrap();
    let (code, _) = b4ns(&["solver-order", "--config", conf.to_str().unwrap(), "--seed", "3"], &out);
    assert_eq!(code, 2);
}

#[test]
fn cli_plots_inflation_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let conf = configs().join("inflation-cubic.conf");
    let (code, text) = b4ns(&["inflation-cubic", "--config", conf.to_str().unwrap(), "--plot"], dir.path());
    assert_eq!(code, 0, "{text}");
    let svg = fs::read_to_string(dir.path().join("inflation-cubic/inflation-cubic-hs_norm.svg")).unwrap();
    assert!(svg.contains("class=\"fit\"") && svg.contains("class=\"theory\""));
}
