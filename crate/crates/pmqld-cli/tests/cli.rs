//! End-to-end tests of the `pmqld` binary: report schema, determinism,
//! fixture reproduction, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pmqld"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PMQLD_SEED").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn describe_collapsed_form() {
    let out = run(&[
        "describe", "--theta", "1", "--alpha", "1", "--delta", "2", "--xmax", "2",
    ]);
    let doc = json(&out);
    assert_eq!(doc["schema_version"], "1.0");
    assert_eq!(doc["command"], "describe");
    let support = doc["results"]["support"].as_array().unwrap();
    let pmf: Vec<f64> = support
        .iter()
        .map(|r| r["pmf"].as_f64().unwrap())
        .collect();
    assert!((pmf[0] - 0.375).abs() < 1e-9);
    assert!((pmf[1] - 0.25).abs() < 1e-9);
    assert!((pmf[2] - 0.15625).abs() < 1e-9);
    // no timestamps unless requested
    assert!(doc.get("timestamps").is_none());
}

#[test]
fn sample_is_byte_identical_across_runs() {
    let args = [
        "sample", "--theta", "1", "--alpha", "1", "--delta", "2", "--n", "5", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["results"]["seed"], 42);
    assert_eq!(doc["results"]["samples"].as_array().unwrap().len(), 5);
}

#[test]
fn seed_env_variable_is_honored() {
    let from_env = bin()
        .args(["sample", "--theta", "1", "--alpha", "1", "--delta", "2", "--n", "8"])
        .env("PMQLD_SEED", "123")
        .output()
        .unwrap();
    let from_flag = run(&[
        "sample", "--theta", "1", "--alpha", "1", "--delta", "2", "--n", "8", "--seed", "123",
    ]);
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn pretty_sample_prints_one_integer_per_line() {
    let out = run(&[
        "sample", "--theta", "1", "--alpha", "1", "--delta", "2", "--n", "4", "--seed", "7",
        "--pretty",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# seed: 7");
    let rest: Vec<&str> = lines.collect();
    assert_eq!(rest.len(), 4);
    for line in rest {
        line.parse::<u64>().unwrap();
    }
}

#[test]
fn fit_reproduces_published_aic() {
    let out = run(&["fit", "--model", "pmqld", "--data", &fixture("seizure.csv")]);
    let doc = json(&out);
    let aic = doc["results"]["fit"]["aic"].as_f64().unwrap();
    assert!((aic - 1191.83).abs() <= 0.1, "AIC {aic}");
    assert_eq!(doc["inputs"]["n"], 351);
    let disp = doc["inputs"]["dispersion_index"].as_f64().unwrap();
    assert!((disp - 1.867).abs() < 5e-4);
}

#[test]
fn gof_reports_pooled_cells() {
    let out = run(&["gof", "--model", "pmqld", "--data", &fixture("seizure.csv")]);
    let doc = json(&out);
    let stat = doc["results"]["report"]["statistic"].as_f64().unwrap();
    assert!((stat - 2.93).abs() <= 0.1, "chi2 {stat}");
    assert_eq!(doc["results"]["report"]["df"], 5);
}

#[test]
fn compare_selects_published_winner() {
    let out = run(&["compare", "--data", &fixture("seizure.csv")]);
    let doc = json(&out);
    assert_eq!(doc["results"]["best_model"], "pmqld");
    let rows = doc["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    // rows arrive sorted by AIC
    let aics: Vec<f64> = rows
        .iter()
        .map(|r| r["fit"]["aic"].as_f64().unwrap())
        .collect();
    for w in aics.windows(2) {
        assert!(w[0] <= w[1]);
    }
}

#[test]
fn mc_study_emits_csv_layout() {
    let out = run(&[
        "mc-study", "--theta", "0.3", "--alpha", "0.5", "--delta", "2.5", "--sizes", "30",
        "--reps", "4", "--seed", "9", "--csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,param,avg,bias,mse,failures");
    assert_eq!(lines.count(), 3);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage error from clap
    let out = run(&["fit", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // invalid parameter domain
    let out = run(&[
        "describe", "--theta", "-1", "--alpha", "1", "--delta", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // missing data file
    let out = run(&["fit", "--data", "/no/such/file.csv"]);
    assert_eq!(out.status.code(), Some(3));
    // convergence-class failure: moment estimation on under-dispersed data
    let dir = std::env::temp_dir().join("pmqld_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("underdispersed.csv");
    std::fs::write(&path, "count,frequency\n2,50\n3,50\n").unwrap();
    let out = run(&[
        "fit", "--model", "pmqld", "--method", "mme", "--data", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn timestamps_are_opt_in() {
    let out = run(&[
        "describe", "--theta", "1", "--alpha", "1", "--delta", "2", "--xmax", "1",
        "--timestamps",
    ]);
    let doc = json(&out);
    assert!(doc["timestamps"]["started_unix_ms"].as_u64().is_some());
}
