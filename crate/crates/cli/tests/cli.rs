use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sidur(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidur"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect(),
        Err(_) => Vec::new(),
    };
    names.sort();
    names
}

#[test]
fn missing_input_exits_two_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = sidur(dir.path(), &["impute", "--input", "absent/raw.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent/raw.csv"));

    let out = sidur(dir.path(), &["best"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.json"));
}

#[test]
fn broken_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        "{\"estimation\": {\"swarm\": 3}}",
    )
    .unwrap();
    let out = sidur(dir.path(), &["--config", "run.json", "fit"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.json"));
}

#[test]
fn imputation_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let first = sidur(dir.path(), &["impute", "--output", "a.csv"]);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a.lines().count(), 161);

    let second = sidur(
        dir.path(),
        &["impute", "--input", "a.csv", "--output", "b.csv"],
    );
    assert!(second.status.success());
    assert_eq!(
        a,
        std::fs::read_to_string(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn short_fit_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--seed",
        "5",
        "fit",
        "--swarm-size",
        "6",
        "--iterations",
        "3",
    ];
    let mut runs = Vec::new();
    for out in ["one", "two"] {
        let mut a = vec!["--out", out];
        a.extend_from_slice(&args);
        let r = sidur(dir.path(), &a);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        runs.push(std::fs::read(dir.path().join(out).join("params.json")).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let p = json(&dir.path().join("one/params.json"));
    assert!((p["rho"].as_f64().unwrap() - 0.0499).abs() <= 0.001);
    assert_eq!(p["seed"], 5);
    assert_eq!(p["setup"]["testable"], "exact");
    let trace = std::fs::read_to_string(dir.path().join("one/pso_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 5);
    let curves = std::fs::read_to_string(dir.path().join("one/fit_curves.csv")).unwrap();
    assert!(curves.starts_with("k,date,u,y1_data,y1_model"));

    let r = sidur(
        dir.path(),
        &[
            "--out",
            "three",
            "--assumption5",
            "fit",
            "--swarm-size",
            "4",
            "--iterations",
            "1",
        ],
    );
    assert!(r.status.success());
    assert_eq!(
        json(&dir.path().join("three/params.json"))["setup"]["testable"],
        "approximate"
    );
}

#[test]
fn fitted_parameters_feed_the_policy_commands() {
    let dir = tempfile::tempdir().unwrap();
    let fit = sidur(
        dir.path(),
        &[
            "fit",
            "--swarm-size",
            "4",
            "--iterations",
            "1",
            "--kappa",
            "12",
        ],
    );
    assert!(fit.status.success());
    let sim = sidur(dir.path(), &["simulate", "--scenario", "no-unlock"]);
    assert!(
        sim.status.success(),
        "{}",
        String::from_utf8_lossy(&sim.stderr)
    );
    let traj = std::fs::read_to_string(dir.path().join("out/trajectory_no-unlock.csv")).unwrap();
    assert!(traj.lines().next().unwrap().contains("R_t"));
    assert_eq!(traj.lines().count(), 161);
}

#[test]
fn best_with_published_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let r = sidur(
        dir.path(),
        &[
            "best",
            "--published",
            "--date",
            "2020-03-01",
            "--sweep",
            "2020-01-24",
            "2020-03-13",
        ],
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let b = json(&dir.path().join("out/best.json"));
    assert_eq!(b["t_star"], 37.0);
    let c = b["c_star"].as_f64().unwrap();
    assert!(c > 0.0);
    let sweep = std::fs::read_to_string(dir.path().join("out/best_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 51);
    let row = sweep.lines().find(|l| l.starts_with("2020-03-01")).unwrap();
    let peak: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(peak, b["peak_xI"].as_f64().unwrap());
}

#[test]
fn cost_record_has_the_documented_fields() {
    let dir = tempfile::tempdir().unwrap();
    let r = sidur(
        dir.path(),
        &["--assumption5", "cost", "--published", "--grid", "5"],
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let c = json(&dir.path().join("out/cost.json"));
    for key in [
        "C",
        "T",
        "xi_star",
        "peak1",
        "peak2",
        "iterations",
        "newton_trace",
    ] {
        assert!(c.get(key).is_some(), "missing {key}");
    }
    let (cc, t) = (c["C"].as_f64().unwrap(), c["T"].as_f64().unwrap());
    assert!((cc * t - 2_038_037.0).abs() < 1e-3);
    let grid = std::fs::read_to_string(dir.path().join("out/cost_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 6);
}

#[test]
fn failures_leave_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let r = sidur(dir.path(), &["cost", "--published", "--rmax=-5"]);
    assert_eq!(r.status.code(), Some(1));
    let r = sidur(dir.path(), &["best", "--published", "--date", "2020-13-01"]);
    assert_eq!(r.status.code(), Some(1));
    let r = sidur(dir.path(), &["best", "--published", "--date", "2021-01-01"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(listing(&dir.path().join("out")).is_empty());
}

#[test]
fn actual_scenario_reproduces_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let r = sidur(
        dir.path(),
        &["predict", "--published", "--scenario", "actual"],
    );
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    for file in ["icu.csv", "deaths.csv"] {
        let mut rdr = csv::Reader::from_path(dir.path().join("out").join(file)).unwrap();
        for rec in rdr.records() {
            let rec = rec.unwrap();
            assert_eq!(rec[3], rec[4]);
        }
    }
    let f = json(&dir.path().join("out/outcome_fit.json"));
    assert_eq!(f["icu_peak_reduction_pct"], 0.0);
    assert_eq!(f["deaths_final_reduction_pct"], 0.0);
    assert_eq!(f["deaths"]["e"].as_array().unwrap().len(), 10);
    assert_eq!(
        listing(&dir.path().join("out")),
        ["deaths.csv", "icu.csv", "outcome_fit.json"]
    );
}
