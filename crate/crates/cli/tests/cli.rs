use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdi-cert"))
}

fn docs(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Perfect GHZ correlations for n = d = 2: the winning outcome with probability 1.
fn perfect_csv(p_win: f64) -> String {
    let mut s = String::from("x_1,x_2,y_1,y_2,b_1,b_2,p\n");
    for x1 in 0..2 {
        for x2 in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    let (b1, b2) = ((x1 + x2) % 2, (y2 + 2 - y1) % 2);
                    s += &format!("{x1},{x2},{y1},{y2},{b1},{b2},{p_win}\n");
                }
            }
        }
    }
    s
}

#[test]
fn score_worked_scenarios() {
    let out = run(&["score", docs("scenarios/ghz_ideal.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!((json(&out)["score"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = run(&["score", docs("scenarios/coloured_bsm.json").to_str().unwrap()]);
    assert!((json(&out)["score"].as_f64().unwrap() - 0.8).abs() < 1e-9);

    let out = run(&["score", docs("scenarios/appendix_d.json").to_str().unwrap()]);
    let expected = (3.0 - 1.0) / 3.0 + 1.0 / 9.0;
    assert!((json(&out)["score"].as_f64().unwrap() - expected).abs() < 1e-9);

    let out = run(&["score", docs("scenarios/explicit_bell.json").to_str().unwrap(), "--per-input"]);
    let v = json(&out);
    assert!((v["score"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["per_input"].as_array().unwrap().len(), 16);
}

#[test]
fn score_noisy_ghz_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = write(
        dir.path(),
        "noisy.json",
        r#"{"params": {"n": 3, "d": 2}, "state": {"kind": "noisy_ghz", "v": 0.5},
            "channels": {"kind": "clock_shift"}, "povm": {"kind": "ghz_basis"}}"#,
    );
    let out = run(&["score", noisy.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!((json(&out)["score"].as_f64().unwrap() - 0.5625).abs() < 1e-9);

    let bad_row = write(
        dir.path(),
        "bad.json",
        r#"{"params": {"n": 2, "d": 2}, "state": {"kind": "ghz"}, "channels": {"kind": "clock_shift"},
            "povm": [[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                     [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]],
                     [[0,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,0]],
                     [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0]]]}"#,
    );
    let out = run(&["score", bad_row.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("povm[3]"));

    let too_big = write(
        dir.path(),
        "big.json",
        r#"{"params": {"n": 5, "d": 3}, "state": {"kind": "ghz"},
            "channels": {"kind": "clock_shift"}, "povm": {"kind": "ghz_basis"}}"#,
    );
    assert_eq!(code(&run(&["score", too_big.to_str().unwrap()])), 5);
    assert_eq!(code(&run(&["score", "/nonexistent/file.json"])), 2);
}

#[test]
fn certify_from_scores() {
    let cases = [("0.9", true, 4), ("0.55", true, 1), ("0.5", false, 0)];
    for (s, gme, ops) in cases {
        let out = run(&["certify", "--score", s, "--n", "2", "--d", "2"]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        assert_eq!(v["gme_certified"].as_bool(), Some(gme), "score {s}");
        assert_eq!(v["certified_entangled_ops"].as_u64(), Some(ops), "score {s}");
        assert_eq!(v["thresholds"].as_array().unwrap().len(), 4);
    }
    assert_eq!(code(&run(&["certify", "--score", "1.5", "--n", "2", "--d", "2"])), 2);
    assert_eq!(code(&run(&["certify", "--score", "0.6", "--n", "6", "--d", "3"])), 5);
    let out = run(&["certify", "--score", "0.9", "--n", "2", "--d", "2", "--margin", "0.1"]);
    assert_eq!(json(&out)["certified_entangled_ops"].as_u64(), Some(3));
}

#[test]
fn certify_from_distributions() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.csv", &perfect_csv(1.0));
    let out = run(&["certify", "--distribution", good.to_str().unwrap(), "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["score"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["certified_entangled_ops"].as_u64(), Some(4));

    let short = write(dir.path(), "short.csv", &perfect_csv(0.5));
    let out = run(&["certify", "--distribution", short.to_str().unwrap(), "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 4);

    let malformed = write(dir.path(), "bad.csv", "x_1,x_2,y_1,y_2,b_1,b_2,p\n0,0,0,0,0,0,abc\n");
    let out = run(&["certify", "--distribution", malformed.to_str().unwrap(), "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:2"));

    let header = write(dir.path(), "header.csv", "x1,x2,y1,y2,b1,b2,p\n");
    let out = run(&["certify", "--distribution", header.to_str().unwrap(), "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 2);
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v,score,gme_certified,certified_entangled_ops,bound_1_over_d"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sweeps_follow_closed_forms() {
    let dir = tempfile::tempdir().unwrap();

    let out_path = dir.path().join("coloured.csv");
    let spec = docs("sweeps/coloured_bsm.json");
    let out = run(&["sweep", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out_path);
    assert_eq!(rows.len(), 101);
    for row in &rows {
        let v: f64 = row[0].parse().unwrap();
        let a: f64 = row[1].parse().unwrap();
        assert!((a - (1.0 + v) / 2.0).abs() < 1e-9);
        assert_eq!(row[2], "");
    }
    let first = std::fs::read(&out_path).unwrap();

    let out = run(&["sweep", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let out = run(&["sweep", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap(), "--force"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&out_path).unwrap(), first);

    let out_path = dir.path().join("ghz33.csv");
    let spec = docs("sweeps/noisy_ghz_3_3.json");
    assert_eq!(code(&run(&["sweep", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()])), 0);
    let threshold = 4.0 / 13.0;
    for row in csv_rows(&out_path) {
        let v: f64 = row[0].parse().unwrap();
        assert_eq!(row[2] == "true", v > threshold, "v = {v}");
    }

    let out_path = dir.path().join("bsm.csv");
    let spec = docs("sweeps/noisy_bsm_d2.json");
    assert_eq!(code(&run(&["sweep", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()])), 0);
    for row in csv_rows(&out_path) {
        let v: f64 = row[0].parse().unwrap();
        let ops: u64 = row[3].parse().unwrap();
        if (v - 5.0 / 6.0).abs() > 1e-6 {
            assert_eq!(ops == 4, v > 5.0 / 6.0, "v = {v}");
        }
        if (v - 1.0 / 3.0).abs() > 1e-6 {
            assert_eq!(ops >= 1, v > 1.0 / 3.0, "v = {v}");
        }
    }

    let bad = write(dir.path(), "bad.json", r#"{"scenario": {}, "grid": {"min": 0, "max": 1, "steps": 1}}"#);
    let out = run(&["sweep", bad.to_str().unwrap(), "--out", dir.path().join("x.csv").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn optimize_catalog_states() {
    let out = run(&["optimize", "--state", "ghz:3:2", "--restarts", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["best_score"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["trace_length"].as_u64().unwrap() >= 1);
    assert!(v.get("strategy").is_none());

    let out = run(&["optimize", "--state", "maximally_mixed:2:2", "--restarts", "5"]);
    assert!((json(&out)["best_score"].as_f64().unwrap() - 0.25).abs() < 1e-6);

    assert_eq!(code(&run(&["optimize", "--state", "ghz:5:3"])), 5);
    assert_eq!(code(&run(&["optimize", "--state", "nonsense"])), 2);
    assert_eq!(code(&run(&["optimize", "--state", "w", "--restarts", "0"])), 2);
}

#[test]
fn optimize_w_state_reaches_three_quarters() {
    let out = run(&["optimize", "--state", "w", "--restarts", "50"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["best_score"].as_f64().unwrap() >= 0.749);
}

#[test]
fn optimize_full_output_round_trips_as_a_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("best.json");
    let out = run(&[
        "optimize", "--state", "noisy_ghz:2:2:0.7", "--restarts", "2", "--seed", "3", "--full", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let best = v["best_score"].as_f64().unwrap();
    let scenario = write(dir.path(), "scenario.json", &v["strategy"].to_string());

    let out = run(&["score", scenario.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!((json(&out)["score"].as_f64().unwrap() - best).abs() < 1e-12);

    let out = run(&["optimize", "--scenario", scenario.to_str().unwrap(), "--restarts", "1"]);
    assert!(json(&out)["best_score"].as_f64().unwrap() >= best - 1e-12);

    let again = run(&[
        "optimize", "--state", "noisy_ghz:2:2:0.7", "--restarts", "2", "--seed", "3", "--full", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&again), 2);
}

#[test]
fn verify_and_environment() {
    let out = run(&["verify", "--suite", "oracle"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.5 == 0.5"));
    assert!(text.trim_end().ends_with("checks passed"));

    let out = bin()
        .args(["certify", "--score", "0.9", "--n", "2", "--d", "2"])
        .env("SDI_CERT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = bin()
        .args(["certify", "--score", "0.9", "--n", "2", "--d", "2"])
        .env("SDI_CERT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}
