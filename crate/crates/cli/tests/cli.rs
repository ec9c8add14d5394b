use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qeccov(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qeccov"));
    cmd.args(args).env_remove("QECCOV_TOL_SCALE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    qeccov(&args, &[])
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn trivial_code_under_projective_dephasing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(
        "infidelity",
        &fixture("infidelity_trivial_dephasing.json"),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&out);
    assert!((r["results"]["epsilon"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(r["results"]["chain"]["fid_le_trace"], json!(true));
    assert_eq!(r["results"]["chain"]["trace_le_frobenius"], json!(true));
    assert_eq!(r["passed"], json!(true));
    assert!(r.get("wall_time_s").is_none());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(
        stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 5,
        "{stdout}"
    );
}

#[test]
fn every_fixture_passes() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let cfg: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let command = cfg["command"].as_str().unwrap();
        let out = dir.path().join(path.file_name().unwrap());
        let o = run(command, &path, &out, &[]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}: {}{}",
            path.display(),
            String::from_utf8_lossy(&o.stdout),
            stderr(&o)
        );
    }
}

#[test]
fn failed_assertion_exits_with_one_and_still_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &json!({
            "encoding": {"file": fixture("parts/trivial_qubit_code.json")},
            "noise": {"file": fixture("parts/projective_dephasing.json")},
            "expect": [{"field": "epsilon", "value": 0.25, "tol": 1e-12}]
        }),
    );
    let out = dir.path().join("r.json");
    let o = run("infidelity", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], json!(false));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL epsilon = 0.25"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");

    let missing = run("infidelity", &dir.path().join("nope.json"), &out, &[]);
    assert_eq!(missing.status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n \"seed\": 1,\n \"noise\": [\n}").unwrap();
    let o = run("infidelity", &bad, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let mismatch = write_config(
        dir.path(),
        "m.json",
        &json!({
            "encoding": {"builtin": "identity", "params": {"d": 3}},
            "noise": {"builtin": "dephasing", "params": {"p": 0.1}}
        }),
    );
    let o = run("infidelity", &mismatch, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("`encoding`") && msg.contains("`noise`"), "{msg}");

    let unknown = write_config(
        dir.path(),
        "u.json",
        &json!({"random": {"quantity": "infidelity_sq", "dL": 2}}),
    );
    let o = run("random-avg", &unknown, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dL"), "{}", stderr(&o));

    let bad_kraus = write_config(
        dir.path(),
        "k.json",
        &json!({
            "encoding": {"builtin": "identity", "params": {"d": 2}},
            "noise": {"kraus": [{"rows": 2, "cols": 2, "data": [1, 0, 0, 1]}, {"rows": 2, "cols": 2, "data": [1, 0, 0, 1]}]}
        }),
    );
    let o = run("infidelity", &bad_kraus, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.noise"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn tolerance_scale_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let cfg = fixture("infidelity_trivial_dephasing.json");
    let args = [
        "infidelity",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(
        qeccov(&args, &[("QECCOV_TOL_SCALE", "-1")]).status.code(),
        Some(2)
    );
    let o = qeccov(&args, &[("QECCOV_TOL_SCALE", "10")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&out)["tolerance_scale"].as_f64(), Some(10.0));
}

#[test]
fn reports_are_reproducible_and_track_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("random_avg_dephasing.json");
    let (a, b, c) = (
        dir.path().join("a.json"),
        dir.path().join("b.json"),
        dir.path().join("c.json"),
    );
    for p in [&a, &b] {
        assert_eq!(
            run("random-avg", &cfg, p, &["--samples", "300"]).status.code(),
            Some(0)
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    run("random-avg", &cfg, &c, &["--samples", "300", "--seed", "8"]);
    let (ra, rc) = (report(&a), report(&c));
    assert_ne!(ra["config_sha256"], rc["config_sha256"]);
    assert_ne!(ra["results"]["mean"], rc["results"]["mean"]);
    assert_eq!(rc["results"]["seed"], json!(8));
    assert_eq!(ra["results"]["samples"], json!(300));
}

#[test]
fn timing_is_opt_in_and_outside_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let base = json!({
        "encoding": {"builtin": "identity", "params": {"d": 2}},
        "noise": {"builtin": "amplitude_damping", "params": {"gamma": 0.3}}
    });
    let mut timed = base.clone();
    timed["timing"] = json!(true);
    let plain_cfg = write_config(dir.path(), "p.json", &base);
    let timed_cfg = write_config(dir.path(), "t.json", &timed);
    let (p, t) = (dir.path().join("p.out"), dir.path().join("t.out"));
    run("infidelity", &plain_cfg, &p, &[]);
    run("infidelity", &timed_cfg, &t, &[]);
    let (rp, rt) = (report(&p), report(&t));
    assert!(rt["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(rp.get("wall_time_s").is_none());
    assert_eq!(rp["config_sha256"], rt["config_sha256"]);
}

#[test]
fn floats_are_written_with_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    run(
        "random-avg",
        &fixture("random_avg_noncovariance.json"),
        &out,
        &["--samples", "50"],
    );
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"analytic\": 1.9333333333333333e0"), "{text}");
    let r = report(&out);
    assert_eq!(r["results"]["analytic"].as_f64(), Some(29.0 / 15.0));
}

#[test]
fn dephasing_sweep_writes_csv_rising_from_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = run("infidelity", &fixture("sweep_dephasing_p.json"), &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "p");
    let eps_col = header.iter().position(|h| h == "epsilon").unwrap();
    let eps: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[eps_col].parse().unwrap())
        .collect();
    assert_eq!(eps.len(), 11);
    assert_eq!(eps[0], 0.0);
    assert!(eps.iter().all(|e| e.is_finite() && *e >= 0.0));
}

#[test]
fn average_sweep_over_physical_dimension_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("avg.csv");
    let o = run(
        "random-avg",
        &fixture("sweep_average_d_s.json"),
        &out,
        &["--samples", "100"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["d_L", "d_A", "d_S", "samples", "seed", "quantity", "mean", "stderr", "analytic", "z_score"]
    );
    let analytic: Vec<f64> = rdr.records().map(|r| r.unwrap()[8].parse().unwrap()).collect();
    assert!(analytic.windows(2).all(|w| w[1] < w[0]), "{analytic:?}");
}

#[test]
fn sweep_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let base = json!({
        "format": "csv",
        "encoding": {"builtin": "identity", "params": {"d": 2}},
        "noise": {"builtin": "dephasing", "params": {"p": 0.1}},
    });
    let mut empty = base.clone();
    empty["sweep"] = json!({"axis": "p", "values": []});
    let o = run(
        "infidelity",
        &write_config(dir.path(), "e.json", &empty),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"), "{}", stderr(&o));

    let mut wrong = base.clone();
    wrong["sweep"] = json!({"axis": "gamma", "values": [0.1]});
    assert_eq!(
        run(
            "infidelity",
            &write_config(dir.path(), "w.json", &wrong),
            &out,
            &[]
        )
        .status
        .code(),
        Some(2)
    );

    let mut nonscalar = base;
    nonscalar["noise"] = json!({"builtin": "single_site", "params": {"site": 0, "n_qubits": 1},
                                "inner": {"builtin": "dephasing", "params": {"p": 0.1}}});
    nonscalar["encoding"] = json!({"builtin": "identity", "params": {"d": 2}});
    nonscalar["sweep"] = json!({"axis": "d_S", "values": [2]});
    assert_eq!(
        run(
            "infidelity",
            &write_config(dir.path(), "n.json", &nonscalar),
            &out,
            &[]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn noncovariance_reports_generator_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(
        "noncovariance",
        &fixture("noncovariance_covariant_code.json"),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["covariant"], json!(true));
    assert_eq!(r["results"]["d_G"], json!(1));
    assert_eq!(r["results"]["normalization"]["kind"], json!("uniform"));
}

#[test]
fn command_must_match_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(
        "tradeoff",
        &fixture("infidelity_trivial_dephasing.json"),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        qeccov(&["bogus", "--config", "x", "--out", "y"], &[])
            .status
            .code(),
        Some(2)
    );
}
