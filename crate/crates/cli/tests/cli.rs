use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn forerunner(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forerunner"))
        .arg("--output-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Header and numeric rows of a CSV file; `nan` parses to NaN.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn written(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stdout).lines().map(str::to_string).collect()
}

#[test]
fn trace_rows_are_consistent() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(
        dir.path(),
        &["trace", "--solver", "rel-series", "--x", "1", "--omega0", "0.9", "--t0", "0", "--t1", "6", "--dt", "0.25"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("trace_rel-series_x1_w0.9.csv");
    assert_eq!(written(&o), vec![path.display().to_string()]);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["x", "t", "re", "im", "density"]);
    assert_eq!(rows.len(), 25);
    for r in &rows {
        assert!((r[4] - (r[2] * r[2] + r[3] * r[3])).abs() <= 1e-12);
        if r[1] < 1.0 {
            assert_eq!(r[4], 0.0);
        }
    }
    assert_eq!(rows[4][4], 1.0);
    let text = fs::read_to_string(&path).unwrap();
    let cell = text.lines().nth(3).unwrap().split(',').nth(2).unwrap();
    let digits = cell.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 17, "{cell}");
}

#[test]
fn omega_av_column() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(
        dir.path(),
        &[
            "trace", "--solver", "rel-series", "--x", "0.5", "--omega0", "0.7", "--t0", "0", "--t1", "1000", "--dt",
            "500", "--omega-av",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("trace_rel-series_x0.5_w0.7.csv"));
    assert_eq!(header.last().unwrap(), "omega_av");
    // before the front the phase is undefined
    assert!(rows[0][5].is_nan());
    assert!((rows[2][5] - 0.7).abs() <= 1e-4, "{}", rows[2][5]);
}

#[test]
fn fdtd_traces_follow_closed_forms() {
    let dir = TempDir::new().unwrap();
    let args = |s: &'static str| ["trace", "--solver", s, "--x", "2", "--omega0", "0.5", "--t0", "0", "--t1", "8", "--dt", "0.5"];
    for (oracle, fdtd, tol) in [("rel-series", "rel-fdtd", 1e-3), ("nr-w", "nr-fdtd", 2e-3)] {
        for s in [oracle, fdtd] {
            let o = forerunner(dir.path(), &args(s));
            assert!(o.status.success(), "{s}: {}", stderr(&o));
        }
        let (_, a) = read_csv(&dir.path().join(format!("trace_{oracle}_x2_w0.5.csv")));
        let (_, b) = read_csv(&dir.path().join(format!("trace_{fdtd}_x2_w0.5.csv")));
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            if p[1] >= 2.1 {
                let e = ((p[2] - q[2]).powi(2) + (p[3] - q[3]).powi(2)).sqrt();
                assert!(e <= tol, "{fdtd} t = {}: {e}", p[1]);
            }
        }
    }
}

#[test]
fn snapshot_and_saddle() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(
        dir.path(),
        &["snapshot", "--t", "3", "--omega0", "0.5", "--x0", "0", "--x1", "4", "--dx", "0.5"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.path().join("snapshot_rel-series_t3_w0.5.csv"));
    assert_eq!(rows.len(), 9);
    // the source sits at x = 0 and nothing has reached beyond x = t
    assert!((rows[0][4] - 1.0).abs() < 1e-12);
    assert_eq!(rows[7][4], 0.0);
    let o = forerunner(
        dir.path(),
        &["snapshot", "--solver", "saddle", "--t", "3", "--omega0", "0.5", "--x0", "1", "--x1", "4", "--dx", "1"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn forerunner_report_fields() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(dir.path(), &["forerunner", "--x", "100", "--omega0", "0.99"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("forerunner_x100_w0.99.json")).unwrap()).unwrap();
    assert!((v["tau"].as_f64().unwrap() - 708.881205008336).abs() < 1e-9);
    assert!((v["margin_positive"].as_f64().unwrap() - 13.966).abs() < 1e-3);
    for key in ["pole_modulus", "saddle_plus_modulus", "saddle_minus_modulus", "upper_envelope", "ratio"] {
        assert!(v[key].as_f64().unwrap() > 0.0, "{key}");
    }
    assert!(v["extremum_times"]["t_max_t_lower"]["raw"].as_f64().is_some());
}

#[test]
fn validate_passes_and_fails() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(dir.path(), &["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("validate.json")).unwrap()).unwrap();
    let checks = v.as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["passed"].as_bool().unwrap()));
    // a coarse Klein-Gordon grid misses the oracle tolerance
    let o = forerunner(dir.path(), &["--kg-dx", "0.25", "validate"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL"));
}

#[test]
fn config_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let from_file = dir.path().join("from_file");
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("# defaults\noutput_dir = {}\nseries_tol = 1e-12\n", from_file.display())).unwrap();
    let args = ["trace", "--solver", "nr-w", "--x", "1", "--omega0", "0.5", "--t0", "0", "--t1", "1", "--dt", "0.5"];
    let o = Command::new(env!("CARGO_BIN_EXE_forerunner"))
        .arg("--config")
        .arg(&cfg)
        .args(args)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(from_file.join("trace_nr-w_x1_w0.5.csv").exists());
    // the flag wins over the file
    let flagged = dir.path().join("flagged");
    let o = Command::new(env!("CARGO_BIN_EXE_forerunner"))
        .arg("--config")
        .arg(&cfg)
        .arg("--output-dir")
        .arg(&flagged)
        .args(args)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(flagged.join("trace_nr-w_x1_w0.5.csv").exists());

    fs::write(&cfg, "series_tol = 1e-12\nnot_a_key = 3\n").unwrap();
    let o = forerunner(dir.path(), &["--config", cfg.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = forerunner(dir.path(), &["--config", "/nonexistent/run.cfg", "validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_carrier = ["trace", "--solver", "rel-series", "--x", "1", "--omega0", "1.5", "--t0", "0", "--t1", "1", "--dt", "1"];
    assert_eq!(forerunner(dir.path(), &bad_carrier).status.code(), Some(2));
    assert_eq!(forerunner(dir.path(), &["trace"]).status.code(), Some(2));
    assert_eq!(forerunner(dir.path(), &["fig", "--id", "42"]).status.code(), Some(2));
    assert_eq!(forerunner(dir.path(), &["--kg-dx", "-1", "validate"]).status.code(), Some(2));
    assert_eq!(
        forerunner(dir.path(), &["fit-tpmin", "--omega0-list", "0.95,abc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        forerunner(dir.path(), &["fit-tpmin", "--omega0-list", "0.95,0.96"]).status.code(),
        Some(2)
    );
    // a one-term cap cannot converge the series
    let capped = [
        "--series-n-max", "1", "trace", "--solver", "rel-series", "--x", "1", "--omega0", "0.5", "--t0", "5", "--t1", "5",
        "--dt", "1",
    ];
    let o = forerunner(dir.path(), &capped);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn figures_are_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for id in ["1", "4", "5"] {
        for d in [&a, &b] {
            let o = forerunner(d.path(), &["fig", "--id", id]);
            assert!(o.status.success(), "fig {id}: {}", stderr(&o));
        }
    }
    for name in ["fig1_sdp.csv", "fig1_sdp.json", "fig4_extremum_times.csv", "fig5_front.csv"] {
        let p = fs::read(a.path().join(name)).unwrap();
        let q = fs::read(b.path().join(name)).unwrap();
        assert_eq!(p, q, "{name}");
    }
    let (_, rows) = read_csv(&a.path().join("fig5_front.csv"));
    assert_eq!(rows[0][1], 1.0);
    assert_eq!(rows[0][2], 1.0);
    let (header, rows) = read_csv(&a.path().join("fig4_extremum_times.csv"));
    assert_eq!(header.len(), 8);
    let at_099 = rows.iter().find(|r| (r[0] - 0.99).abs() < 1e-9).unwrap();
    assert!((at_099[7] - 0.5943).abs() < 1e-3, "{}", at_099[7]);
    assert!((at_099[6] - 1.0001).abs() < 1e-3, "{}", at_099[6]);
}

#[test]
fn basin_scan_output() {
    let dir = TempDir::new().unwrap();
    let o = forerunner(
        dir.path(),
        &["scan-basin", "--omega0", "0.98", "--x0", "0.5", "--x1", "8", "--n", "5"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("basin_rel_w0.98.csv"));
    assert_eq!(header, ["x", "t_arrival", "value"]);
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[1] > r[0]));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("basin_rel_w0.98.json")).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 5);
    // the basin bottom near x = 2.8 lies inside the scanned range
    let xm = v["minimum"]["x"].as_f64().unwrap();
    assert!(xm > 0.5 && xm < 8.0, "{xm}");
}
