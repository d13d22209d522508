use std::path::Path;
use std::process::{Command, Output};

use async_noma::csv::CsvTable;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_async-noma"));
    c.env_remove("ASYNC_NOMA_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn iui_rect_three_points() {
    let o = run(&["iui", "--pulse", "rect", "--grid", "3"]);
    assert!(o.status.success());
    let t = CsvTable::parse(&stdout(&o)).unwrap();
    assert_eq!(t.header, ["tau", "iui"]);
    let want = [[0.0, 1.0], [0.25, 0.625], [0.5, 0.5]];
    assert_eq!(t.rows.len(), 3);
    for (row, w) in t.rows.iter().zip(want) {
        assert!((row[0] - w[0]).abs() < 1e-12 && (row[1] - w[1]).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn parameter_errors_exit_2() {
    assert_eq!(run(&["iui", "--pulse", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["region", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = config(dir.path(), "bad.json", r#"{"sigmas": [0.1, 1.0], "total_power": -1}"#);
    assert_eq!(run(&["region", "--config", &bad, "--methods", "tnoma"]).status.code(), Some(2));
    let unknown = config(dir.path(), "u.json", r#"{"sigmas": [1.0], "total_power": 1, "extra": 0}"#);
    assert_eq!(run(&["region", "--config", &unknown]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    // the extra sinc coincides with the first one
    let o = run(&["dof", "--shift", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dependent"));
}

#[test]
fn region_csv_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "s.json",
        r#"{"sigmas": [0.1, 1.0], "total_power": 10, "delays": [0, 0.5], "resolution": 21}"#,
    );
    let out = dir.path().join("out");
    let o = run(&["region", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for m in ["pnoma", "apnoma", "tnoma"] {
        let text = std::fs::read_to_string(out.join(format!("region_{m}.csv"))).unwrap();
        let t = CsvTable::parse(&text).unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!(t.meta("K"), Some("2"));
        assert!(t.column("is_hull_vertex").unwrap().contains(&1.0));
    }
}

#[test]
fn fading_is_deterministic_and_seed_overridable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "f.json",
        r#"{"sigmas": [1.0, 1.0], "total_power": 10, "seed": 5,
            "fading": {"realizations": 500, "resolution": 11}}"#,
    );
    let go = |out: &str, seed: Option<&str>| {
        let mut c = bin();
        c.args(["fading", "--config", &cfg, "--methods", "tnoma", "--out-dir", out]);
        if let Some(s) = seed {
            c.env("ASYNC_NOMA_SEED", s);
        }
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(Path::new(out).join("fading_tnoma.csv")).unwrap()
    };
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let a = go(&d("a"), None);
    let b = go(&d("b"), None);
    assert_eq!(a, b);
    assert_eq!(CsvTable::parse(&a).unwrap().meta("seed"), Some("5"));
    let c = go(&d("c"), Some("6"));
    assert_ne!(a, c);
    assert_eq!(CsvTable::parse(&c).unwrap().meta("seed"), Some("6"));
    let explicit = go(&d("e"), Some("5"));
    assert_eq!(a, explicit);

    let mut bad = bin();
    bad.env("ASYNC_NOMA_SEED", "not-a-number")
        .args(["fading", "--config", &cfg, "--out-dir", &d("x")]);
    assert_eq!(bad.output().unwrap().status.code(), Some(2));
}

#[test]
fn sumrate_reports_the_closed_form() {
    let o = run(&[
        "sumrate", "--sigma1", "0.1", "--sigma2", "1", "--g", "0.5", "--p-min", "40", "--p-max", "45", "--points", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = CsvTable::parse(&stdout(&o)).unwrap();
    let tnoma = t.rows.iter().find(|r| r[0] == 45.0 && r[2] == 3.0).unwrap();
    assert!((tnoma[3] - 22.95).abs() < 1e-9 && (tnoma[4] - 22.05).abs() < 1e-9);
    let ap = t.rows.iter().find(|r| r[0] == 45.0 && r[2] == 2.0).unwrap();
    assert!((ap[3] - 11.3641).abs() < 1e-4);
}

#[test]
fn dof_and_constellation_outputs() {
    let o = run(&["dof"]);
    assert!(o.status.success());
    let g = CsvTable::parse(&stdout(&o)).unwrap();
    assert_eq!(g.rows.len(), 5);
    assert!((g.rows[0][0] - 0.9592).abs() < 1e-4);

    let o = run(&["constellation"]);
    assert!(o.status.success());
    let c = CsvTable::parse(&stdout(&o)).unwrap();
    assert_eq!(c.rows.len(), 32);
    assert_eq!(c.meta("collisions"), Some("0"));
}
