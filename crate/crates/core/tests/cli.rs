use std::process::{Command, Output};

use serde_json::Value;

const GENERIC: &str = "0.3,-0.2,0.9,0.1,0.4,-0.7,0.2,0.5";

fn su3holo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su3holo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_upper_cone_point() {
    let out = su3holo(&["classify", "--xi", "0,0,0,0,0,0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "upper_degenerate");
    assert_eq!(v["gaps"]["e12"], 0.0);
    assert!((v["gaps"]["e23"].as_f64().unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn curvature_routes_agree_on_the_command_line() {
    let out = su3holo(&["curvature", "--xi", GENERIC, "--level", "2", "--route", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["max_pairwise_deviation"].as_f64().unwrap() < 1e-12);
    for route in ["spectral", "transported", "parts"] {
        assert_eq!(v["routes"][route].as_array().unwrap().len(), 8);
    }
}

#[test]
fn selfcheck_succeeds() {
    let out = su3holo(&["selfcheck", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["failed"], 0);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let a = su3holo(&["sweep", "--count", "20", "--seed", "5", "--threads", "1"]);
    let b = su3holo(&["sweep", "--count", "20", "--seed", "5", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(su3holo::cli::SWEEP_COLUMNS));
    let width = su3holo::cli::SWEEP_COLUMNS.split(',').count();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r.split(',').count() == width));
}

#[test]
fn exit_codes() {
    assert_eq!(su3holo(&["classify", "--xi", "1,2"]).status.code(), Some(1));
    assert_eq!(su3holo(&["curvature", "--xi", GENERIC, "--level", "4"]).status.code(), Some(1));
    let degenerate = su3holo(&["curvature", "--xi", "0,0,0,0,0,0,0,1", "--level", "1"]);
    assert_eq!(degenerate.status.code(), Some(2));
    assert!(!degenerate.stderr.is_empty());
    assert_eq!(su3holo(&["--help"]).status.code(), Some(0));
}

#[test]
fn job_descriptor_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("phase.json");
    let job = dir.path().join("job.json");
    let descriptor = serde_json::json!({
        "schema": su3holo::cli::SCHEMA,
        "command": "loop-phase",
        "generator": {
            "kind": "circle",
            "center": [0.0, 0.0, 0.01, 0.0, 0.0, 0.0, 0.0, 1.0],
            "axes": [[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]],
            "radius": 0.01,
            "samples": 2000
        },
        "level": 1,
        "output": {"format": "json", "path": target}
    });
    std::fs::write(&job, descriptor.to_string()).unwrap();
    let out = su3holo(&["job", "--file", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let phase = v["phase"].as_f64().expect("phase field");
    // Circle at polar angle pi/4 around the cone point: phase = -pi (1 - cos theta).
    let want = -std::f64::consts::PI * (1.0 - std::f64::consts::FRAC_1_SQRT_2);
    assert!((phase - want).abs() < 1e-3, "{phase} vs {want}");
}

#[test]
fn job_descriptor_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    std::fs::write(&job, r#"{"schema":"su3holo/1","command":"classify","xi":[0,0,0,0,0,0,0,1],"colour":1}"#).unwrap();
    assert_eq!(su3holo(&["job", "--file", job.to_str().unwrap()]).status.code(), Some(1));
}
