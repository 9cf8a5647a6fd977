use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn nubshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nubshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn depth_of_full_shift() {
    let o = nubshift(&["depth", "--sft", "builtin:full-shift", "--group", "S3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("depth: 6"));
}

#[test]
fn finite_shift_is_a_precondition_error() {
    let o = nubshift(&["depth", "--sft", "builtin:constants", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FiniteGroupShift"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(nubshift(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nubshift(&["depth", "--sft", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(nubshift(&["define"]).status.code(), Some(2));
}

#[test]
fn two_series_of_klein_shift_agree() {
    let o = nubshift(&[
        "jh-compare",
        "--host",
        "builtin:c2xc2",
        "--series",
        "builtin:h1",
        "--series",
        "builtin:hphi",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equivalent: true"));
}

#[test]
fn eta_round_trips() {
    let o = nubshift(&["eta", "--group", "S3", "--word", "-1:1,2,3", "--k", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict round_trip: PASS"));
}

#[test]
fn scale_in_both_directions() {
    let fwd = nubshift(&["scale-restricted", "--group", "C3", "--direction", "fwd"]);
    assert_eq!(fwd.status.code(), Some(0));
    assert!(stdout(&fwd).contains("scale: 1"));
    let rev = nubshift(&["scale-restricted", "--group", "C3", "--direction", "rev"]);
    assert_eq!(rev.status.code(), Some(0));
    assert!(stdout(&rev).contains("scale: 3"));
}

#[test]
fn injected_fault_fails_the_suite() {
    let clean = nubshift(&["paper-suite", "--filter", "density"]);
    assert_eq!(clean.status.code(), Some(0));
    let o = nubshift(&["paper-suite", "--filter", "density", "--inject-fault", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("density"));
}

#[test]
fn reports_are_deterministic() {
    let a = scratch("report-a.json");
    let b = scratch("report-b.json");
    for p in [&a, &b] {
        let o = nubshift(&[
            "--out",
            p.to_str().unwrap(),
            "series",
            "--sft",
            "builtin:c2xc3",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = fs::read_to_string(&a).unwrap();
    let rb = fs::read_to_string(&b).unwrap();
    // only the output path differs between the two invocations
    assert_eq!(ra.replace("report-a", "report-b"), rb);
    let v: serde_json::Value = serde_json::from_str(&ra).unwrap();
    for key in ["command", "results", "certificates", "verdicts", "exit_status"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["results"]["depth"], 6);
}

#[test]
fn error_reports_carry_the_kind() {
    let p = scratch("report-err.json");
    let o = nubshift(&["--out", p.to_str().unwrap(), "depth", "--sft", "builtin:trivial", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["exit_status"], 3);
    assert!(v["error"]["kind"].is_string());
}

#[test]
fn session_definitions() {
    let p = scratch("session.ns");
    fs::write(
        &p,
        "G = product(C2, C2)\n\
         phi = linear(C2, [1, 1], 0)\n\
         H = graph(phi)\n\
         K = kernel(phi)\n",
    )
    .unwrap();
    let s = p.to_str().unwrap();
    let o = nubshift(&["--session", s, "define"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("phi: hom"));
    assert!(out.contains("K: sft"));
    let o = nubshift(&["--session", s, "depth", "--sft", "H"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("depth: 2"));
}
