use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavefront")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_then_components_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("cube.json");
    let svg = dir.path().join("cube.svg");
    let o = run(&["simulate", "--surface", "cube:1", "--p", "U/0.5/0.5", "--t", "1.5", "--out", snap.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let o = run(&["components", "--in", snap.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    let row = out.lines().find(|l| !l.starts_with('#') && !l.starts_with("t,")).unwrap();
    assert_eq!(row.split(',').nth(1), Some("4"));

    let o = run(&["render", "--in", snap.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn usage_and_precondition_errors_exit_1() {
    assert_eq!(code(&run(&["simulate", "--surface", "disk:0", "--p", "0,0", "--t", "1"])), 1);
    assert_eq!(code(&run(&["simulate", "--surface", "torus:1,1", "--p", "0,0", "--t", "-1"])), 1);
    assert_eq!(code(&run(&["density", "--surface", "torus:1,1", "--p", "0,0", "--t-grid", "1", "--eps", "1e-6"])), 1);
    assert_eq!(code(&run(&["simulate", "--surface", "torus:1,1"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn budget_exhaustion_exits_2() {
    let o = run(&["simulate", "--surface", "torus:1,1", "--p", "0,0", "--t", "50", "--hmax", "1e-7"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("wavefront: error"));
}

#[test]
fn io_and_parse_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&run(&["components", "--in", missing.to_str().unwrap()])), 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format_version\": 1, \"surface\": ").unwrap();
    let o = run(&["render", "--in", bad.to_str().unwrap(), "--out", dir.path().join("x.svg").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line"));
}

#[test]
fn rectangle_check_passes() {
    let o = run(&["verify-theorem1", "--t-grid", "10:100:30"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn lattice_csv_shape() {
    let o = run(&["lattice", "--t-grid", "10,20", "--h", "0.5"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("10,0.5,317,"));
}
