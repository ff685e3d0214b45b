use std::process::Command;

use sd2_core::cli::read_matrices_json;

fn sd2() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sd2"));
    c.env_remove("SD2_TOL");
    c
}

fn code(c: &mut Command) -> i32 {
    c.output().unwrap().status.code().unwrap()
}

#[test]
fn build_writes_readable_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let st = code(sd2().args(["build", "--n", "5", "--mux", "-0.4", "--muy", "0.7", "--basis", "cartesian", "--out"]).arg(&path));
    assert_eq!(st, 0);
    let doc = read_matrices_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.basis, "cartesian");
    assert_eq!(doc.params.n, 5);
    assert_eq!(doc.matrices["J3"].rows(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(code(sd2().args(["spectrum", "--n", "4", "--mux", "0.3", "--muy", "0.7", "--op", "J2"])), 0);
    assert_eq!(code(sd2().args(["verify", "--n-max", "3", "--grid", "0:0,0.3:0.7"])), 0);
    assert_eq!(code(sd2().args(["build", "--n", "3", "--mux", "-0.6", "--muy", "0"])), 2);
    assert_eq!(code(sd2().args(["build", "--n", "3"])), 2);
    assert_eq!(code(sd2().args(["frobnicate"])), 2);
    assert_eq!(code(sd2().args(["--help"])), 0);
    // a tolerance below any achievable residual makes the suite fail
    assert_eq!(code(sd2().args(["verify", "--n-max", "4", "--grid", "0.3:0.7", "--residual-tol", "1e-300"])), 1);
}

#[test]
fn env_tolerance_and_flag_precedence() {
    let verify = ["verify", "--n-max", "4", "--grid", "0.3:0.7"];
    assert_eq!(code(sd2().args(verify).env("SD2_TOL", "1e-300")), 1);
    assert_eq!(code(sd2().args(verify).env("SD2_TOL", "1e-300").args(["--residual-tol", "1e-9"])), 0);
    assert_eq!(code(sd2().args(verify).env("SD2_TOL", "nope")), 2);
}

#[test]
fn transition_csv() {
    let out = sd2().args(["transition", "--n", "2", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(rows[0], "n,j,coefficient");
    assert_eq!(rows.len(), 10);
}
