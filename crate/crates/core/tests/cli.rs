use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn slah(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slah")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("slah-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn ecu_is_entailed() {
    let ecu = data("ecu.slah");
    let out = slah(&["--decide", ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ENTAILED\nclauses: 10\nmax_clause_vars: 4\nmax_testpoints: 6\nconjecture_body: 6\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("time_ms:"));
}

#[test]
fn decide_is_the_default_mode() {
    let ecu = data("ecu.slah");
    assert_eq!(stdout(&slah(&[ecu.to_str().unwrap()])).lines().next(), Some("ENTAILED"));
}

#[test]
fn dropping_the_negative_speed_clause_breaks_entailment() {
    let path = data("ecu_no_c6.slah");
    let out = slah(&["--oracle-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("NOT ENTAILED\n"));
    assert!(text.contains("oracle: NOT ENTAILED\n"));
}

#[test]
fn sat_and_unsat_without_conjecture() {
    let sat = scratch("sat.slah", "pred P(Real).\nclause x > 1 || -> P(x).\n");
    let out = slah(&[sat.to_str().unwrap()]);
    assert_eq!((stdout(&out).lines().next().unwrap().to_string(), out.status.code()), ("SAT".into(), Some(1)));

    let unsat = scratch("unsat.slah", "pred P(Real).\nclause x > 1 || -> P(x).\nclause P(2) -> false.\n");
    let out = slah(&[unsat.to_str().unwrap()]);
    assert_eq!((stdout(&out).lines().next().unwrap().to_string(), out.status.code()), ("UNSAT".into(), Some(0)));
}

#[test]
fn missing_file_and_parse_error_exit_2() {
    assert_eq!(slah(&["/nonexistent/problem.slah"]).status.code(), Some(2));
    let bad = scratch("bad.slah", "pred P(Real).\nclause -> Q(1).\n");
    assert_eq!(slah(&[bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn conflicting_modes_exit_2() {
    let ecu = data("ecu.slah");
    assert_eq!(slah(&["--decide", "--dump-analysis", ecu.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn two_unbounded_variables_in_one_atom_exit_3() {
    let path = scratch("irreducible.slah", "pred P(Real, Real).\nclause x - y < 0 || -> P(x, y).\n");
    let out = slah(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not reducible"));
}

#[test]
fn output_is_deterministic() {
    let ecu = data("ecu.slah");
    for args in [&["--emit", "datalog"][..], &["--emit", "tptp"], &["--dump-testpoints"], &["--dump-analysis"]] {
        let mut full = args.to_vec();
        full.push(ecu.to_str().unwrap());
        let a = slah(&full);
        let b = slah(&full);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn tptp_needs_the_clause_encoding() {
    let ecu = data("ecu.slah");
    let out = slah(&["--emit", "tptp", "--encoding", "stratified", ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = slah(&["--emit", "tptp", ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cnf("));
}

#[test]
fn output_file() {
    let ecu = data("ecu.slah");
    let target = std::env::temp_dir().join(format!("slah-cli-out-{}.dl", std::process::id()));
    let out = slah(&["--emit", "datalog", "-o", target.to_str().unwrap(), ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert!(written.contains("__missing :- __expected(X), not conj(X)."));
    std::fs::remove_file(target).unwrap();
}

#[test]
fn dump_facts_lists_derived_tuples() {
    let ecu = data("ecu.slah");
    let out = slah(&["--dump-facts", "IgnDeg", ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "IgnDeg(0, 1350)\nIgnDeg(2000, 1600)\nIgnDeg(4000, 1850)\nIgnDeg(6000, 2100)\n");
}

#[test]
fn two_points_per_interval_keeps_the_verdict() {
    let ecu = data("ecu.slah");
    let out = slah(&["--two-points-per-interval", "--oracle-check", ecu.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ENTAILED\n"));
}
