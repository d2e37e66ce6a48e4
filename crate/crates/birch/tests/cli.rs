//! The binary's exit codes, output formats and certificate round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn birch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("birch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_over_q_prints_the_point() {
    let o = birch(&["solve", "--field", "Q", "x^3 + 2*y^3 - 3*z^3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("residuals: all exactly zero"), "{out}");
    assert!(out.contains("x = 1") && out.contains("z = 1"), "{out}");
}

#[test]
fn json_certificate_verifies_and_tampering_names_the_equation() {
    let path = scratch("affine.json");
    let p = path.to_str().unwrap();
    let o = birch(&["solve", "--affine", "--format", "json", "--out", p, "--", "2*x1^3 - x2^3 + x3^3 + x4^3 = 1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let o = birch(&["verify", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("certificate verified"));

    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["residuals"][0] = serde_json::json!({"terms": [[[0, 0, 0, 0], {"rational": "1"}]]});
    let forged = scratch("forged.json");
    std::fs::write(&forged, serde_json::to_string(&v).unwrap()).unwrap();
    let o = birch(&["verify", forged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("equation 1"), "{}", stderr(&o));
}

#[test]
fn same_seed_gives_identical_output() {
    let args = ["sample", "--count", "3", "--seed", "9", "x1^3 + x2^3 - x3^3 + 2*x4^3 + x5^3 - x6^3 + x7^3"];
    let a = birch(&args);
    let b = birch(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn contract_violations_exit_with_one() {
    for args in [
        vec!["solve", "x^2 + y^3"],
        vec!["solve", "x^2 + y^2"],
        vec!["solve", "--field", "C", "x^3"],
        vec!["sample", "--count", "0", "x^3 + y^3"],
        vec!["solve", "--ell", "0", "x^3 + y^3"],
    ] {
        let o = birch(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error:"), "{args:?}");
    }
    let o = birch(&["solve", "x^2 + y^3"]);
    assert!(stderr(&o).contains("--affine"));
}

#[test]
fn exhausted_search_exits_with_two() {
    // x^3 + y^3 = 0 only has (t, -t); avoiding x + y rules every point out
    let o = birch(&["solve", "--field", "Q", "--avoid", "x + y", "--restarts", "2", "--height-bound", "3", "x^3 + y^3"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn every_subcommand_answers() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["strength", "x1*x2^2 + x3*x4^2"],
        vec!["strength", "--format", "json", "x1^3 + x2^3 + x3^3"],
        vec!["regularize", "--threshold", "2", "x1*(x2^2 + x3^2)"],
        vec!["orthogonalize", "--count", "2", "x1^3 + x2^3 + x3^3 + x4^3"],
        vec!["orthogonalize", "--count", "2", "--ell", "1", "x1^3 + x2^3 + x3^3 + x4^3"],
        vec!["diagonal-solve", "--field", "R(t1)", "x^3 + t1*y^3 + (t1^2 + 1)*z^3 - w^3"],
        vec!["diagonal-solve", "--field", "Q", "x^3 + 2*y^3 - 3*z^3"],
    ];
    for args in cases {
        let o = birch(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(!stdout(&o).is_empty(), "{args:?}");
    }
    let o = birch(&["strength", "--format", "json", "x1^3 + x2^3 + x3^3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stage"], "strength bounds");
}

#[test]
fn equations_can_come_from_a_file() {
    let path = scratch("system.txt");
    std::fs::write(&path, "# a diagonal cubic\nx^3 + 2*y^3 - 3*z^3\n").unwrap();
    let arg = format!("@{}", path.display());
    let o = birch(&["solve", "--field", "Q", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
