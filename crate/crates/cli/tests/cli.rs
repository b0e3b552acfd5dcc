use std::process::{Command, Output};

use serde_json::Value;

fn homcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homcheck")).args(args).env_remove("HOMCHECK_MAX_K").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn algebra(name: &str) -> String {
    format!("{}/../../algebras/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn normalize_examples() {
    for (input, want) in [("J(x,x,y)", "0"), ("a(x*y) - a(x)*a(y)", "0"), ("y*x", "-x*y"), ("x*(y*z) + (y*z)*x", "0")] {
        let o = homcheck(&["normalize", input]);
        assert_eq!(o.status.code(), Some(0), "{input}");
        assert_eq!(stdout(&o).trim(), want, "{input}");
    }
}

#[test]
fn parse_errors_exit_2() {
    let o = homcheck(&["normalize", "x*\n  y +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:6"));
    assert_eq!(homcheck(&["derive", "--target", "J(x,y)", "--axiom", "hom_malcev"]).status.code(), Some(2));
    assert_eq!(homcheck(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_files_exit_3() {
    assert_eq!(homcheck(&["check", "/nonexistent/algebra.json", "malcev"]).status.code(), Some(3));
    let dir = env!("CARGO_TARGET_TMPDIR");
    let bad = format!("{dir}/not_multiplicative.json");
    let text = std::fs::read_to_string(algebra("cross3.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["twist"] = serde_json::json!([["0", "1", "0"], ["1", "0", "0"], ["0", "0", "1"]]);
    doc["require_multiplicative"] = Value::Bool(true);
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = homcheck(&["check", &bad, "malcev"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(e1, e2)"));
}

#[test]
fn shipped_examples_resolve_by_file_name() {
    let o = homcheck(&["check", "m7.json", "hom_malcev"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "hom_malcev: holds (2401 basis tuples)");
}

#[test]
fn derive_json_and_negative_result() {
    let o = homcheck(&["--format", "json", "derive", "--target", "identity_1_2", "--axiom", "hom_malcev"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "certificate");
    assert_eq!(v["K"], 3);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 4);

    let o = homcheck(&["--format", "json", "derive", "--target", "vars w,x,y,z; (w*x)*(y*z)", "--axiom", "hom_malcev", "-K", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "not_in_span");
    assert_eq!(v["residual_terms"], 1);
}

#[test]
fn max_k_environment_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_homcheck"))
        .args(["--format", "json", "verify-paper", "--K", "3"])
        .env("HOMCHECK_MAX_K", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_alpha_power"], 1);
    let bad = Command::new(env!("CARGO_BIN_EXE_homcheck")).args(["verify-paper"]).env("HOMCHECK_MAX_K", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_paper_text_report() {
    let o = homcheck(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("step ")).count(), 9);
    assert!(text.trim_end().ends_with("9/9 steps passed (K=3)"));
}

#[test]
fn counterexample_in_json() {
    let o = homcheck(&["--format", "json", "check", &algebra("m7.json"), "hom_jacobi"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "counterexample");
    assert_eq!(v["assignment"]["x"], "e1");
}

#[test]
fn twist_output_reloads() {
    let o = homcheck(&["twist", &algebra("cross3_rot.json")]);
    assert_eq!(o.status.code(), Some(0));
    let spec = homcheck_core::algebra::load_algebra(&stdout(&o)).unwrap();
    assert!(spec.require_multiplicative);
    assert!(!spec.twist_is_identity());
}

#[test]
fn polarize_and_equal() {
    let o = homcheck(&["polarize", "vars x,y; (x*y)*x"]);
    assert_eq!(stdout(&o).trim(), "vars y,x#1,x#2; x#1*(y*x#2) + x#2*(y*x#1)");
    assert_eq!(homcheck(&["equal", "a2(x*y)", "a(a(x))*a2(y)"]).status.code(), Some(0));
    let o = homcheck(&["equal", "x*y", "y*x"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not equal; difference: 2*x*y");
}

#[test]
fn selfcheck_is_seeded() {
    let a = homcheck(&["--seed", "3", "selfcheck", "--cases", "20"]);
    let b = homcheck(&["--seed", "3", "--jobs", "1", "selfcheck", "--cases", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 4);
}
