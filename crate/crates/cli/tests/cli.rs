use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const EX1: &str = "p.\nq :- p, not r.\nr :- not q.\ns :- not t.\n";

fn program(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schemata"))
        .args(args)
        .output()
        .unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_example() {
    let f = program(EX1);
    let path = f.path().to_str().unwrap();
    let out = run(&["solve", path]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"models\":[[\"p\",\"q\",\"s\"],[\"p\",\"r\",\"s\"]]}\n"
    );
    for method in ["bruteforce", "equations", "schemes"] {
        let v = run_json(&["solve", path, "--method", method]);
        assert_eq!(v["models"], json!([["p", "q", "s"], ["p", "r", "s"]]));
    }
}

#[test]
fn solve_both_reports_agreement() {
    let f = program(EX1);
    let v = run_json(&["solve", f.path().to_str().unwrap(), "--method", "both"]);
    assert_eq!(v["agree"], json!(true));
    for method in ["bruteforce", "equations", "schemes"] {
        assert_eq!(v["methods"][method], v["models"]);
    }
}

#[test]
fn unsatisfiable_is_not_an_error() {
    let f = program("p :- not p.\n");
    let out = run(&["solve", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"models\":[]}\n");
}

#[test]
fn check_and_reduct() {
    let f = program(EX1);
    let path = f.path().to_str().unwrap();
    let v = run_json(&["check", path, "--model", "p,q,s"]);
    assert_eq!(v, json!({"stable": true, "gl": ["p", "q", "s"]}));
    let out = run(&["--format", "text", "check", path, "--model", "p"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "unstable\ngl: {p, q, r, s}\n"
    );
    let v = run_json(&["reduct", path, "--model", "p,q,s"]);
    assert_eq!(v["clauses"], json!(["p.", "q :- p.", "s."]));
}

#[test]
fn supports_and_equations() {
    let f = program(EX1);
    let path = f.path().to_str().unwrap();
    let v = run_json(&["supports", path, "--atom", "r", "--full"]);
    assert_eq!(
        v,
        json!({"r": [["q"], ["q", "r"], ["q", "t"], ["q", "r", "t"]]})
    );
    let v = run_json(&["supports", path]);
    assert_eq!(v["t"], json!([]));
    assert_eq!(v["p"], json!([[]]));
    let v = run_json(&["equations", path]);
    assert_eq!(
        v["equations"],
        json!([
            "p <-> true",
            "q <-> ~r",
            "r <-> ~q",
            "s <-> ~t",
            "t <-> false"
        ])
    );
}

#[test]
fn schemes_for_an_atom() {
    let f = program(EX1);
    let v = run_json(&[
        "schemes",
        f.path().to_str().unwrap(),
        "--atom",
        "q",
        "--max",
        "4",
    ]);
    let schemes = v["schemes"].as_array().unwrap();
    assert_eq!(schemes.len(), 1);
    assert_eq!(schemes[0]["support"], json!(["r"]));
}

#[test]
fn export_cnf_writes_dimacs() {
    let f = program(EX1);
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("out.cnf");
    run_json(&[
        "solve",
        f.path().to_str().unwrap(),
        "--export-cnf",
        cnf.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(cnf).unwrap();
    assert!(text.lines().any(|l| l.starts_with("p cnf 5 ")));
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_schemata"))
        .args(["solve", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(EX1.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["models"], json!([["p", "q", "s"], ["p", "r", "s"]]));
}

#[test]
fn exit_codes() {
    let bad = program("p :- q,\n");
    let out = run(&["solve", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let out = run(&["solve", "/nonexistent/program.lp"]);
    assert_eq!(out.status.code(), Some(2));

    let f = program(EX1);
    let out = run(&["check", f.path().to_str().unwrap(), "--model", "z"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["--max-atoms", "3", "solve", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let f = program(EX1);
    let c = program("p :- 1 {q; r} 1.\nq :- not r.\nr :- not q.\n");
    let np = f.path().to_str().unwrap();
    let cp = c.path().to_str().unwrap();
    let runs: [&[&str]; 6] = [
        &["solve", np, "--method", "both"],
        &["equations", np, "--full"],
        &["supports", np, "--full"],
        &[
            "lab",
            "realize",
            "--atoms",
            "4",
            "--samples",
            "30",
            "--seed",
            "9",
        ],
        &["cc", "supports", cp],
        &["cc", "solve", cp, "--method", "both"],
    ];
    for args in runs {
        let first = run(args);
        assert!(first.status.success());
        assert_eq!(first.stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn lab_reports() {
    let v = run_json(&["lab", "realize", "--atoms", "3", "--exhaustive"]);
    assert_eq!(v["tables"], json!(8000));
    assert_eq!(v["failures"], json!([]));
    let v = run_json(&["lab", "fsp", "--family", "e2", "--to", "5"]);
    assert_eq!(v["trend"], json!("growing"));
    let v = run_json(&["lab", "fsp", "--family", "ex3", "--to", "5"]);
    assert_eq!(v["trend"], json!("bounded"));
    let f = program(EX1);
    let v = run_json(&["lab", "antimono", f.path().to_str().unwrap()]);
    assert_eq!(v["antimonotone"], json!(true));
    assert_eq!(
        run(&["lab", "fsp", "--family", "zz"]).status.code(),
        Some(2)
    );
}

#[test]
fn cc_commands() {
    let c = program("p :- 1 {q; r} 1.\nq :- not r.\nr :- not q.\n");
    let path = c.path().to_str().unwrap();
    let v = run_json(&["cc", "solve", path, "--method", "both"]);
    assert_eq!(v["models"], json!([["p", "q"], ["p", "r"]]));
    assert_eq!(v["agree"], json!(true));
    let v = run_json(&["cc", "supports", path, "--atom", "q"]);
    assert_eq!(v, json!({"q": [["{r} 0"]]}));
    let v = run_json(&["cc", "reduct", path, "--model", "p,q"]);
    assert_eq!(v["clauses"], json!(["p :- 1 {q; r}.", "q."]));
    let v = run_json(&["cc", "equations", path]);
    assert_eq!(v["equations"][1], json!("q <-> ~r"));
}
