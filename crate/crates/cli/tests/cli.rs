use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collidere"))
        .args(args)
        .env_remove("COLLIDERE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft7)
        .compile(&value)
        .expect("schema compiles")
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} schema rejects output: {msgs:?}\n{v:#}");
}

#[test]
fn check_exit_codes_follow_verdicts() {
    let cases = [
        (vec!["check", "X9", "--into", "2D4"], 1, "IMPOSSIBLE"),
        (vec!["check", "K(4,2)", "--into", "3D4+3A1"], 0, "POSSIBLE"),
        (vec!["check", "K(3,4)", "--into", "6A3"], 2, "UNKNOWN"),
        (vec!["check", "J10", "--into", "3A3"], 1, "IMPOSSIBLE"),
        (vec!["check", "K(4,3)", "--into", "7A3 + 4A1"], 1, "IMPOSSIBLE"),
        (vec!["check", "K5", "--into", "3K3 + A1"], 1, "IMPOSSIBLE"),
    ];
    for (args, want, verdict) in cases {
        let o = run(&args);
        assert_eq!(code(&o), want, "{args:?}");
        let v = json(&o);
        assert_eq!(v["verdict"], verdict, "{args:?}");
        assert_valid("report", &v);
        assert!(o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_exhaustion_exits_65() {
    let o = run(&["check", "K(3,4)", "--into", "6A3", "--budget", "1"]);
    assert_eq!(code(&o), 65);
    let v = json(&o);
    assert_eq!(v["verdict"], "UNKNOWN");
    assert_valid("report", &v);

    let o = Command::new(env!("CARGO_BIN_EXE_collidere"))
        .args(["decompose", "K(3,4)", "--into", "6A3"])
        .env("COLLIDERE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 65);
    assert_eq!(json(&o)["outcome"], "budget_exceeded");

    assert_eq!(code(&run(&["decompose", "K(3,4)", "--budget", "1"])), 65);
    assert_eq!(code(&run(&["check", "K5", "--into", "3K3+A1", "--time-limit-ms", "1"])), 1);
}

#[test]
fn usage_and_parse_errors_go_to_stderr() {
    for args in [
        vec!["check", "A4", "--into", "2A1"],
        vec!["check", "K5", "--into", "3K3 +"],
        vec!["invariants", "Q7"],
        vec!["frobnicate"],
        vec!["check", "K5"],
        vec!["collide-nodes", "0"],
        vec!["witness-omp", "5", "--parts", "2"],
        vec!["spectrum", "1", "4"],
        vec!["check", "K5", "--into", "K3", "--budget", "0"],
        vec!["batch", "/nonexistent/problems.jsonl"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let o = run(&["check", "A4", "--into", "2A1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular branch"));
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn invariants_report() {
    let o = run(&["invariants", "J10"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("invariants", &v);
    let inv = &v["invariants"];
    assert_eq!((inv["delta"].as_u64(), inv["mu"].as_u64(), inv["kappa"].as_u64()), (Some(6), Some(10), Some(12)));
    assert_eq!(inv["tau_es"], 9);
    assert_eq!(v["signature"], serde_json::json!({"plus": 0, "zero": 2, "minus": 8}));

    let v = json(&run(&["invariants", "(1:(2:•,•),•)"]));
    assert_valid("invariants", &v);
    assert_eq!(v["type"], "D_6");
    let v = json(&run(&["invariants", "(1:(2:•,•),(2:•,•))"]));
    assert_valid("invariants", &v);
    assert!(v["spectrum"].is_null());
}

#[test]
fn other_commands_validate() {
    let v = json(&run(&["collide-nodes", "6"]));
    assert_valid("collide_nodes", &v);
    let names: Vec<&str> = v["types"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["A_11", "D_10", "J_10", "X_9"]);

    let v = json(&run(&["canonical-omp", "K(4,3)"]));
    assert_valid("canonical_omp", &v);
    assert_eq!(v["targets"], "3X_9");

    for (args, want) in [
        (vec!["witness-omp", "7", "--parts", "3,3,3"], 0),
        (vec!["witness-omp", "4", "--parts", "3,3"], 1),
        (vec!["witness-omp", "7", "--parts", "3,3,3,3,3,3,3"], 2),
    ] {
        let o = run(&args);
        assert_eq!(code(&o), want, "{args:?}");
        assert_valid("witness_omp", &json(&o));
    }

    let v = json(&run(&["spectrum", "5", "5"]));
    assert_valid("spectrum", &v);
    assert_eq!(v["mu"], 16);
    assert_eq!(v["spectrum"][0], serde_json::json!(["-3/5", 1]));

    for args in [
        vec!["decompose", "K(4,2)", "--into", "3D4+3A1"],
        vec!["decompose", "K5", "--into", "3K3+A1"],
        vec!["decompose", "X9"],
    ] {
        assert_valid("decompose", &json(&run(&args)));
    }
    assert_eq!(code(&run(&["decompose", "K5", "--into", "3K3+A1"])), 1);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["check", "K(3,4)", "--into", "A7 + A5 + A3 + 3A1"],
        vec!["decompose", "D8"],
        vec!["check", "K6", "--into", "4K3+3A1", "--format", "text"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn text_format_mirrors_notation() {
    let o = run(&["check", "K(3,4)", "--into", "6A3", "--format", "text"]);
    assert_eq!(stdout(&o).lines().next(), Some("K(3,4) -> 6A_3: UNKNOWN"));
    let o = run(&["check", "K(3,4)", "--into", "4A1+2A7", "--format", "text"]);
    assert_eq!(stdout(&o).lines().next(), Some("K(3,4) -> 2A_7 + 4A_1: POSSIBLE"));
    // printing then re-parsing the canonical targets gives the same problem
    let again = run(&["check", "K(3,4)", "--into", "2A_7 + 4A_1", "--format", "text"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn batch_preserves_input_order() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    let problems = [
        ("K(3,4)", "2A7 + 4A1"),
        ("X_9", "2D4"),
        ("K(3,4)", "6A3"),
        ("K(4,2)", "3D4 + 3A1"),
        ("J_10", "3A3"),
        ("K(3,3)", "3A3 + 3A1"),
        ("K_5", "3K3 + A1"),
        ("J_10", "A3 + 4A1"),
    ];
    for (s, t) in &problems {
        writeln!(file, "{}", serde_json::json!({"source": s, "targets": t})).unwrap();
    }
    writeln!(file).unwrap();
    let path = file.path().to_str().unwrap();
    let o = run(&["batch", path]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), problems.len());
    for (v, (s, _)) in lines.iter().zip(&problems) {
        assert_valid("report", v);
        assert_eq!(v["problem"]["source"], *s);
    }
    let verdicts: Vec<&str> = lines.iter().map(|v| v["verdict"].as_str().unwrap()).collect();
    assert_eq!(
        verdicts,
        ["POSSIBLE", "IMPOSSIBLE", "UNKNOWN", "POSSIBLE", "IMPOSSIBLE", "POSSIBLE", "IMPOSSIBLE", "POSSIBLE"]
    );
    assert_eq!(run(&["batch", path]).stdout, o.stdout);

    let text = run(&["batch", path, "--format", "text"]);
    assert_eq!(stdout(&text).lines().nth(2), Some("K(3,4) -> 6A_3: UNKNOWN"));
}

#[test]
fn batch_reports_bad_lines_and_continues() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, r#"{{"source": "K5", "targets": "2K3 + 4A1"}}"#).unwrap();
    writeln!(file, r#"{{"source": "A4", "targets": "2A1"}}"#).unwrap();
    writeln!(file, "not json").unwrap();
    writeln!(file, r#"{{"source": "A3", "targets": "2A1"}}"#).unwrap();
    let o = run(&["batch", file.path().to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    assert_eq!(stdout(&o).lines().count(), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("line 3"), "{err}");
}

#[test]
fn deviations_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dev.json");
    let p = path.to_str().unwrap();
    let o = run(&["check", "K(4,2)", "--into", "3D4+3A1", "--deviations", p]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("deviations", &v);
    assert_eq!(v["deviations"], serde_json::json!([]));
    assert_eq!(v["checked"].as_array().unwrap().len(), 3);
}
