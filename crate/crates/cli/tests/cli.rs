use std::path::PathBuf;
use std::process::{Command, Output};

use zxel::io::parse_diagram;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn zxel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxel"))
        .args(args)
        .env_remove("ZXEL_WIRE_CAP")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = zxel(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn interpret_prints_matrices() {
    let (code, out, _) = run(&["interpret", &path("triangle.json"), "--precision", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1.0 1.0\n0.0 1.0\n");
    let (code, out, _) = run(&["interpret", &path("empty.json"), "--precision", "0"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let (code, out, _) = run(&["interpret", &path("cap.json"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"], 4);
    assert_eq!(v["cols"], 1);
    assert_eq!(v["data"][3][0], serde_json::json!([1.0, 0.0]));
}

#[test]
fn malformed_input_is_reported() {
    let (code, out, err) = run(&["interpret", &path("malformed.json")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 4 column 1"), "{err}");
    let (code, _, err) = run(&["interpret", &path("missing.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.json"));
}

#[test]
fn wire_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_zxel"))
        .args(["interpret", &path("chain.json")])
        .env("ZXEL_WIRE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wire cap 1"));
    let out = Command::new(env!("CARGO_BIN_EXE_zxel"))
        .args(["interpret", &path("chain.json")])
        .env("ZXEL_WIRE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_eq_exit_codes() {
    let (code, out, _) = run(&["check-eq", &path("chain.json"), &path("fused.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["method"], "both");
    assert_eq!(
        run(&["check-eq", &path("scalar2.json"), &path("scalar3.json")]).0,
        1
    );
    assert_eq!(
        run(&["check-eq", &path("chain.json"), &path("cap.json")]).0,
        2
    );
    assert_eq!(
        run(&[
            "check-eq",
            &path("scalar2.json"),
            &path("scalar3.json"),
            "--tol",
            "2"
        ])
        .0,
        0
    );
}

#[test]
fn normalize_prints_coefficients_and_writes_diagram() {
    let (code, out, _) = run(&["normalize", &path("cap.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(
        v["coeffs"],
        serde_json::json!([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    );
    let (_, out, _) = run(&["normalize", &path("loop.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!([[2.0, 0.0]]));

    let dir = tempfile::tempdir().unwrap();
    let nf_file = dir.path().join("nf.json");
    let (code, _, _) = run(&[
        "normalize",
        &path("not_gate.json"),
        "--out",
        nf_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // the written diagram is a state with the same coefficients
    let (_, again, _) = run(&["normalize", nf_file.to_str().unwrap()]);
    let (_, bent, _) = run(&["normalize", &path("not_gate.json")]);
    let (a, b): (serde_json::Value, serde_json::Value) = (
        serde_json::from_str(&again).unwrap(),
        serde_json::from_str(&bent).unwrap(),
    );
    assert_eq!(a["m"], b["m"]);
    for k in 0..4 {
        for part in 0..2 {
            let x = a["coeffs"][k][part].as_f64().unwrap();
            let y = b["coeffs"][k][part].as_f64().unwrap();
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn simplify_fuses_chains_and_respects_budget() {
    let (code, out, err) = run(&["simplify", &path("chain.json"), "--trace"]);
    assert_eq!(code, 0);
    let d = parse_diagram(&out).unwrap();
    assert_eq!(d.node_count(), 1);
    assert!(err.contains("S1"));

    let (_, fixed, _) = run(&["simplify", &path("fused.json")]);
    assert!(parse_diagram(&fixed).unwrap().structurally_equal(
        &parse_diagram(&std::fs::read_to_string(fixture("fused.json")).unwrap()).unwrap()
    ));

    let (_, same, _) = run(&["simplify", &path("chain.json"), "--budget", "0"]);
    let original = parse_diagram(&std::fs::read_to_string(fixture("chain.json")).unwrap()).unwrap();
    assert!(parse_diagram(&same).unwrap().structurally_equal(&original));
}

#[test]
fn elementary_decomposes_and_rejects() {
    let (code, out, _) = run(&["elementary", &path("add.txt")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["kind"], "row_addition");
    assert_eq!(v[0]["subset"], serde_json::json!([0]));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("diag.json");
    let (code, out, _) = run(&[
        "elementary",
        &path("diag.txt"),
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["kind"], "row_multiplication");
    let (_, m, _) = run(&["interpret", file.to_str().unwrap(), "--precision", "3"]);
    assert_eq!(m, "1.000 0.000\n0.000 2.000-1.000i\n");

    let (code, _, err) = run(&["elementary", &path("swap.txt")]);
    assert_eq!(code, 2);
    assert!(err.contains("not representable"));
    let (code, _, err) = run(&["elementary", &path("three.txt")]);
    assert_eq!(code, 2);
    assert!(err.contains("power of two"));
}

#[test]
fn export_is_deterministic() {
    let (code, dot, _) = run(&["export", &path("cap.json"), "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.contains("out0 -- out1"));
    assert_eq!(
        run(&["export", &path("cap.json"), "--format", "dot"]).1,
        dot
    );
    let (_, tikz, _) = run(&["export", &path("not_gate.json"), "--format", "tikz-text"]);
    assert!(tikz.contains("zspider") && tikz.contains("hbox"));
    assert_eq!(run(&["export", &path("cap.json"), "--format", "svg"]).0, 2);
}

#[test]
fn rules_report_and_corruption() {
    let (code, out, _) = run(&["rules", "--samples", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() > 70);
    assert!(reports
        .iter()
        .all(|r| r["max_deviation"].as_f64().unwrap() <= 1e-9));

    let (code, out, _) = run(&["rules", "--samples", "2", "--corrupt", "B2"]);
    assert_eq!(code, 1);
    assert!(out
        .lines()
        .any(|l| l.starts_with("B2 ") && l.contains("FAIL")));
    assert_eq!(
        run(&[
            "rules",
            "--samples",
            "1",
            "--extra",
            &path("corrupted_rules.json")
        ])
        .0,
        1
    );
    assert_eq!(
        run(&[
            "rules",
            "--samples",
            "1",
            "--extra",
            &path("sound_rules.json")
        ])
        .0,
        0
    );
    assert_eq!(run(&["rules", "--corrupt", "no-such-rule"]).0, 2);
}
