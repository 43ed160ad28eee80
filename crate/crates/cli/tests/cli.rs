use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn moricone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moricone"))
        .args(args)
        .env_remove("MORICONE_DELTA_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const P2_R1: &str = r#"{"class":"P2","chi":1,"kY_sq":9,"gram_Y":[[1]],"k_Y":[-3],"a_Y":[1],"r":1}"#;

#[test]
fn analyze_p2_r12_reports_the_threshold() {
    let o = moricone(&["analyze", "--fixture", "p2-r12", "--samples", "200"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["samples"], 200);
    assert_eq!(v["input"]["r"], 12);
    assert_eq!(v["s"], serde_json::json!({"a": "-3", "b": "1", "d": "11"}));
    assert_eq!(v["main_theorem"]["counterexamples"].as_array().unwrap().len(), 0);
    assert_eq!(v["main_theorem"]["certificates"].as_array().unwrap().len(), 78);
    assert!(v["strict_inclusion"]["uniruled"].is_object());
}

#[test]
fn thresholds_on_p2_r1_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p2r1.json", P2_R1);
    let o = moricone(&["thresholds", "--input", &input]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("r > K_Y²+1−(A·K_Y)²/A²"), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "infeasible");
}

#[test]
fn non_symmetric_gram_names_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "bad.json",
        r#"{"class":"K3","chi":2,"kY_sq":0,"gram_Y":[[2,1],[0,-2]],"k_Y":[0,0],"a_Y":[1,0],"r":1}"#,
    );
    let o = moricone(&["analyze", "--input", &input]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("gram_Y[0][1]"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn schema_type_errors_carry_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "bad.json",
        r#"{"class":"P2","chi":1,"kY_sq":9,"gram_Y":[[1]],"k_Y":["x"],"a_Y":[1],"r":1}"#,
    );
    let o = moricone(&["thresholds", "--input", &input]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("k_Y[0]"), "{}", stderr(&o));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("certs.json");
    let o = moricone(&["certify-ray", "--fixture", "p2-r12", "--output", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&moricone(&["verify", good.to_str().unwrap()])), 0);

    let text = std::fs::read_to_string(&good).unwrap();
    let mut certs: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(certs.as_array().unwrap().len(), 78);
    let alpha0 = &mut certs[0]["alpha"][0]["a"];
    let bumped = format!("{}1", alpha0.as_str().unwrap());
    *alpha0 = Value::String(bumped);
    let tampered = write(dir.path(), "tampered.json", &certs.to_string());
    let o = moricone(&["verify", &tampered]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("alpha_sq_zero violated"), "{}", stderr(&o));

    let truncated = write(dir.path(), "truncated.json", &text[..text.len() / 2]);
    assert_eq!(code(&moricone(&["verify", &truncated])), 1);

    let unknown = write(dir.path(), "unknown.json", r#"{"kind": "mystery"}"#);
    assert_eq!(code(&moricone(&["verify", &unknown])), 1);
}

#[test]
fn zariski_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.json");
    let o = moricone(&[
        "zariski",
        "--fixture",
        "p2-r10",
        "--divisor",
        "3,2,0,0,0,0,0,0,0,0,-1",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&moricone(&["verify", out.to_str().unwrap()])), 0);
}

#[test]
fn strict_inclusion_exit_codes() {
    assert_eq!(code(&moricone(&["strict-inclusion", "--fixture", "p2-r10"])), 2);
    assert_eq!(code(&moricone(&["strict-inclusion", "--fixture", "p2-r11"])), 0);
}

#[test]
fn segre_check_flags_the_enriques_pencil() {
    let o = moricone(&["segre-check", "--fixture", "enriques"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counterexample"], true);
    assert_eq!(v["report"]["pencils"][0]["verdict"], "segre_fails");
    let text = stdout(&moricone(&["segre-check", "--fixture", "enriques", "--format", "text"]));
    assert!(text.contains("forced χ = 2"), "{text}");
}

#[test]
fn slice_writes_csv() {
    let o = moricone(&["slice", "--fixture", "p2-r9", "--samples", "8"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("label,x1,x2,x3,flag"));
    assert!(csv.lines().any(|l| l.starts_with("L,") && l.ends_with(",finite")));
    assert_eq!(csv.lines().filter(|l| l.ends_with(",boundary")).count(), 8);
    assert_eq!(code(&moricone(&["slice", "--fixture", "p2-r9", "--format", "json"])), 1);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["analyze", "--fixture", "k3", "--samples", "50", "--seed", "7"];
    let a = moricone(&args);
    let b = moricone(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn unknown_fixture_lists_the_bundled_ones() {
    let o = moricone(&["analyze", "--fixture", "nope"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("p2-r12"));
}

#[test]
fn delta_cap_env_marks_non_certified_mode() {
    let o = Command::new(env!("CARGO_BIN_EXE_moricone"))
        .args(["certify-ray", "--fixture", "p2-r10"])
        .env("MORICONE_DELTA_CAP", "1/100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("non-certified"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["delta"], "1/100");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&moricone(&["bogus"])), 1);
    assert_eq!(code(&moricone(&["analyze", "--format", "xml", "--fixture", "k3"])), 1);
}
