use std::process::{Command, Output};

use serde_json::Value;

fn tldiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tldiag")).args(args).env_remove("TLDIAG_STEP_CAP").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = tldiag(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const EXAMPLE: &str = "3,5,2,4,0,1,3,5,2,4,5";

#[test]
fn map_example_word() {
    let v = json(&["--n", "4", "map", EXAMPLE]);
    assert_eq!(v["diagram"]["k"], 6);
    let v = json(&["--n", "4", "length", &v["diagram"].to_string()]);
    assert_eq!(v["length"], 11);
}

#[test]
fn map_empty_word_is_identity() {
    let v = json(&["map"]);
    let edges = v["diagram"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 4);
    assert!(edges.iter().all(|e| e["to"].as_str().unwrap() == format!("{}'", e["from"].as_str().unwrap())));
}

#[test]
fn map_rejects_non_fc_word() {
    let out = tldiag(&["map", "1,2,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not fully commutative"));
}

#[test]
fn factor_inverts_map() {
    let d = json(&["--family", "D", "--n", "3", "map", "0,2,1,3,2,4,5,3"])["diagram"].to_string();
    let f = json(&["--family", "D", "--n", "3", "factor", &d]);
    let word: Vec<String> = f["word"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    assert_eq!(word.len(), 8);
    assert_eq!(f["trace"].as_array().unwrap().len(), 8);
    let back = json(&["--family", "D", "--n", "3", "map", &word.join(",")])["diagram"].to_string();
    let d1 = json(&["--family", "D", "--n", "3", "render", &d])["diagram"].clone();
    let d2 = json(&["--family", "D", "--n", "3", "render", &back])["diagram"].clone();
    assert_eq!(d1, d2);
}

#[test]
fn multiply_gives_delta() {
    let v = json(&["multiply", "1", "1"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["coeff"], serde_json::json!([0, 1]));
}

#[test]
fn classify_left_peak() {
    let w = "8,7,6,5,4,8,7,6,5,8,3,2,0,1,2,3,4,7,8,6,7,8,5,6";
    let v = json(&["--n", "7", "classify", w]);
    assert_eq!(v["tag"], "LP");
    assert_eq!(v["j_l"], 3);
}

#[test]
fn verify_passes_and_reports() {
    let out = tldiag(&["verify", "--family", "B", "--n", "2", "--max-len", "12", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true && c["elapsed_ms"].is_u64()));
    let out = tldiag(&["verify", "--family", "D", "--n", "2", "--max-len", "10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn render_writes_svg() {
    let path = std::env::temp_dir().join(format!("tldiag-render-{}.svg", std::process::id()));
    let out = tldiag(&["render", "0,1", "--svg", path.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<circle"));
    assert!(String::from_utf8_lossy(&out.stdout).contains('•'));
}

#[test]
fn step_cap_from_environment() {
    let run = |cap: &str| Command::new(env!("CARGO_BIN_EXE_tldiag")).args(["multiply", "0", "0"]).env("TLDIAG_STEP_CAP", cap).output().unwrap();
    let out = run("1");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step cap"));
    assert!(run("1000").status.success());
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn fc_enum_counts() {
    let v = json(&["fc-enum", "--n", "2", "--max-len", "3"]);
    assert_eq!(v["counts"], serde_json::json!([1, 4, 9, 15]));
}

#[test]
fn width_mismatch_is_reported() {
    let d = json(&["--n", "3", "map", "1"])["diagram"].to_string();
    assert_eq!(tldiag(&["--n", "2", "length", &d]).status.code(), Some(2));
}
