use serde_json::Value;
use std::path::PathBuf;
use symtriad::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = vec![];
    let mut err = vec![];
    let argv: Vec<&str> = std::iter::once("symtriad").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let (code, out, err) = call(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} / {err}"));
    (code, v)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symtriad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn triad_file(name: &str, case: &str, params: Option<&str>) -> PathBuf {
    let mut args = vec!["from-satake", "--case", case];
    if let Some(p) = params {
        args.extend(["--params", p]);
    }
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    scratch(name, &v["triad"].to_string())
}

#[test]
fn from_satake_exceptional_case() {
    let (code, v) = json(&["from-satake", "--case", "E6:Sp4:F4"]);
    assert_eq!(code, 0);
    assert_eq!(v["tag"], "(III-A2)");
    assert_eq!(v["mn"], serde_json::json!([["4", "4"]]));
    assert_eq!(v["consistent"], true);
    let (code, out, _) = call(&["from-satake", "--case", "E6:Sp4:F4"]);
    assert_eq!(code, 0);
    assert!(out.contains("(III-A2) (4,4)"), "{out}");
}

#[test]
fn from_satake_parameters_by_position_or_name() {
    let (_, a) = json(&["from-satake", "--case", "SUn:SOn:SUaUb", "--params", "5,2"]);
    let (_, b) = json(&["from-satake", "--case", "SUn:SOn:SUaUb", "--params", "n=5,a=2"]);
    assert_eq!(a["triad"], b["triad"]);
    let (code, _, err) = call(&["from-satake", "--case", "SUn:SOn:SUaUb", "--params", "n=5"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn from_satake_diagram_file() {
    let p = scratch("eiv.json", r#"{"delta_label": "E6", "black1": [], "p1": [], "black2": [1, 2, 3, 4], "p2": []}"#);
    let (code, v) = json(&["from-satake", "--diagram", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["tag"], "(III-A2)");
}

#[test]
fn sim_and_equiv_on_identical_files() {
    let a = triad_file("a.json", "E6:Sp4:F4", None);
    let a = a.to_str().unwrap();
    let (code, v) = json(&["sim-check", a, a]);
    assert_eq!(code, 0);
    assert_eq!(v["similar"], true);
    assert_eq!(v["verified"], true);
    let (code, v) = json(&["equiv-check", a, a, "--mode", "scaled"]);
    assert_eq!(code, 0);
    assert_eq!(v["equivalent"], true);
}

#[test]
fn sim_check_negative() {
    let a = triad_file("p.json", "E6:Sp4:F4", None);
    let b = triad_file("q.json", "E6:SO10U1:F4", None);
    let (_, v) = json(&["sim-check", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(v["similar"], false);
}

#[test]
fn classify_reports_class() {
    let a = triad_file("c.json", "E8:SO16:E7SU2", None);
    let (code, v) = json(&["classify", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["class_size"], 2);
    assert_eq!(v["tag"], "(I-F4)");
}

#[test]
fn malformed_json_reports_location() {
    let p = scratch("bad.json", "{\"kind\": \"ordinary\",\n  \"sigma\": [1, 2,, 3]}");
    let (code, _, err) = call(&["classify", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = call(&["classify", "/nonexistent/triad.json"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["from-satake", "--case", "E9:X:Y"]).0, 2);
    assert_eq!(call(&["enumerate-typeiv", "--base", "Q7"]).0, 2);
    assert_eq!(call(&["sigma-action", "--type", "E6", "--vogan", "{\"painted\": [17]}"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn enumerate_typeiv_rows() {
    let (code, v) = json(&["enumerate-typeiv", "--base", "A2"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn sigma_action_outer_and_inner() {
    let (code, v) = json(&["sigma-action", "--type", "E6", "--vogan", "{\"arrows\": [[0,5],[2,4]]}"]);
    assert_eq!(code, 0, "{v}");
    let text = v.to_string();
    assert!(text.contains("I-F4"), "{text}");
    let (code, out, _) = call(&["sigma-action", "--type", "A3", "--vogan", "{}"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("inner"), "{out}");
}

#[test]
fn output_is_deterministic() {
    let a = call(&["--format", "json", "--seed", "3", "from-satake", "--case", "SO2m:SOaSOb:Um", "--params", "m=5,a=4"]);
    let b = call(&["--format", "json", "--seed", "3", "from-satake", "--case", "SO2m:SOaSOb:Um", "--params", "m=5,a=4"]);
    assert_eq!(a, b);
    let a = call(&["enumerate-typeiv", "--base", "E6"]);
    let b = call(&["enumerate-typeiv", "--base", "E6"]);
    assert_eq!(a, b);
}

#[test]
fn verify_table1_passes() {
    let (code, out, err) = call(&["--rank-cap", "6", "verify-table1"]);
    assert_eq!(code, 0, "{out}{err}");
}
