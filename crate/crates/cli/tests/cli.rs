use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn derbra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derbra"))
        .args(args)
        .env_remove("DB_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = derbra(args);
    let text = String::from_utf8(out.stdout).unwrap() + &String::from_utf8(out.stderr).unwrap();
    (out.status.code().expect("exit code"), text)
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn verify_gla_exit_codes() {
    let (code, out) = run(&["verify-gla", &path("sample-gla.json")]);
    assert_eq!(code, 0, "{}", out);
    let (code, out) = run(&["verify-gla", &path("bad-sign-gla.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("antisymmetry (e, h)"), "{}", out);
    let bad = temp_json("{\"basis\": [");
    let (code, _) = run(&["verify-gla", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = run(&["verify-gla", "/nonexistent/gla.json"]);
    assert_eq!(code, 2);
}

#[test]
fn derived_brackets() {
    let (code, out) = run(&["derived", &path("nilpotent.json"), &path("nilpotent-a.json"), &path("nilpotent-b.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("m_2 = 0"), "{}", out);
    let (code, out) = run(&["--json", "derived", &path("coiso.json"), &path("coiso-section.json"), &path("coiso-section.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["arity"], 2);
    let terms = v["value"]["abelian"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coef"], -8);
    assert_eq!(terms[0]["wedge"], serde_json::json!([2, 3]));
}

#[test]
fn small_algebra_rejects_shifted_arguments() {
    let f = temp_json(r#"{ "shift": [{ "coef_num": 1, "basis": "x1" }] }"#);
    let (code, _) = run(&["derived", &path("nilpotent.json"), f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = run(&["derived", "--big", &path("nilpotent.json"), f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn mc_exit_codes() {
    let (code, out) = run(&["mc", &path("nilpotent.json"), &path("nilpotent-mc.json")]);
    assert_eq!(code, 0, "{}", out);
    let (code, out) = run(&["mc", &path("nilpotent.json"), &path("nilpotent-a.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("1/2*y"), "{}", out);
    let (code, _) = run(&["mc", &path("tpois-r3.json"), &path("tpois-pair.json")]);
    assert_eq!(code, 0);
    let (code, out) = run(&["--json", "mc", &path("tpois-r3.json"), &path("tpois-perturbed.json")]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["maurer_cartan"], false);
    assert_eq!(v["terminated_by"], "bound");
    let zero = temp_json("{}");
    let (code, _) = run(&["mc", &path("nilpotent.json"), zero.path().to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn invalid_vdata_is_a_validation_failure() {
    let text = std::fs::read_to_string(data("nilpotent.json")).unwrap();
    // Δ = x1 has [Δ, Δ] = z ≠ 0
    let broken = text.replace(r#""delta": [{ "coef_num": 1, "basis": "x2" }]"#, r#""delta": [{ "coef_num": 1, "basis": "x1" }]"#);
    assert_ne!(text, broken);
    let f = temp_json(&broken);
    let (code, _) = run(&["mc", f.path().to_str().unwrap(), &path("nilpotent-mc.json")]);
    assert_eq!(code, 1);
}

#[test]
fn twist_needs_a_maurer_cartan_element() {
    let (code, out) = run(&["twist", &path("nilpotent.json"), &path("nilpotent-mc.json"), &path("nilpotent-a.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("twisted m_1 = 1*y"), "{}", out);
    let (code, _) = run(&["twist", &path("nilpotent.json"), &path("nilpotent-a.json"), &path("nilpotent-a.json")]);
    assert_eq!(code, 1);
}

#[test]
fn gauge_and_flow() {
    let (code, out) = run(&["--json", "gauge", &path("point.json")]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generator_matches"], true);
    assert_eq!(v["series_agrees"], true);
    let (code, out) = run(&["--json", "flow", &path("point.json"), "--at", "1/2"]);
    assert_eq!(code, 0, "{}", out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ode"], true);
    assert_eq!(v["values"][0]["value"]["multivector"]["terms"][0]["coef"], 2);
    let (code, _) = run(&["flow", &path("point.json"), "--at", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn gauge_off_the_maurer_cartan_locus() {
    let f = temp_json(
        r#"{ "dims": 3,
             "pi": { "dims": { "base": 3 },
                     "terms": [{ "coef": 1, "wedge": [1, 2] }, { "coef": 1, "monomial": { "x1": 1 }, "wedge": [1, 3] }] },
             "x": { "dims": { "base": 3 }, "terms": [{ "coef": 1, "wedge": [3] }] } }"#,
    );
    let (code, out) = run(&["gauge", f.path().to_str().unwrap()]);
    assert_eq!(code, 1, "{}", out);
}

#[test]
fn suites() {
    let (code, out) = run(&["suite", "oracle", "--seed", "1", "--samples", "50", "--max-degree", "3"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("PASS (150 checks"), "{}", out);
    let (code, out) = run(&["suite", "jacobi", "--fault", "--samples", "5"]);
    assert_eq!(code, 1, "{}", out);
    let (code, _) = run(&["suite", "nope"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["suite", "oracle", "--samples", "0"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["suite", "oracle", "--max-arity", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn suite_reports_are_deterministic() {
    let args = ["--json", "suite", "machine", "--seed", "7", "--samples", "8"];
    let a = derbra(&args).stdout;
    let b = derbra(&args).stdout;
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn term_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_derbra"))
        .args(["--json", "suite", "truc", "--samples", "2"])
        .env("DB_MAX_TERMS", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["max_terms"], 5);
}
