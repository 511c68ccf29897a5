use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainlevel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_level_file() {
    let o = run(&["analyze", &example("level_4_2_2.json"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("chain canonical: NOT LEVEL (witness: d > a1 < a4 > d)"), "{out}");
    assert!(out.contains("order canonical: LEVEL"));
    assert!(out.contains("canonical generator degrees: [6, 7] (d0 = 6, dmax = 7)"));
    assert!(out.contains("canonical generator degrees by search: [6, 7]"));
}

#[test]
fn analyze_chain_json() {
    let o = run(&["--json", "analyze", &example("chain2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in v["level"].as_array().unwrap() {
        assert_eq!(r["verdict"], true);
    }
    assert_eq!(v["spectra"][0]["formula"]["degrees"], serde_json::json!([3]));
    assert_eq!(v["spectra"][1]["formula"]["degrees"], serde_json::json!([-3]));
}

#[test]
fn bad_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("chainlevel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"elements\": [\"x\"").unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    let cyc = dir.join("cycle.json");
    std::fs::write(&cyc, r#"{"elements":["x","y"],"covers":[["x","y"],["y","x"]]}"#).unwrap();
    assert_eq!(run(&["analyze", cyc.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/nonexistent/poset.json"]).status.code(), Some(2));
    assert_eq!(run(&["examples", "level", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn element_bound_is_configurable() {
    let o = run(&["examples", "antican", "--n", "5"]);
    let dir = std::env::temp_dir().join(format!("chainlevel-cli-big-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("antican.json");
    std::fs::write(&f, &o.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 21);
    assert_eq!(run(&["analyze", f.to_str().unwrap()]).status.code(), Some(2));
    let o = run(&["--max-elements", "21", "analyze", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("chain anticanonical: NOT LEVEL (witness: d2 > a1 < a8 > d2)"));
    assert!(out.contains("anticanonical generator degrees: [-4, 1]"));
}

#[test]
fn verify_checks() {
    let o = run(&["verify", &example("chain2.json"), "--power", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("symbolic power n=2 eps=+1: PASS"));
    let o = run(&["verify", &example("level_4_2_2.json"), "--hilbert", "3", "--generators"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Hilbert functions agree up to 3: PASS"));
    assert!(out.contains("generator tests agree: PASS"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = run(&[
        "--budget",
        "1000",
        "verify",
        &example("level_4_2_2.json"),
        "--power",
        "2",
        "--degree-cap",
        "40",
        "--entry-cap",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sequences_listing() {
    let o = run(&["sequences", &example("level_4_2_2.json"), "--eps", "1", "--reduced-only"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.trim() == "7  d > a1 < a4 > d"), "{out}");
    let o = run(&["--json", "sequences", &example("chain2.json"), "--eps", "-1", "--variant", "N"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|s| s["q"].as_i64().unwrap() <= -3));
}
