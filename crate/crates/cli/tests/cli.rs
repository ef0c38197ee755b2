use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn welded(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_welded")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

#[test]
fn validate_reports_problems() {
    let ok = welded(&["validate", &fixture("H.gd")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "ok\n");
    let bad = welded(&["validate", &fixture("bad.gd")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).starts_with("error: "));
}

#[test]
fn malformed_input_exits_2() {
    let cases = [
        vec!["invariant".to_string(), fixture("garbled.gd")],
        vec!["invariant".to_string(), fixture("missing.gd")],
        vec!["milnor".to_string(), "--index".to_string(), "1,4".to_string(), fixture("B.gd")],
        vec!["equiv".to_string(), fixture("H.gd"), fixture("B.gd")],
        vec!["milnor".to_string(), fixture("B.gd")],
        vec!["bogus".to_string()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = welded(&refs);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn invariant_of_h() {
    let o = welded(&["invariant", &fixture("H.gd")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["n"], 2);
    assert_eq!(v["conjugators"], serde_json::json!(["x2^-1", ""]));
}

#[test]
fn equiv_decides_link_homotopy() {
    let same = welded(&["equiv", &fixture("H.gd"), &fixture("H.gd")]);
    assert_eq!((same.status.code(), stdout(&same).as_str()), (Some(0), "equivalent\n"));
    let noisy = welded(&["equiv", &fixture("H.gd"), &fixture("H_noisy.gd")]);
    assert_eq!(noisy.status.code(), Some(0));
    let back = welded(&["equiv", &fixture("H_noisy.gd"), &fixture("H.gd")]);
    assert_eq!(back.status.code(), Some(0));
    let differ = welded(&["equiv", &fixture("H.gd"), &fixture("trivial2.gd")]);
    assert_eq!((differ.status.code(), stdout(&differ).as_str()), (Some(1), "inequivalent\n"));
}

#[test]
fn milnor_outputs() {
    let one = json(&welded(&["milnor", "--index", "1,2,3", &fixture("B.gd")]));
    assert_eq!(one, serde_json::json!({ "I": [1, 2, 3], "mu": -1 }));
    let all = json(&welded(&["milnor", "--all-upto", "3", &fixture("B.gd")]));
    assert_eq!(all["filtration_order"], "3");
    let rows = all["invariants"].as_array().unwrap();
    assert_eq!(rows.len(), 9 + 27);
    assert!(rows.iter().any(|r| r["I"] == serde_json::json!([2, 1, 3]) && r["mu"] == 1));
    let h = json(&welded(&["milnor", "--all-upto", "2", &fixture("H.gd")]));
    assert_eq!(h["filtration_order"], "2");
}

#[test]
fn pi1_json() {
    let v = json(&welded(&["pi1", &fixture("H.gd")]));
    assert_eq!(v["generators"], serde_json::json!(["m_1^0", "m_1^1", "m_2^0"]));
    assert_eq!(v["relations"][0]["lhs"], "m_1^1");
    assert_eq!(v["relations"][0]["sign"], -1);
}

#[test]
fn random_and_normalize_round_trip() {
    let a = welded(&["random", "--n", "3", "--arrows", "6", "--seed", "11"]);
    let b = welded(&["random", "--n", "3", "--arrows", "6", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("welded-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("r.gd");
    std::fs::write(&src, &a.stdout).unwrap();
    for mode in ["ascending", "horizontal"] {
        let o = welded(&["normalize", "--mode", mode, "--certify", src.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{mode}");
        let out = dir.join(format!("{mode}.gd"));
        std::fs::write(&out, &o.stdout).unwrap();
        let e = welded(&["equiv", src.to_str().unwrap(), out.to_str().unwrap()]);
        assert_eq!(e.status.code(), Some(0), "{mode}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fuzz_reports_success() {
    let o = welded(&["fuzz", "--trials", "30", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["counterexample"].is_null());
    assert_eq!(v["trials"], 30);
    assert_eq!(json(&welded(&["fuzz", "--trials", "30", "--seed", "5"])), v);
}
