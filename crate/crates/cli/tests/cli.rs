use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args(args)
        .arg("-q")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("milnor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn dim_braid_both_agree() {
    let out = run(&["dim", &fixture("braid6.arr"), "--m", "3", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let o = &v["result"]["orders"][0];
    assert_eq!(o["monodromy"], 1);
    assert_eq!(o["fox"], 1);
    assert_eq!(o["agree"], true);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 0);
    assert_eq!(v["arrangement_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn dim_hessian_agrees() {
    let out = run(&["dim", &fixture("hessian.arr"), "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let o = &json(&out)["result"]["orders"][0];
    assert_eq!(o["agree"], true);
    assert!(o["dim"].as_u64().unwrap() >= 1);
    assert_eq!(o["diagram"]["source"], "tracked");
}

#[test]
fn analyze_outcomes() {
    let out = run(&["analyze", &fixture("hessian.arr"), "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let o = &json(&out)["result"]["orders"][0];
    assert_eq!(o["theorem1"]["status"], "Inconclusive");
    assert_eq!(o["theorem2"]["status"], "Inconclusive");
    assert_eq!(o["r"], 4);

    let out = run(&["analyze", &fixture("ghessian52.arr"), "--m", "4", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
    let o = &json(&out)["result"]["orders"][0];
    assert_eq!(o["theorem2"]["theorem"], "T2");

    let out = run(&["analyze", &fixture("generic6.arr"), "--method", "all", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for o in v["result"]["orders"].as_array().unwrap() {
        assert_eq!(o["theorem2"]["status"], "Vanishes");
    }
    assert!(v["result"]["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["dim"] == 0));
}

#[test]
fn strict_inconclusive_exit() {
    let out = run(&["analyze", &fixture("hessian.arr"), "--m", "4", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["analyze", &fixture("braid6.arr"), "--strict", "--method", "all"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exit() {
    let bad = tmp("bad.arr");
    std::fs::write(&bad, "ambient_dim = 3\n[1, 0, 0]\n[0, 1]\n").unwrap();
    let out = run(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(run(&["analyze", "/nonexistent.arr"]).status.code(), Some(2));
    assert_eq!(run(&["dim", &fixture("braid6.arr"), "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", &fixture("braid_space.arr")]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", &fixture("braid_space.arr"), "--lattice-only"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn byte_identical_reports() {
    for args in [
        vec!["analyze", &fixture("hessian.arr") as &str],
        vec!["dim", &fixture("hessian.arr"), "--m", "4", "--seed", "7"],
        vec!["section", &fixture("braid_space.arr"), "--seed", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn certificate_round_trip() {
    let report = tmp("ghessian.json");
    let out = run(&["analyze", &fixture("ghessian52.arr"), "--m", "4", "-o", &report]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify-cert", &fixture("ghessian52.arr"), &report]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["valid"], true);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let t2 = v["result"]["orders"][0]["theorem2"].take();
    let mut cert = t2.clone();
    cert["witnesses"][0]["flat"].as_array_mut().unwrap().pop();
    let single = tmp("tampered.json");
    std::fs::write(&single, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = run(&["verify-cert", &fixture("ghessian52.arr"), &single]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["valid"], false);

    // Certificate for a different arrangement.
    std::fs::write(&single, serde_json::to_string(&t2).unwrap()).unwrap();
    assert_eq!(
        run(&["verify-cert", &fixture("hessian.arr"), &single]).status.code(),
        Some(2)
    );
}

#[test]
fn generate_writes_files() {
    let path = tmp("r2.arr");
    let out = run(&["generate", "remark26ii", "-o", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["degree"], 40);
    let out = run(&["generate", "hessian", "--b", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ambient_dim = 3"));
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 12);
}

#[test]
fn sum_roots_examples() {
    let v = json(&run(&["sum-roots", "--m", "12", "0", "3", "4", "8", "9"]));
    assert_eq!(v["result"]["is_zero"], true);
    assert_eq!(v["result"]["nonvanishing_guaranteed"], false);
    let v = json(&run(&["sum-roots", "--m", "7", "0", "2", "5"]));
    assert_eq!(v["result"]["is_zero"], false);
    assert_eq!(v["result"]["nonvanishing_guaranteed"], true);
}

#[test]
fn section_then_dim() {
    let path = tmp("section.arr");
    let out = run(&["section", &fixture("braid_space.arr"), "-o", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&run(&["dim", &path, "--m", "3"]));
    assert_eq!(v["result"]["orders"][0]["dim"], 1);
}
