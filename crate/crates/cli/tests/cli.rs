use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn amc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amc"))
        .args(args)
        .env_remove("AMC_BUDGET_PROFILE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn apolar_of_e2_plus_e4() {
    let out = amc(&["apolar", "--point", "0,0,1,0,1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["g1"], "S^3*T - S*T^3");
    assert_eq!(v["g2"], "S^4 - S^2*T^2 + T^4");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(amc(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(amc(&["certify"]).status.code(), Some(64));
    assert_eq!(amc(&["certify", "--rnc", "5", "--monomial-center", "d=6,c=3"]).status.code(), Some(64));
    let bad_profile = Command::new(env!("CARGO_BIN_EXE_amc"))
        .args(["certify", "--rnc", "5"])
        .env("AMC_BUDGET_PROFILE", "bogus")
        .output()
        .unwrap();
    assert_eq!(bad_profile.status.code(), Some(64));
}

#[test]
fn caps_exit_3_and_short_searches_exit_2() {
    let gb = amc(&["gb", "--vars", "x,y,z", "--ideal", "x^2-y*z;x*y-z^2;y^3-x*z^2", "--max-pairs", "1"]);
    assert_eq!(gb.status.code(), Some(3));
    let h = amc(&["harvest", "--monomial-center", "d=6,c=3", "--samples", "2"]);
    assert_eq!(h.status.code(), Some(2));
    assert_eq!(json(&h)["complete"], false);
}

#[test]
fn decided_outcomes_exit_0() {
    let holds = amc(&["certify", "--k", "3", "--monomial-center", "d=6,c=3"]);
    assert_eq!(holds.status.code(), Some(0));
    assert_eq!(json(&holds)["outcome"], "holds");
    let fails = amc(&["certify", "--k", "3", "--monomial-center", "d=5,c=2"]);
    assert_eq!(fails.status.code(), Some(0));
    assert_eq!(json(&fails)["outcome"], "fails");
}

#[test]
fn certificates_round_trip_through_verify() {
    for (name, scheme) in [("qr.json", "d=6,c=3"), ("obs.json", "d=5,c=2")] {
        let out = amc(&["--verify", "certify", "--k", "3", "--monomial-center", scheme]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["verified"], true);
        let path = scratch(name);
        std::fs::write(&path, &out.stdout).unwrap();
        let arg = format!("--verify={}", path.display());
        let ok = amc(&[&arg]);
        assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
        assert_eq!(json(&ok)["valid"], true);

        let mut v = json(&out);
        let entry = if v["outcome"] == "holds" {
            &mut v["basis_matrix"][0][0]
        } else {
            &mut v["forms"][0]["form"][0]
        };
        let bumped = format!("{}1", entry.as_str().unwrap().trim_start_matches('-'));
        *entry = Value::String(bumped);
        std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
        let bad = amc(&[&arg]);
        assert_eq!(bad.status.code(), Some(1));
        assert_eq!(json(&bad)["valid"], false);
    }
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["--seed", "5", "scan", "--conjecture", "1.4", "--d", "5", "--samples", "3"];
    let a = amc(&args);
    let b = amc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn text_output_is_a_flat_summary() {
    let out = amc(&["--text", "rank", "--point", "0,0,1,0,1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "rank: 4"), "{text}");
}

#[test]
fn shipped_fixtures_pass() {
    let out = amc(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 20);
}
