use std::process::{Command, Output};

use serde_json::Value;

fn octabill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octabill")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn orbit_of_necklace_center() {
    let out = octabill(&["--command", "orbit", "--seed", "a 0 b 0 a 4 b 2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"], "periodic");
    assert_eq!(v["period"], 8);
    assert_eq!(v["steps_used"], 8);
    assert_eq!(v["seed"]["y"]["b"], "2/1");
}

#[test]
fn orbit_on_a_singular_ray() {
    // A_0 - e_0 lies on the backward extension of the edge A_0A_1
    let v = json(&octabill(&["--command", "orbit", "--seed", "a 1 b 1 a -3 b 0"]));
    assert_eq!(v["outcome"], "singular");
    assert_eq!(v["step"], 0);
}

#[test]
fn aperiodic_seed_runs_out_of_budget() {
    let c = octabill(&["--command", "aperiodic", "--budget", "2000"]);
    assert_eq!(c.status.code(), Some(0));
    let cv = json(&c);
    let part = |axis: &str, k: &str| cv["c"][axis][k].as_str().unwrap().to_string();
    let seed = format!("a {} b {} a {} b {}", part("x", "a"), part("x", "b"), part("y", "a"), part("y", "b"));
    let out = octabill(&["--command", "orbit", "--seed", &seed, "--budget", "5000"]);
    let v = json(&out);
    assert_eq!(v["outcome"], "budget_exceeded", "seed {seed}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--command", "orbit", "--seed", "a 0 b 0 a 0 b 0"][..],
        &["--command", "orbit", "--seed", "a 0.5 b 0 a 4 b 2"],
        &["--command", "orbit"],
        &["--command", "orbit", "--seed", "a 0 b 0 a 4 b 2", "--budget", "0"],
        &["--command", "components", "--depth", "99"],
        &["--command", "explode"],
        &["--format", "svg"],
    ] {
        assert_eq!(octabill(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn inside_table_message() {
    let out = octabill(&["--command", "orbit", "--seed", "a 1/2 b 0 a 1/2 b 0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("table"));
}

#[test]
fn components_json_shape() {
    let v = json(&octabill(&["--command", "components", "--depth", "1"]));
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 4);
    for key in ["level", "address", "center", "side", "period"] {
        assert!(arr[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(arr[0]["period"], 4);
}

#[test]
fn periods_are_family_members() {
    let out = octabill(&["--command", "periods", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_members"], true);
}

#[test]
fn verify_honors_samples() {
    let out = octabill(&["--command", "verify", "--samples", "50", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["samples"], 50);
    let gamma = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "gamma_conjugacy").unwrap();
    assert_eq!(gamma["detail"]["samples"], 50);
}

#[test]
fn svg_outputs() {
    let out = octabill(&["--command", "atlas", "--format", "svg"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="octagon"#).count(), 9);

    let out = octabill(&["--command", "components", "--depth", "3", "--format", "svg"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="octagon"#).count(), 40);

    let out = octabill(&["--command", "orbit", "--seed", "a 0 b 0 a 4 b 2", "--format", "svg"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains(r#"class="orbit""#));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.json");
    let out = octabill(&["--command", "atlas", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["necklace"].as_array().unwrap().len(), 8);
    assert!(out.stdout.is_empty());
}

#[test]
fn unwritable_output_fails() {
    let out = octabill(&["--command", "atlas", "--out", "/proc/nonexistent/dir/x.json"]);
    assert_eq!(out.status.code(), Some(1));
}
