use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fiberscope"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fiberscope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn mapping_torus_has_b1_one() {
    let f = scratch("pi.json");
    let out = run(&["pi", "--genus", "2", "--out", f.to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&run(&["excessive", "--in", f.to_str().unwrap()]));
    assert_eq!(r["b1"], 1);
    assert_eq!(r["excessive_dim"], 0);
}

#[test]
fn two_generator_example() {
    let f = scratch("k3.json");
    std::fs::write(&f, run(&["korkmaz", "--genus", "3"]).stdout).unwrap();
    let r = json(&run(&["excessive", "--in", f.to_str().unwrap()]));
    assert_eq!((r["b1"].as_u64(), r["excessive_dim"].as_u64()), (Some(2), Some(0)));
    // genus 2 is rejected
    assert_eq!(run(&["korkmaz", "--genus", "2"]).status.code(), Some(2));
}

#[test]
fn validation_errors_exit_two() {
    let f = scratch("bad.json");
    std::fs::write(
        &f,
        r#"{"fiber_genus": 2, "base": {"free": 1}, "monodromies": [{"symplectic": [[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}]}"#,
    )
    .unwrap();
    let out = run(&["excessive", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monodromies[0].symplectic"));

    std::fs::write(&f, "{\"fiber_genus\": 2,\n \"base\": }").unwrap();
    let out = run(&["excessive", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn certify_exits_three_on_cap() {
    let f = scratch("pi-cap.json");
    std::fs::write(&f, run(&["pi", "--genus", "2"]).stdout).unwrap();
    let p = f.to_str().unwrap();
    let args = ["virtual-excessive", "--in", p, "--mod", "1", "--base-mod", "2", "--cap-index", "5"];
    assert_eq!(run(&args).status.code(), Some(0));
    let mut certified = args.to_vec();
    certified.push("--certify");
    assert_eq!(run(&certified).status.code(), Some(3));
    let found = json(&run(&["virtual-excessive", "--in", p, "--mod", "1", "--base-mod", "10", "--cap-index", "100"]));
    assert_eq!(found["verdict"], "FoundExcess");
    assert_eq!(found["entries"].as_array().unwrap().last().unwrap()["excessive_dim"], 4);
}

#[test]
fn torsion_of_the_hyperelliptic_involution() {
    let f = scratch("minus.json");
    std::fs::write(
        &f,
        r#"{"fiber_genus": 2, "base": {"free": 1}, "monodromies": [{"symplectic": [[-1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]}]}"#,
    )
    .unwrap();
    let r = json(&run(&["p-torsion", "--in", f.to_str().unwrap(), "--prime", "2", "--mod", "1"]));
    assert_eq!(r["verdict"], "Found");
    assert_eq!(r["entries"][0]["torsion"], serde_json::json!([2, 2, 2, 2]));
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&["prym", "--samples", "2", "--seed", "7"]);
    let b = run(&["prym", "--samples", "2", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["homology_dim"], 34);
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys[..3], ["genus", "modulus", "cover_genus"]);
}

#[test]
fn threads_variable_is_validated() {
    let out = bin().env("FIBERSCOPE_THREADS", "zero").args(["pi"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().env("FIBERSCOPE_THREADS", "2").args(["pi"]).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--only", "2", "--format", "text"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("[PASS]  2 chain element order"));
}
