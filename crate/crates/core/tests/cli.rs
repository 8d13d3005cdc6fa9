use std::process::{Command, Output};

use serde_json::Value;

fn kleinlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinlat")).args(args).output().expect("spawn kleinlat")
}

fn stable(out: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    for r in v.as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("millis");
    }
    v
}

#[test]
fn unknown_check_is_a_usage_error() {
    assert_eq!(kleinlat(&["verify", "bogus"]).status.code(), Some(64));
    assert_eq!(kleinlat(&["verify"]).status.code(), Some(64));
    assert_eq!(kleinlat(&["--format", "yaml", "verify", "--all"]).status.code(), Some(64));
    assert_eq!(kleinlat(&["--jobs", "0", "verify", "recovery"]).status.code(), Some(64));
}

#[test]
fn verify_reports_in_requested_order() {
    let ids = ["recovery", "lemma-LHo1", "code-counts"];
    let mut args = vec!["--format", "json", "--jobs", "3", "verify"];
    args.extend(ids);
    let out = kleinlat(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = stable(&out);
    let got: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(got, ids);
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn json_is_deterministic_modulo_timing() {
    let a = kleinlat(&["--format", "json", "verify", "lemma-LHo1", "construction-identities"]);
    let b = kleinlat(&["--format", "json", "--jobs", "2", "verify", "lemma-LHo1", "construction-identities"]);
    assert_eq!(stable(&a), stable(&b));
    let n4 = &stable(&a)[0]["certificate"]["n4"];
    assert_eq!(n4.as_array().unwrap().len(), 2);
}

#[test]
fn list_matches_registry() {
    let out = kleinlat(&["verify", "--list"]);
    let lines: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(lines, kleinlat::checks::CHECK_IDS);
}

#[test]
fn file_subcommands() {
    let dir = std::env::temp_dir().join(format!("kleinlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let k = dir.join("eps2.txt");
    std::fs::write(&k, "# epsilon_2\nkleinian 2\naa\nbb\n").unwrap();
    let out = kleinlat(&["--format", "json", "codes", k.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["construction_a"]["weight_enumerator"][4], 14);

    let c = dir.join("e8.txt");
    std::fs::write(&c, "binary 8\n11110000\n00001111\n11001100\n10101010\n").unwrap();
    let out = kleinlat(&["--format", "json", "--precision", "2", "lattices", c.to_str().unwrap(), "--construction", "a"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["unimodular"], true);
    assert_eq!(v["norm2_vectors"], 240);
    assert_eq!(kleinlat(&["lattices", c.to_str().unwrap()]).status.code(), Some(64));

    let out = kleinlat(&[
        "--format",
        "json",
        "--precision",
        "1",
        "qseries",
        c.to_str().unwrap(),
        "--construction",
        "a",
        "--kind",
        "vl",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = v["terms"].as_array().unwrap();
    // q^{-1/3} (1 + 248 q + ...)
    assert_eq!(terms[0], serde_json::json!([-16, "1"]));
    assert_eq!(terms[1], serde_json::json!([32, "248"]));

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "lattice 8 2\n1 0 0 0 0 0 0 0\n").unwrap();
    let out = kleinlat(&["lattices", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    std::fs::remove_dir_all(&dir).unwrap();
}
