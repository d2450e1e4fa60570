use std::process::{Command, Output};

use serde_json::Value;

const P: &str = "x^3 - x^2*(i+j+k) + x*(i-j+k) + 1";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicereg")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn expand_table_lists_example_coefficients() {
    let t = stdout(&["expand", "--f", P, "--q0", "i", "--n", "4"]);
    assert_eq!(t, "s_0 = 0\ns_1 = -1 + i - j + k\ns_2 = -j - k\ns_3 = 1\ns_4 = 0\n");
}

#[test]
fn expand_json_schema() {
    let v: Value = serde_json::from_str(&stdout(&["expand", "--f", P, "--q0", "i", "--n", "4", "--json"])).unwrap();
    assert_eq!(v["N"], 4);
    assert_eq!(v["q0"], serde_json::json!(["0", "1", "0", "0"]));
    assert_eq!(v["coeffs"][1], serde_json::json!(["-1", "1", "-1", "1"]));
    let vf: Value =
        serde_json::from_str(&stdout(&["expand", "--f", P, "--q0", "i", "--n", "4", "--json", "--float"])).unwrap();
    assert_eq!(vf["coeffs"][2], serde_json::json!([0.0, 0.0, -1.0, -1.0]));
}

#[test]
fn eval_delta_on_its_sphere() {
    assert_eq!(stdout(&["eval", "--f", "Delta(i)", "--x", "j"]), "0\n");
    assert_eq!(stdout(&["eval", "--f", "Delta(1/2+1/2i)", "--x", "1/2 + 1/2k"]), "0\n");
}

#[test]
fn syntax_error_is_json_on_stderr() {
    let out = run(&["eval", "--f", "x*", "--x", "j"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "SyntaxError");
    assert_eq!(v["offset"], 2);
    assert!(v["message"].as_str().unwrap().contains("offset 2"));
}

#[test]
fn other_errors_are_json() {
    let out = run(&["expand", "--f", "x^2", "--q0", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "RealBasePoint");
    assert!(v.get("offset").is_none());

    let out = run(&["expand", "--f", "foo", "--q0", "i", "--n", "2"]);
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "UnknownIdentifier");
    assert_eq!(v["offset"], 0);

    let out = run(&["expand", "--q0", "i"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "UsageError");
}

#[test]
fn verify_tables_passes() {
    let out = run(&["verify", "--suite", "tables", "--kmax", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_is_deterministic() {
    let a = stdout(&["verify", "--suite", "oracle", "--seed", "7"]);
    let b = stdout(&["verify", "--suite", "oracle", "--seed", "7"]);
    assert_eq!(a, b);
    assert!(a.contains("20/20"));
}

#[test]
fn derive_routes_agree() {
    let t = stdout(&["derive", "--f", "x^4*j + x*(1/2 - k)", "--q0", "1+i", "--n", "6"]);
    assert!(t.ends_with("# routes agree exactly: true\n"), "{t}");
}

#[test]
fn converge_csv() {
    let t = stdout(&["converge", "--f", "exp()", "--q0", "1+2i", "--radius", "0.5", "--n", "12", "--grid", "4"]);
    let mut lines = t.lines();
    assert_eq!(lines.next(), Some("alpha,beta,slice_unit,abs_error"));
    let errs: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert!(!errs.is_empty());
    assert!(errs.iter().all(|e| *e < 1e-8), "{errs:?}");
}

/// `expand --json` summed by `eval --expansion` agrees with `eval --f`.
#[test]
fn expand_eval_round_trip() {
    let dir = std::env::temp_dir().join(format!("slicereg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let probes = ["0", "2 + i", "-1/2 + 1/3j - k", "i + j", "3/2 - 2/3i + 1/5k"];
    for (f, q0, n) in [(P, "i", "3"), ("x^5*(1/2j) - Delta(1+k)*x + 3", "1/3 + 2i", "6")] {
        let path = dir.join("e.json");
        std::fs::write(&path, stdout(&["expand", "--f", f, "--q0", q0, "--n", n, "--json"])).unwrap();
        let p = path.to_str().unwrap();
        for x in probes {
            let direct = stdout(&["eval", "--f", f, "--x", x]);
            let summed = stdout(&["eval", "--expansion", p, "--x", x]);
            assert_eq!(direct, summed, "f = {f}, x = {x}");
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}
