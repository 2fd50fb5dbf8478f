use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn programs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("programs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setasp"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Golden programs with the flags their `.expected` output was taken with.
const GOLDEN: &[(&str, &[&str])] = &[
    ("example1", &["--min-int", "1", "--max-int", "2", "--show-sigma"]),
    ("p2", &["--mode", "both"]),
    ("p3", &["--mode", "both", "--max-int", "6"]),
    ("p4", &["--mode", "both", "--show-reduct"]),
    ("n0", &["--mode", "both"]),
    ("count_rec", &["--max-int", "3", "--show-sigma"]),
    ("sum_rec", &["--max-int", "6", "--show-sigma"]),
    ("max_def", &["--max-int", "3", "--show-sigma"]),
];

#[test]
fn golden_outputs() {
    for (name, flags) in GOLDEN {
        let file = programs().join(format!("{name}.lp"));
        let expected = std::fs::read_to_string(programs().join(format!("{name}.expected"))).unwrap();
        let mut args = vec!["solve", file.to_str().unwrap()];
        args.extend_from_slice(flags);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name}");
    }
}

#[test]
fn output_is_deterministic() {
    let file = programs().join("example1.lp");
    let args = ["solve", file.to_str().unwrap(), "--min-int", "1", "--max-int", "2", "--json", "--show-sigma"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let atoms = &v["equilibrium"][0]["atoms"];
    assert!(atoms
        .as_array()
        .unwrap()
        .iter()
        .any(|a| a["pred"] == "p" && a["args"][0] == serde_json::json!({ "set": [1] })));
}

#[test]
fn input_errors_exit_with_two() {
    let out = run(&["solve", "/nonexistent/file.lp"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("setasp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.lp");
    std::fs::write(&bad, "p(a :- q.").unwrap();
    let out = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.lp:1:"));

    // The first example passes a set to a predicate, outside the gz fragment.
    let ex1 = programs().join("example1.lp");
    let out = run(&["solve", "--mode", "gz", ex1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("statement"));

    let out = run(&["solve", ex1.to_str().unwrap(), "--min-int", "3", "--max-int", "1"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn random_cross_check_reports_json() {
    let out = run(&["cross-check", "--trials", "30", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trials"], 30);
    assert_eq!(v["agreements"], 30);
    assert_eq!(v["disagreements"], serde_json::json!([]));
}

#[test]
fn cross_check_on_a_file() {
    let p4 = programs().join("p4.lp");
    let out = run(&["cross-check", p4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("AGREE\n"));
}

#[test]
fn transform_prints_the_rewritten_program() {
    let p2 = programs().join("p2.lp");
    let listing = run(&["transform", p2.to_str().unwrap()]);
    let positions = String::from_utf8(listing.stdout).unwrap();
    assert!(positions.lines().any(|l| l == "0:0:0"));
    let out = run(&["transform", p2.to_str().unwrap(), "--position", "0:0:0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p(a) :- V1 = count{X : p(X)}, V1 >= 1."), "{text}");
    let out = run(&["transform", p2.to_str().unwrap(), "--position", "5:0:0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_props_passes() {
    let out = run(&["check-props", "--trials", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
