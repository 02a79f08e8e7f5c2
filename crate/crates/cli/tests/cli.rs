use std::path::Path;
use std::process::{Command, Output};

fn pcramsey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcramsey")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tampered(src: &Path, dst: &Path, from: &str, to: &str) {
    let text = std::fs::read_to_string(src).unwrap();
    assert!(text.contains(from), "{from} not in artifact");
    std::fs::write(dst, text.replacen(from, to, 1)).unwrap();
}

#[test]
fn bounds_prints_the_recursion_values() {
    let o = pcramsey(&["bounds", "--k", "1", "--ms", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3 16\n");
}

#[test]
fn arrow_six_three_two_holds() {
    let o = pcramsey(&["arrow", "--r", "6", "--m", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["checked"], 1 << 15);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pcramsey(&["arrow", "--r", "6"]).status.code(), Some(2));
    assert_eq!(pcramsey(&["arrow", "--r", "65", "--m", "3", "--k", "2"]).status.code(), Some(2));
    assert_eq!(pcramsey(&["a4", "--example", "2.12"]).status.code(), Some(2));
    assert_eq!(pcramsey(&["a4", "--example", "2.11", "--coloring", "first-letter"]).status.code(), Some(2));
    assert_eq!(pcramsey(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tampered_certificates_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("arrow.json");
    let bad = dir.path().join("bad.json");
    let o = pcramsey(&["arrow", "--r", "5", "--m", "3", "--k", "2", "--out", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(pcramsey(&["verify", good.to_str().unwrap()]).status.code(), Some(0));
    write_tampered(&good, &bad, "\"fails\"", "\"holds\"");
    assert_eq!(pcramsey(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));

    let a4 = dir.path().join("a4.json");
    let o = pcramsey(&["a4", "--example", "2.13", "--depth", "6", "--seed", "3", "--out", a4.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(pcramsey(&["verify", a4.to_str().unwrap()]).status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a4).unwrap()).unwrap();
    let color = v["certificate"]["color"].as_u64().unwrap();
    v["certificate"]["color"] = serde_json::json!(1 - color);
    let flipped = serde_json::to_string_pretty(&v).unwrap();
    std::fs::write(&bad, flipped).unwrap();
    assert_eq!(pcramsey(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(pcramsey(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn output_is_identical_across_runs_and_job_counts() {
    let args = ["a4", "--example", "2.11", "--depth", "8", "--k", "2", "--count", "6", "--seed", "11"];
    let one = pcramsey(&[&args[..], &["--jobs", "1"]].concat());
    let four = pcramsey(&[&args[..], &["--jobs", "4"]].concat());
    let again = pcramsey(&args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn axiom_corruption_exits_nonzero() {
    assert_eq!(pcramsey(&["axioms", "--example", "2.13", "--count", "3"]).status.code(), Some(0));
    assert_eq!(pcramsey(&["axioms", "--example", "2.13", "--corrupt", "approx-index"]).status.code(), Some(1));
}

#[test]
fn coloring_files_are_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("hom.json");
    let col = dir.path().join("coloring.json");
    assert_eq!(pcramsey(&["homogenize", "--k", "1", "--ms", "1,2", "--seed", "4", "--out", art.to_str().unwrap()]).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    std::fs::write(&col, serde_json::to_string(&v["coloring"]).unwrap()).unwrap();
    let o = pcramsey(&["homogenize", "--k", "1", "--ms", "1,2", "--coloring", col.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let w: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(w["selection"], v["selection"]);
    assert_eq!(w["seed"], serde_json::Value::Null);
}

#[test]
fn creatures_pretty_prints_words() {
    let o = pcramsey(&["creatures", "--example", "2.13", "--depth", "3", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.contains('v') && l.chars().all(|c| c == 'v' || c == '0' || c == '1')));
}
