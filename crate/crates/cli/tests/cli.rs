use std::path::Path;
use std::process::{Command, Output};

use nearcomp_cli::file::CodewordFile;
use nearcomp_cli::sig12;

fn nearcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn construct_example(out: &Path) {
    let o = nearcomp(&[
        "construct",
        "--m",
        "3",
        "--modulation",
        "16qam",
        "--c",
        "1,1,1,0",
        "--offset",
        "0,1,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construct_reproduces_example_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    construct_example(&path);
    let file: CodewordFile =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.components["D"], vec![0, 1, 1, 0, 1, 2, 0, 3]);
    assert_eq!(file.components["E"], vec![1, 2, 3, 2, 2, 3, 0, 3]);
    assert!((file.pmepr.unwrap() - 2.1).abs() <= 0.05);
    assert!((file.star_over_n.unwrap() - 2.4).abs() < 1e-9);
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    construct_example(&a);
    construct_example(&b);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn roundtrip_verifies_and_corruption_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    construct_example(&path);
    let o = nearcomp(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );

    let mut file: CodewordFile =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    file.symbols[3] = [3, 3];
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let o = nearcomp(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("symbols"));

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        nearcomp(&["verify", "--input", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn constraint_violations_exit_2_and_name_the_constraint() {
    let o = nearcomp(&[
        "construct",
        "--m",
        "3",
        "--modulation",
        "16qam",
        "--c",
        "0,0,0,0",
        "--offset",
        "1,1,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d1+2d3=2"));

    let o = nearcomp(&[
        "construct",
        "--m",
        "3",
        "--modulation",
        "64qam",
        "--c",
        "0,0,0,0",
        "--offset",
        "0,1,1,0,1",
        "--kind",
        "type2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = nearcomp(&[
        "construct",
        "--m",
        "3",
        "--modulation",
        "64qam",
        "--c",
        "0,0,0,0",
        "--offset",
        "0,1,1,0,0",
        "--kind",
        "type2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("h1+2h3=2"));

    let o = nearcomp(&[
        "construct",
        "--m",
        "2",
        "--modulation",
        "16qam",
        "--c",
        "0,0,0",
        "--offset",
        "0,1,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m > 2"));

    let o = nearcomp(&[
        "construct",
        "--m",
        "3",
        "--modulation",
        "32qam",
        "--c",
        "0,0,0,0",
        "--offset",
        "0,1,1",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = nearcomp(&[
        "ccdf",
        "--m",
        "3",
        "--modulation",
        "16qam",
        "--oversample",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_lines() {
    let o = nearcomp(&[
        "enumerate",
        "--m",
        "3",
        "--modulation",
        "64qam",
        "--count-only",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumerated"], 49152);
    assert_eq!(v["closed_form"], "49152");

    let o = nearcomp(&["enumerate", "--m", "3", "--modulation", "16qam"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6144);
    let first: CodewordFile = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first.pi, vec![0, 1, 2]);
    assert_eq!(first.c, vec![0, 0, 0, 0]);

    let o = nearcomp(&["enumerate", "--m", "4", "--modulation", "64qam"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--stream"));
}

#[test]
fn ccdf_is_deterministic_and_thread_independent() {
    let args = [
        "ccdf",
        "--m",
        "3",
        "--modulation",
        "16qam",
        "--baseline-count",
        "500",
        "--seed",
        "7",
    ];
    let a = nearcomp(&args);
    let mut with_threads = vec!["--threads", "1"];
    with_threads.extend_from_slice(&args);
    let b = nearcomp(&with_threads);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "threshold_linear,threshold_db,ccdf_constructed,ccdf_baseline"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 181);
    for r in &rows {
        if r[0] >= 2.4 {
            assert_eq!(r[2], 0.0);
        }
    }
    let at = rows.iter().find(|r| r[0] == 2.4).unwrap();
    assert!(at[3] > 0.0);
}

#[test]
fn verify_examples_suite_passes() {
    let o = nearcomp(&["verify", "--suite", "examples"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn twelve_significant_digits() {
    assert_eq!(sig12(0.0), "0");
    assert_eq!(sig12(2.4), "2.4");
    assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
    assert_eq!(sig12(10.0 * 2.4f64.log10()), "3.80211241712");
}
