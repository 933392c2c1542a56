use std::path::PathBuf;
use std::process::{Command, Output};

fn leaderdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leaderdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn place_reproduces_the_eleven_node_table() {
    let tree = fixture("tree11.txt");
    let out = leaderdiv(&["place", "--graph", &tree, "--l0", "1", "--R", "nf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = [
        "   2 |   0.000 |   0.000",
        "   3 |   0.500 |   0.637",
        "   4 |   0.556 |   0.849",
        "   5 |   0.583 |   1.003",
        "   6 |   0.583 |   1.003",
        "   7 |   0.556 |   0.687",
        "   8 |   0.556 |   0.687",
        "   9 |   0.556 |   0.687",
        "  10 |   0.639 |   0.937",
        "  11 |   0.639 |   0.937",
    ];
    for row in rows {
        assert!(text.lines().any(|l| l == row), "missing row {row:?} in\n{text}");
    }
    assert!(text.contains("argmax simpson: {10, 11}"));
    assert!(text.contains("argmax shannon: {5, 6}"));
}

#[test]
fn place_path_two_bins_contains_stated_leader() {
    let out = leaderdiv(&["place", "--gen", "path:10", "--l0", "3", "--R", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["argmax_simpson", "argmax_shannon"] {
        let set = doc["result"][key].as_array().unwrap();
        assert!(set.iter().any(|v| v == 8), "{key}: {set:?}");
    }
    assert_eq!(doc["predictor"]["predicted"], serde_json::json!([8]));
}

#[test]
fn place_cycle_attains_log_followers() {
    let out = leaderdiv(&["place", "--gen", "cycle:6", "--l0", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let best = doc["result"]["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["shannon"].as_f64().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - 4f64.ln()).abs() < 1e-9);
    assert!((doc["bounds"]["shannon"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn place_csv_has_one_row_per_candidate() {
    let out = leaderdiv(&["place", "--gen", "ytree:2,2,3", "--l0", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l1,simpson,shannon"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn dump_path_opinions() {
    let out = leaderdiv(&["dump", "--gen", "path:5", "--l0", "1", "--l1", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "node,opinion\n2,0.25\n3,0.5\n4,0.75\n");
}

#[test]
fn dump_table_appends_histogram() {
    let tree = fixture("tree11.txt");
    let out = leaderdiv(&["dump", "--graph", &tree, "--l0", "1", "--l1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let opinions: Vec<&str> = text.lines().skip(1).take_while(|l| !l.is_empty()).collect();
    assert_eq!(opinions.len(), 9);
    assert!(opinions.iter().all(|l| l.ends_with(",1")));
    assert!(text.contains(r#"{"R":9,"n_f":9,"counts":[0,0,0,0,0,0,0,0,9]}"#));
}

#[test]
fn missing_file_fails_without_output() {
    let dir = std::env::temp_dir().join(format!("leaderdiv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.csv");
    let _ = std::fs::remove_file(&target);
    let out = leaderdiv(&[
        "dump",
        "--graph",
        "/nonexistent/graph.txt",
        "--l0",
        "1",
        "--l1",
        "2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!target.exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/graph.txt"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["place", "--l0", "1"],
        vec!["place", "--gen", "path:5", "--graph", "x", "--l0", "1"],
        vec!["place", "--gen", "star:5", "--l0", "1"],
        vec!["place", "--gen", "path:5", "--l0", "9"],
        vec!["place", "--gen", "path:5", "--l0", "1", "--R", "many"],
        vec!["place", "--gen", "path:5", "--l0", "1", "--snap-tol", "-1"],
        vec!["verify", "stars"],
        vec!["verify", "paths", "--bound", "2"],
        vec!["dump", "--gen", "path:5", "--l0", "1", "--l1", "1"],
    ] {
        let out = leaderdiv(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(leaderdiv(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_graph_file_reports_line() {
    let dir = std::env::temp_dir().join(format!("leaderdiv-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.txt");
    std::fs::write(&file, "n 3\n1 2\n2 x\n").unwrap();
    let out = leaderdiv(&["place", "--graph", file.to_str().unwrap(), "--l0", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn verify_suites_pass_and_exit_zero() {
    for (suite, bound) in [("paths", "15"), ("cycles", "12"), ("ytrees", "5"), ("appendix", "12")] {
        let out = leaderdiv(&["verify", suite, "--bound", bound, "--trees", "60"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let text = stdout(&out);
        assert!(text.contains("counterexamples: none"), "{text}");
        assert!(text.trim_end().ends_with("result: PASS (0 counterexamples)"));
    }
}

#[test]
fn verify_csv_lists_checks() {
    let out = leaderdiv(&["verify", "trees-R2", "--bound", "9", "--trees", "20", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("check,instances,failures\n"));
    assert!(text.contains("tree-R=2-balanced-is-optimal,"));
}

#[test]
fn out_flag_writes_file_and_output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("leaderdiv-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("report.json");
    let args = ["place", "--gen", "ytree:3,1,2", "--l0", "4", "--R", "2", "--format", "json"];
    let first = leaderdiv(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let path = target.to_str().unwrap().to_string();
    with_out.extend(["--out", &path]);
    let second = leaderdiv(&with_out);
    assert_eq!(second.status.code(), Some(0));
    assert!(second.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), first.stdout);
    assert_eq!(leaderdiv(&args).stdout, first.stdout);

    let verify_args = ["verify", "appendix", "--bound", "9", "--trees", "30", "--format", "json"];
    assert_eq!(leaderdiv(&verify_args).stdout, leaderdiv(&verify_args).stdout);
}
