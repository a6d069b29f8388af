use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_consensus"))
}

fn example() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/paper_4_2.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_line(o: &Output) -> f64 {
    stdout(o).lines().last().unwrap().trim().parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("consensus-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

const SINGLE: &str = r#"{"schema_version": 1, "session_id": "solo", "stage": "x",
  "alternatives": [{"id": "A"}, {"id": "B"}],
  "participants": [{"id": "P1"}],
  "individual_ranks": {"P1": [2, 1]},
  "group_ranks": [1, 2]}"#;

#[test]
fn analyze_reports_homogeneity_on_last_line() {
    let ex = example();
    let ex = ex.to_str().unwrap();
    for format in ["json", "csv", "md"] {
        let o = run(&["analyze", "--session", ex, "--mode", "per-alternative", "--format", format]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!((last_line(&o) - 0.3768).abs() < 1e-4);
    }
    let o = run(&["analyze", "--session", ex, "--mode", "per-learner"]);
    assert!((last_line(&o) - 0.5976).abs() < 1e-4);
}

#[test]
fn analyze_json_body_and_out_file() {
    let dir = scratch("out");
    let out = dir.join("report.json");
    let ex = example();
    let o = run(&["analyze", "--session", ex.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["homogeneity"], serde_json::json!(0.376809));
    assert_eq!(doc["column_totals"], serde_json::json!([2, 1, 3, 5, 4]));
    assert_eq!(doc["pairwise"][1][2], serde_json::json!(0.25));
    assert_eq!(doc["perfect_consensus"], serde_json::json!(false));

    let again = run(&["analyze", "--session", ex.to_str().unwrap()]);
    let first = run(&["analyze", "--session", ex.to_str().unwrap()]);
    assert_eq!(again.stdout, first.stdout);
}

#[test]
fn analyze_error_codes() {
    let o = run(&["analyze", "--session", "/nonexistent/session.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let dir = scratch("single");
    let p = dir.join("single.json");
    fs::write(&p, SINGLE).unwrap();
    let o = run(&["analyze", "--session", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["pairwise", "--session", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let bad = dir.join("bad.json");
    fs::write(&bad, SINGLE.replace("\"group_ranks\": [1, 2]", "\"stage2\": 1")).unwrap();
    let o = run(&["analyze", "--session", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn perfect_consensus_json() {
    let dir = scratch("perfect");
    let p = dir.join("s.json");
    let doc = SINGLE
        .replace(r#"[{"id": "P1"}]"#, r#"[{"id": "P1"}, {"id": "P2"}]"#)
        .replace(r#"{"P1": [2, 1]}"#, r#"{"P1": [1, 2], "P2": [1, 2]}"#);
    fs::write(&p, doc).unwrap();
    let o = run(&["analyze", "--session", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"homogeneity\": 1.0"));
    assert!(text.contains("\"perfect_consensus\": true"));
}

#[test]
fn reproduce_flag_prints_side_by_side() {
    let o = run(&["analyze", "--reproduce-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[2, 1, 3, 5, 4]"));
    assert!(text.contains("homogeneity (pub. a/g)"));
    assert!((last_line(&o) - 0.3768).abs() < 1e-4);
}

#[test]
fn pairwise_matrix() {
    let ex = example();
    let o = run(&["pairwise", "--session", ex.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m: Vec<Vec<f64>> = serde_json::from_value(doc["pairwise"].clone()).unwrap();
    assert_eq!(m.len(), 3);
    for a in 0..3 {
        assert_eq!(m[a][a], 1.0);
        for b in 0..3 {
            assert_eq!(m[a][b], m[b][a]);
        }
    }
    assert_eq!(m[1][2], 0.25);
    let csv = run(&["pairwise", "--session", ex.to_str().unwrap(), "--format", "csv"]);
    assert!(stdout(&csv).starts_with("# pairwise\nparticipant,L1,L2,L3\n"));
}

#[test]
fn ahp_subcommand() {
    let dir = scratch("ahp");
    let two = dir.join("two.csv");
    fs::write(&two, "1,3\n1/3,1\n").unwrap();
    let o = run(&["ahp", "--matrix", two.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["priorities"], serde_json::json!([0.75, 0.25]));
    assert_eq!(doc["consistency_ratio"], serde_json::json!(0.0));

    let three = dir.join("three.csv");
    fs::write(&three, "1,2,4\n1/2,1,2\n1/4,1/2,1\n").unwrap();
    for method in ["eig", "gmean"] {
        let o = run(&["ahp", "--matrix", three.to_str().unwrap(), "--method", method]);
        let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(doc["consistency_ratio"].as_f64().unwrap().abs() < 1e-8);
        assert!(o.stderr.is_empty());
    }

    let bad = dir.join("bad.csv");
    fs::write(&bad, "1,2\n0.4,1\n").unwrap();
    assert_eq!(run(&["ahp", "--matrix", bad.to_str().unwrap()]).status.code(), Some(2));

    let inconsistent = dir.join("inc.csv");
    fs::write(&inconsistent, "1,9,1/9\n1/9,1,9\n9,1/9,1\n").unwrap();
    let o = run(&["ahp", "--matrix", inconsistent.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

fn summative(project: &str, dir: &Path) -> Output {
    let p = dir.join("project.json");
    fs::write(&p, project).unwrap();
    run(&["summative", "--project", p.to_str().unwrap()])
}

#[test]
fn summative_subcommand() {
    let dir = scratch("summative");
    let stages = r#"[{"stage": "a", "homogeneity": 0.56}, {"stage": "b", "homogeneity": 0.60}, {"stage": "c", "homogeneity": 0.40}]"#;
    let o = summative(&format!(r#"{{"project_id": "p", "threshold": 0.5, "stages": {stages}}}"#), &dir);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["h_tot"], serde_json::json!(0.52));
    assert_eq!(doc["verdict"], "homogeneous");

    let o = summative(&format!(r#"{{"project_id": "p", "threshold": 0.7, "stages": {stages}}}"#), &dir);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["verdict"], "heterogeneous");

    let o = summative(r#"{"project_id": "p", "threshold": 0.5, "stages": []}"#, &dir);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn summative_analyzes_session_stages() {
    let dir = scratch("stages");
    fs::copy(example(), dir.join("site.json")).unwrap();
    let o = summative(
        r#"{"project_id": "p", "threshold": 0.5, "stages": [
            {"stage": "selection", "session_path": "site.json"},
            {"stage": "planning", "homogeneity": 0.9}]}"#,
        &dir,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["stages"][0]["homogeneity"], serde_json::json!(0.376809));
    let h = doc["h_tot"].as_f64().unwrap();
    assert!((h - (0.376_808_657 + 0.9) / 2.0).abs() < 1e-6);

    let o = summative(
        r#"{"project_id": "p", "threshold": 0.5, "stages": [{"stage": "x", "session_path": "missing.json"}]}"#,
        &dir,
    );
    assert_eq!(o.status.code(), Some(2));
}
