use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperint"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/gr_cited.json")
}

fn value_line(out: &str, key: &str) -> f64 {
    let line = out.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {out}"));
    line[key.len()..].trim().parse().unwrap()
}

#[test]
fn eval_prints_known_values() {
    for (args, expected) in [
        (vec!["--family", "I1", "--nu", "1", "--b", "1"], std::f64::consts::FRAC_PI_2),
        (vec!["--family", "I1'", "--mu", "2", "--nu", "1", "--b", "1"], 1.8319311883),
        (vec!["--family", "I3'", "--mu", "2", "--nu", "1", "--b", "1"], 2.4674011003),
    ] {
        let mut full = vec!["eval"];
        full.extend(args);
        let o = run(&full);
        assert!(o.status.success(), "{full:?}");
        let v = value_line(&stdout(&o), "value");
        assert!((v - expected).abs() < 1e-10, "{full:?}: {v}");
    }
}

#[test]
fn eval_with_oracle_reports_difference() {
    let o = run(&["eval", "--family", "trig-sin-cosh", "--m", "1", "--a", "0.5", "--oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("formula_id trig-sin-cosh-tanh-psi"), "{out}");
    assert!(value_line(&out, "difference") < 1e-10);
}

#[test]
fn eval_exit_codes() {
    let o = run(&["eval", "--family", "I3", "--nu", "1.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotConvergent"));
    assert_eq!(run(&["eval", "--family", "I7"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--nu", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "I1", "--nu", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_bundled_corpus_passes() {
    let o = run(&["verify", corpus().to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.contains("0 failed"));
}

#[test]
fn verify_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, "[]").unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("no cases"), "{out}");
    assert!(out.contains("0 cases"));
}

#[test]
fn verify_reports_nonconvergent_case() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"[{"id": "ok", "family": "I1", "nu": "1"}, {"id": "bad", "family": "I3", "nu": "1.5"}]"#)
        .unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let bad = out.lines().find(|l| l.contains("bad")).unwrap();
    assert!(bad.starts_with("FAIL") && bad.contains("NotConvergent"), "{bad}");
    assert!(out.lines().any(|l| l.starts_with("PASS") && l.contains(" ok ")));
}

#[test]
fn verify_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "[{\"id\": ").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, r#"[{"id": "x", "family": "I1", "unknown": 1}]"#).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let o = run(&[
            "verify",
            corpus().to_str().unwrap(),
            "--random",
            "20",
            "--seed",
            "77",
            "--jobs",
            jobs,
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let text = std::fs::read_to_string(&path).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["summary"]["seed"], 77);
        assert_eq!(doc["summary"]["total"], 69);
        reports.push(text[..text.find("\"timings\"").unwrap()].to_string());
    }
    assert_eq!(reports[0], reports[1]);
}
