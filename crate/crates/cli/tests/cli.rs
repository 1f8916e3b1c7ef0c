use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use trifix_cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn trifix(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("trifix").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn example(args: &[&str]) -> String {
    let mut full = vec!["example"];
    full.extend_from_slice(args);
    let r = trifix(&full);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    r.stdout
}

#[test]
fn hp2_example_document() {
    let doc: Value = serde_json::from_str(&example(&["--family", "hp2", "--a", "1", "--b", "1", "--c", "1"])).unwrap();
    assert_eq!(
        doc,
        serde_json::json!({"dim": 8, "points": [
            {"sign": 1, "weights": [1, 2, 2, 3]},
            {"sign": 1, "weights": [1, 1, 2, 2]},
            {"sign": -1, "weights": [1, 1, 1, 3]}
        ]})
    );
}

#[test]
fn other_example_families() {
    let s: Value = serde_json::from_str(&example(&["--family", "sphere", "--weights", "1,2"])).unwrap();
    assert_eq!(s["points"].as_array().unwrap().len(), 2);
    assert_eq!(s["dim"], 4);

    let p: Value = serde_json::from_str(&example(&["--family", "hp2-projective", "--d", "1", "--e", "2", "--f", "3"])).unwrap();
    assert_eq!(
        p["points"],
        serde_json::json!([
            {"sign": 1, "weights": [1, 2, 3, 4]},
            {"sign": -1, "weights": [1, 1, 3, 5]},
            {"sign": 1, "weights": [1, 2, 4, 5]}
        ])
    );
    let half = example(&["--family", "hp2-projective", "--d", "1/2", "--e", "3/2", "--f", "5.5"]);
    assert!(half.contains("\"dim\": 8"));

    let c: Value = serde_json::from_str(&example(&["--family", "cp2", "--b", "1", "--c", "2"])).unwrap();
    assert_eq!(c["dim"], 4);
}

#[test]
fn invalid_example_parameters() {
    for args in [
        &["example", "--family", "hp2-projective", "--d", "2", "--e", "1", "--f", "3"][..],
        &["example", "--family", "hp2-projective", "--d", "1", "--e", "3/2", "--f", "3"],
        &["example", "--family", "hp2", "--a", "1", "--b", "1"],
        &["example", "--family", "hp2", "--a", "0", "--b", "1", "--c", "1"],
        &["example", "--family", "sphere"],
        &["example", "--family", "torus"],
    ] {
        assert_eq!(trifix(args).code, EXIT_INPUT, "{args:?}");
    }
}

#[test]
fn example_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let r = trifix(&["example", "--family", "hp2", "--a", "2", "--b", "1", "--c", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.is_empty());
    let v = trifix(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.code, EXIT_OK, "{}", v.stdout);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let hp2 = write(dir.path(), "hp2.json", &example(&["--family", "hp2", "--a", "1", "--b", "1", "--c", "1"]));
    let r = trifix(&["verify", &hp2]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("all checks passed"));

    let dim6 = write(
        dir.path(),
        "dim6.json",
        r#"{"dim": 6, "points": [{"sign": 1, "weights": [1, 1, 2]}, {"sign": 1, "weights": [1, 1, 2]}, {"sign": -1, "weights": [1, 1, 2]}]}"#,
    );
    let r = trifix(&["verify", &dim6]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.stderr.contains("constraint failed: dim-mod-4"));

    let bad = write(dir.path(), "bad.json", "{\"dim\": 4, ");
    assert_eq!(trifix(&["verify", &bad]).code, EXIT_INPUT);
    let mismatch = write(dir.path(), "m.json", r#"{"dim": 4, "points": [{"sign": 1, "weights": [1]}]}"#);
    assert_eq!(trifix(&["verify", &mismatch]).code, EXIT_INPUT);
    assert_eq!(trifix(&["verify", "/nonexistent/file.json"]).code, EXIT_INPUT);
    assert_eq!(trifix(&["verify", &hp2, "--format", "yaml"]).code, EXIT_INPUT);
}

#[test]
fn text_and_json_report_the_same_checks() {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        write(dir.path(), "a.json", &example(&["--family", "hp2", "--a", "1", "--b", "2", "--c", "3"])),
        write(dir.path(), "b.json", &example(&["--family", "sphere", "--weights", "1,2,3,4"])),
        write(
            dir.path(),
            "c.json",
            r#"{"dim": 4, "points": [{"sign": 1, "weights": [1, 3]}, {"sign": 1, "weights": [1, 2]}, {"sign": -1, "weights": [2, 3]}]}"#,
        ),
    ];
    for f in &files {
        let text = trifix(&["verify", f]);
        let json = trifix(&["verify", f, "--format", "json"]);
        assert_eq!(text.code, json.code);
        let v: Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        for c in v["checks"].as_array().unwrap() {
            let mark = if c["passed"].as_bool().unwrap() { "pass" } else { "FAIL" };
            let line = format!("[{mark}] {}", c["name"].as_str().unwrap());
            assert!(text.stdout.contains(&line), "{line} missing from\n{}", text.stdout);
        }
    }
}

#[test]
fn enumerate_examples() {
    let r = trifix(&["enumerate", "--dim", "12", "--max-weight", "6", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["survivors"], serde_json::json!([]));
    let keys: Vec<&str> = v["kills"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["prop42", "pontryagin-equal", "biggest-weight", "normal-bundle", "final"]);

    let r = trifix(&["enumerate", "--dim", "8", "--max-weight", "4", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["survivors"].as_array().unwrap().len(), 3);

    let r = trifix(&["enumerate", "--dim", "4", "--max-weight", "3"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("a=(2) b=(1) c=(1)") && r.stdout.contains("a=(3) b=(1) c=(2)"));
}

#[test]
fn enumerate_partial_chain() {
    let r = trifix(&["enumerate", "--dim", "12", "--max-weight", "8", "--until", "prop42", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["stop_stage"], "prop42");
    assert_eq!(v["survivors"].as_array().unwrap().len(), 1);
    assert_eq!(v["survivors"][0]["a"], serde_json::json!([2, 4, 8]));
}

#[test]
fn enumerate_bad_flags() {
    for args in [
        &["enumerate", "--dim", "6", "--max-weight", "4"][..],
        &["enumerate", "--dim", "12"],
        &["enumerate", "--dim", "12", "--max-weight", "4", "--workers", "0"],
        &["enumerate", "--dim", "12", "--max-weight", "4", "--until", "nowhere"],
        &["enumerate", "--dim", "8", "--max-weight", "4", "--until", "prop42"],
        &["enumerate", "--dim", "8", "--max-weight", "-1"],
    ] {
        assert_eq!(trifix(args).code, EXIT_INPUT, "{args:?}");
    }
    assert_eq!(trifix(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(trifix(&[]).code, EXIT_INPUT);
    assert_eq!(trifix(&["--version"]).code, EXIT_OK);
}

#[test]
fn enumerate_reports_identical_across_workers() {
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        let m = v.as_object_mut().unwrap();
        for k in ["wall_time_ms", "flags", "workers"] {
            m.remove(k);
        }
        v
    };
    for dim in ["8", "12"] {
        let base = trifix(&["enumerate", "--dim", dim, "--max-weight", "7", "--format", "json"]);
        for w in ["2", "4", "7"] {
            let other = trifix(&["enumerate", "--dim", dim, "--max-weight", "7", "--format", "json", "--workers", w]);
            assert_eq!(strip(&base.stdout), strip(&other.stdout), "dim {dim}, workers {w}");
        }
    }
}

#[test]
fn graph_examples() {
    let dir = tempfile::tempdir().unwrap();
    let hp2 = write(dir.path(), "h.json", &example(&["--family", "hp2", "--a", "1", "--b", "1", "--c", "1"]));
    let r = trifix(&["graph", &hp2, "--format", "dot"]);
    assert_eq!(r.code, EXIT_OK);
    let mut labels: Vec<String> = r.stdout.lines().filter(|l| l.contains(" -- ")).map(|l| l.trim().to_string()).collect();
    labels.dedup();
    assert_eq!(
        labels,
        [
            "p1 -- p2 [label=\"2\"];",
            "p1 -- p3 [label=\"1\"];",
            "p1 -- p3 [label=\"3\"];",
            "p2 -- p3 [label=\"1\"];"
        ]
    );
    assert_eq!(r.stdout.matches(" -- ").count(), 6);
    assert_eq!(trifix(&["graph", &hp2]).stdout, r.stdout);

    let sphere = write(dir.path(), "s.json", &example(&["--family", "sphere", "--weights", "1"]));
    let r = trifix(&["graph", &sphere]);
    assert_eq!(r.stdout.matches(" -- ").count(), 1);
    assert!(r.stdout.contains("[label=\"1\"]"));

    let bad = write(
        dir.path(),
        "x.json",
        r#"{"dim": 4, "points": [{"sign": 1, "weights": [1, 1]}, {"sign": 1, "weights": [1, 1]}, {"sign": -1, "weights": [2, 2]}]}"#,
    );
    let r = trifix(&["graph", &bad]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.stderr.contains("not describable"));
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_trifix");
    let out = Command::new(exe).args(["enumerate", "--dim", "4", "--max-weight", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let out = Command::new(exe).args(["verify", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let out = Command::new(exe)
        .args(["enumerate", "--dim", "12", "--max-weight", "5", "--format", "json"])
        .env("FPD_WORKERS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["workers"], 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_documents_round_trip(a in 1u64..20, b in 1u64..20, c in 1u64..20) {
        let text = example(&["--family", "hp2", "--a", &a.to_string(), "--b", &b.to_string(), "--c", &c.to_string()]);
        let dir = tempfile::tempdir().unwrap();
        let path = write(dir.path(), "d.json", &text);
        let parsed = trifix_core::document::parse_data(&std::fs::read_to_string(&path).unwrap()).unwrap();
        prop_assert_eq!(trifix_core::document::data_to_json(&parsed), text);
    }
}
