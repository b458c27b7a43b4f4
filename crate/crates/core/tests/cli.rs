use std::io::Write;
use std::process::{Command, Stdio};

use minmatch::cli::run;
use serde_json::Value;

const K4: &str = "mg 4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const C4_C6: &str = "mg 10 10\n0 1\n1 2\n2 3\n0 3\n4 5\n5 6\n6 7\n7 8\n8 9\n4 9\n";

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["minmatch"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str], stdin: &str) -> (i32, Value) {
    let (status, out, _) = call(args, stdin);
    assert_eq!(out.lines().count(), 1, "one line of JSON: {out}");
    (status, serde_json::from_str(&out).unwrap())
}

#[test]
fn count_k4() {
    let (status, out, _) = call(&["count"], K4);
    assert_eq!((status, out.as_str()), (0, "{\"count\":3}\n"));
    let (_, v) = json(&["count", "--cap", "2", "-"], K4);
    assert_eq!(v["count"], 2);
    let (_, out, _) = call(&["count", "--format", "text"], K4);
    assert_eq!(out, "3\n");
}

#[test]
fn enumerate_with_limit() {
    let (_, v) = json(&["enumerate"], K4);
    assert_eq!(v["matchings"], serde_json::json!([[0, 5], [1, 4], [2, 3]]));
    assert_eq!(v["exhaustive"], true);
    let (_, v) = json(&["enumerate", "--limit", "1"], K4);
    assert_eq!(v["matchings"].as_array().unwrap().len(), 1);
    assert_eq!(v["exhaustive"], false);
}

#[test]
fn minimal_on_two_even_cycles() {
    for k in ["3", "4"] {
        let (status, v) = json(&["minimal", "--k", k], C4_C6);
        assert_eq!(status, 0);
        assert_eq!(v["is_minimal"], true, "k = {k}");
    }
    let (_, v) = json(&["minimal", "--k", "2"], C4_C6);
    assert_eq!(v["is_minimal"], false);
    assert_eq!(v["witness_edge"], 0);
}

#[test]
fn reduce_and_classify() {
    let (_, v) = json(&["reduce"], "mg 10 9\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n0 7\n8 9\n");
    assert_eq!(v["base"], "mg 2 2\n0 1\n0 1\n");
    assert_eq!(v["stripped_k2"], 1);
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);

    let (_, v) = json(&["classify", "--k", "3"], C4_C6);
    assert_eq!(v["name"], "two-2-cycles");
    assert_eq!(v["q"], 0);
    let (_, v) = json(&["classify", "--k", "3"], "mg 4 7\n0 1\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    assert_eq!(v["verdict"]["is_minimal"], false);
    assert!(v["base"].is_null());
}

#[test]
fn chords_and_chambers() {
    // C4 with both diagonals; the diagonals form the second matching
    let g = "mg 4 6\n0 1\n1 2\n2 3\n0 3\n0 2\n1 3\n";
    let (status, v) = json(&["chords", "--cycle", "0,1,2,3", "--m", "0,2", "--n", "4,5", "--f", "4"], g);
    assert_eq!(status, 0);
    let chords = v["chords"].as_array().unwrap();
    assert_eq!(chords.len(), 2);
    assert_eq!(chords[0]["kind"], "out");
    assert_eq!(chords[0]["external"], true);
    assert_eq!(chords[1]["kind"], "in");
    assert_eq!(v["crossings"], serde_json::json!([[0, 1]]));

    let (status, v) = json(&["chords", "--cycle", "0,1,2,3", "--m", "0,4", "--n", "4,5"], g);
    assert_eq!(status, 1);
    assert_eq!(v["error"]["kind"], "not_perfect_matching");

    let (_, v) = json(&["chambers"], "mg 6 7\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n4 5\n");
    assert_eq!(v["chambers"], serde_json::json!([[0, 1, 2, 3], [4, 5]]));
}

#[test]
fn search_k2() {
    let (status, v) = json(&["search", "--k", "2", "--max-vertices", "6", "--jobs", "2"], "");
    assert_eq!(status, 0);
    let members = v["members"].as_array().unwrap();
    assert_eq!(members.len(), 1);
    assert_eq!(members[0]["canonical"], "mg 2 2\n0 1\n0 1\n");
    assert_eq!(v["complete_up_to_vertices"], 6);
}

#[test]
fn verify_runs_suites() {
    let (status, v) = json(&["verify", "--suite", "lemma1", "--k", "3", "--max-vertices", "6"], "");
    assert_eq!(status, 0);
    assert_eq!(v["failed"], 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
    let (status, out, _) =
        call(&["verify", "--suite", "oracle", "--k", "1", "--max-vertices", "4", "--trials", "50", "--format", "text"], "");
    assert_eq!(status, 0);
    assert!(out.starts_with("oracle k=1:"), "{out}");
}

#[test]
fn errors_and_exit_codes() {
    let (status, v) = json(&["count"], "mg 2 1\n0 0\n");
    assert_eq!(status, 1);
    assert_eq!(v["error"]["kind"], "loop_edge");

    let (status, v) = json(&["minimal"], K4);
    assert_eq!(status, 2);
    assert_eq!(v["error"]["kind"], "usage");

    let (status, v) = json(&["search", "--k", "2", "--max-vertices", "5"], "");
    assert_eq!(status, 2);
    assert_eq!(v["error"]["kind"], "invalid_argument");

    let (status, v) = json(&["search", "--k", "3", "--max-vertices", "6", "--guard-limit", "20"], "");
    assert_eq!(status, 3);
    assert_eq!(v["error"]["kind"], "resource_guard");

    let (status, out, err) = call(&["count", "--format", "text"], "mg 2\n");
    assert_eq!(status, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error: syntax error at line 1"), "{err}");

    let (status, out, _) = call(&["--help"], "");
    assert_eq!(status, 0);
    assert!(out.contains("search"));
}

#[test]
fn binary_reads_files_and_stdin() {
    let exe = env!("CARGO_BIN_EXE_minmatch");
    let mut child = Command::new(exe)
        .args(["count", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(K4.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"count\":3}\n");

    let path = std::env::temp_dir().join(format!("minmatch-cli-{}.mg", std::process::id()));
    std::fs::write(&path, C4_C6).unwrap();
    let out = Command::new(exe).args(["count"]).arg(&path).output().unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"count\":4}\n");

    let out = Command::new(exe).args(["search", "--k", "3", "--max-vertices", "6", "--guard-limit", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
