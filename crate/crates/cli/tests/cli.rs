//! End-to-end runs of the binary: exit codes, report schema, file formats,
//! and determinism of the benchmark.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fltlq::{class_of, parse_formula, Alphabet, PropInterval};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fltlq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).expect("write stream file");
    path.to_string_lossy().into_owned()
}

const AA: &str = r#"{"alphabet":["a"],"streams":[{"name":"s1","steps":[["a"],["a"]]}]}"#;
const EMPTY: &str = r#"{"alphabet":["a"],"streams":[{"name":"e","steps":[]}]}"#;

#[test]
fn check_reports_per_stream_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);
    let empty = write_file(dir.path(), "e.json", EMPTY);

    // The trailing empty suffix defeats a bare G.
    let out = run(&["check", "--streams", &aa, "--query", "G a"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "s1: unsat\n");

    let out = run(&["check", "--streams", &aa, "--query", "F(a & X true)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "s1: sat\n");

    // The empty stream satisfies the weak next and refutes the strong one.
    let out = run(&["check", "--streams", &empty, "--query", "WX false"]);
    assert_eq!(code(&out), 0);
    let out = run(&["check", "--streams", &empty, "--query", "X true"]);
    assert_eq!(code(&out), 1);

    // One verdict line per stream across files; any unsat stream fails.
    let out = run(&["check", "--streams", &aa, &empty, "--query", "F(a & X true)"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "s1: sat\ne: unsat\n");
}

#[test]
fn errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);

    let out = run(&["check", "--streams", &aa, "--query", "G ("]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"));

    let out = run(&["check", "--streams", &aa, "--query", "G b"]);
    assert_eq!(code(&out), 2);

    let missing = dir.path().join("missing.json");
    let out = run(&["check", "--streams", missing.to_str().unwrap(), "--query", "G a"]);
    assert_eq!(code(&out), 2);

    let txt = write_file(dir.path(), "s.txt", AA);
    let out = run(&["check", "--streams", &txt, "--query", "G a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("extension"));

    // A placeholder is not a formula.
    let out = run(&["check", "--streams", &aa, "--query", "G var"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_report_matches_schema_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);
    let out = run(&["solve", "--streams", &aa, "--query", "G var"]);
    assert_eq!(code(&out), 0);

    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["query"], "G var");
    assert_eq!(report["solvable"], true);
    let stats = &report["stats"];
    assert_eq!(stats["streams"], 1);
    assert!(stats["labels"].is_u64());
    assert!(stats["subsets"].is_u64());
    assert!(stats["millis"].is_u64());

    // Endpoints are reparseable and print back identically, and membership
    // over all four classes of {a} is exactly {true}.
    let ab = Alphabet::new(["a"]).unwrap();
    let class = |text: &str| class_of(&parse_formula(text, &ab).unwrap(), &ab).unwrap();
    let intervals = report["intervals"].as_array().unwrap();
    assert!(!intervals.is_empty());
    let mut members = [false; 4];
    let probes = ["true", "a", "!a", "false"];
    for iv in intervals {
        let lower_text = iv["lower"].as_str().unwrap();
        let upper_text = iv["upper"].as_str().unwrap();
        let lower = class(lower_text);
        let upper = class(upper_text);
        assert_eq!(lower.to_dnf_string(), lower_text);
        assert_eq!(upper.to_dnf_string(), upper_text);
        let interval = PropInterval::new(lower, upper);
        for (m, probe) in members.iter_mut().zip(probes) {
            *m |= interval.contains(&class(probe));
        }
    }
    assert_eq!(members, [true, false, false, false]);
}

#[test]
fn solve_without_placeholder_degenerates() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);

    // A satisfied placeholder-free query admits every class.
    let out = run(&["solve", "--streams", &aa, "--query", "F(a & X true)"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        report["intervals"],
        serde_json::json!([{"lower": "true", "upper": "false"}])
    );

    // A refuted one admits none and exits 1.
    let out = run(&["solve", "--streams", &aa, "--query", "G a"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["solvable"], false);
    assert_eq!(report["intervals"], serde_json::json!([]));
}

#[test]
fn solve_flag_handling() {
    let dir = tempfile::tempdir().unwrap();
    let ab_doc = r#"{"alphabet":["a","b"],"streams":[{"name":"s","steps":[["a"],["a","b"]]}]}"#;
    let ab = write_file(dir.path(), "ab.json", ab_doc);

    // Projection drops propositions the query and keep-list don't mention.
    let out = run(&["solve", "--streams", &ab, "--query", "G var", "--project", "a"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for iv in report["intervals"].as_array().unwrap() {
        assert!(!iv["lower"].as_str().unwrap().contains('b'));
        assert!(!iv["upper"].as_str().unwrap().contains('b'));
    }

    let out = run(&["solve", "--streams", &ab, "--query", "G var", "--project", "c"]);
    assert_eq!(code(&out), 2);

    let out = run(&["solve", "--streams", &ab, "--query", "G var", "--max-intervals", "0"]);
    assert_eq!(code(&out), 2);

    let out = run(&["solve", "--streams", &ab, "--query", "G var", "--timeout-secs", "0"]);
    assert_eq!(code(&out), 2);

    let out = run(&["solve", "--streams", &ab, "--query", "G var", "--max-ap", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn parallel_solve_matches_sequential() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_file(dir.path(), "one.json", AA);
    let two = write_file(
        dir.path(),
        "two.json",
        r#"{"alphabet":["a"],"streams":[{"name":"s2","steps":[[],["a"],["a"]]}]}"#,
    );
    let query = "F(var & X true)";
    let seq = run(&["solve", "--streams", &one, &two, "--query", query]);
    let par = run(&["solve", "--streams", &one, &two, "--query", query, "--jobs", "2"]);
    assert_eq!(code(&seq), code(&par));
    let seq: serde_json::Value = serde_json::from_str(&stdout(&seq)).unwrap();
    let par: serde_json::Value = serde_json::from_str(&stdout(&par)).unwrap();
    assert_eq!(seq["intervals"], par["intervals"]);
    assert_eq!(seq["solvable"], par["solvable"]);
}

#[test]
fn csv_ingestion_and_time_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_file(dir.path(), "good.csv", "time,a,b\n0,1,0\n1,1,1\n");
    let out = run(&["check", "--streams", &good, "--query", "F b"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "good: sat\n");

    // Gapped times are rejected unless renumbering is requested.
    let gap = write_file(dir.path(), "gap.csv", "time,a\n0,1\n5,1\n");
    let out = run(&["check", "--streams", &gap, "--query", "F a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--normalize"));
    let out = run(&["check", "--streams", &gap, "--query", "F a", "--normalize"]);
    assert_eq!(code(&out), 0);

    // Decreasing times are rejected outright.
    let dec = write_file(dir.path(), "dec.csv", "time,a\n3,1\n1,1\n");
    let out = run(&["check", "--streams", &dec, "--query", "F a", "--normalize"]);
    assert_eq!(code(&out), 2);

    let bad_cell = write_file(dir.path(), "bad.csv", "time,a\n0,2\n");
    let out = run(&["check", "--streams", &bad_cell, "--query", "F a"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn multiple_files_must_share_the_alphabet() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);
    let other = write_file(
        dir.path(),
        "other.json",
        r#"{"alphabet":["a","b"],"streams":[{"name":"t","steps":[]}]}"#,
    );
    let out = run(&["check", "--streams", &aa, &other, "--query", "F a"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("differs"));
}

#[test]
fn automaton_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let aa = write_file(dir.path(), "aa.json", AA);

    let out = run(&["automaton", "--query", "a U var", "--kind", "query"]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.contains("digraph"));
    assert!(dot.contains("var"));

    // With no streams the alphabet is the query's atoms, sorted.
    let out = run(&["automaton", "--query", "b U a", "--kind", "formula", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let dump: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(dump["type"], "formula-automaton");
    assert_eq!(dump["alphabet"], serde_json::json!(["a", "b"]));
    assert!(dump["start"].is_u64());
    assert!(!dump["states"].as_array().unwrap().is_empty());
    assert!(dump["states"][0]["accepting"].is_boolean());
    assert!(!dump["transitions"].as_array().unwrap().is_empty());

    let out = run(&["automaton", "--query", "a U var", "--kind", "query", "--format", "json"]);
    let dump: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(dump["type"], "query-automaton");
    assert!(dump["states"][0]["acceptance"].is_string());

    // A placeholder can't appear in a plain formula dump.
    let out = run(&["automaton", "--query", "a U var", "--kind", "formula"]);
    assert_eq!(code(&out), 2);

    // The composed dump needs a stream to compose with.
    let out = run(&["automaton", "--query", "G var", "--kind", "composed"]);
    assert_eq!(code(&out), 2);
    let out = run(&["automaton", "--query", "G var", "--kind", "composed", "--streams", &aa]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("digraph"));
}

#[test]
fn closed_output_pipe_is_not_an_error() {
    use std::io::Read;
    let mut child = Command::new(env!("CARGO_BIN_EXE_fltlq"))
        .args(["automaton", "--query", "a U var", "--kind", "query", "--format", "json"])
        .stdout(std::process::Stdio::piped())
        .spawn()
        .expect("binary spawns");
    let mut stdout = child.stdout.take().unwrap();
    let mut byte = [0u8; 1];
    stdout.read_exact(&mut byte).unwrap();
    drop(stdout);
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

// The time column is the only run-to-run variance; everything else is a
// pure function of the arguments.
fn canonical_bench(text: &str) -> String {
    text.lines()
        .map(|line| {
            if line.starts_with("G(") {
                let mut tokens: Vec<&str> = line.split_whitespace().collect();
                let n = tokens.len();
                tokens.remove(n - 3);
                tokens.join(" ")
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn bench_output_is_deterministic_modulo_timing() {
    let args = [
        "bench", "--products", "1", "--promos", "1", "--length", "24", "--seed", "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(canonical_bench(&stdout(&first)), canonical_bench(&stdout(&second)));
    assert_eq!(stdout(&first).lines().count(), 4);

    // One product over one proposition keeps at most two shatterable labels.
    let out = run(&["bench", "--products", "1", "--length", "5", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = text.lines().nth(2).unwrap();
    let labels: f64 = row.split_whitespace().last().unwrap().parse().unwrap();
    assert!(labels <= 2.0, "labels = {labels}");
}
