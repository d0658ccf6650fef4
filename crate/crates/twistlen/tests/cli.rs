//! End-to-end checks of the binary: output formats, exit codes, determinism.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use twistlen::experiments::synthetic_english;

const BIN: &str = env!("CARGO_BIN_EXE_twistlen");

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn binary")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn encrypt_decrypt_roundtrip_via_stdin() {
    let plain = "Two households, both alike in dignity";
    let enc = run_with_stdin(&["encrypt", "--key", "WILL"], plain);
    let cipher = stdout_of(&enc);
    assert_eq!(cipher.trim(), "PEZSKCDPDWWOOJZEDIWTGMTYZQRYEBJ");

    let dec = run_with_stdin(&["decrypt", "--key", "WILL"], &cipher);
    assert_eq!(stdout_of(&dec).trim(), "TWOHOUSEHOLDSBOTHALIKEINDIGNITY");
}

#[test]
fn indices_int_rounding_matches_published_table() {
    let out = run(&[
        "indices",
        &fixture("romeo_cipher.txt"),
        "--m-max",
        "17",
        "--round",
        "int",
    ]);
    let stdout = stdout_of(&out);
    let t_column: Vec<&str> = stdout
        .lines()
        .skip(1)
        .map(|line| line.split_whitespace().nth(1).expect("T column"))
        .collect();
    assert_eq!(
        t_column,
        [
            "50", "59", "58", "77", "63", "67", "64", "83", "73", "81", "78", "91", "82", "87",
            "89", "99", "90"
        ]
    );
    // spot-check the refined columns on the peak row m=4
    let row4: Vec<&str> = stdout.lines().nth(4).unwrap().split_whitespace().collect();
    assert_eq!(row4, ["4", "77", "21", "17"]);
}

#[test]
fn indices_csv_round_trips_through_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv_path = dir.path().join("indices.csv");
    let out = run(&[
        "indices",
        &fixture("overlooked_cipher.txt"),
        "--m-max",
        "16",
        "--round",
        "3dp",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    stdout_of(&out);
    let content = std::fs::read_to_string(&csv_path).expect("csv written");
    let mut lines = content.lines();
    assert_eq!(lines.next(), Some("m,T,T_plus,T_plus_plus"));
    assert_eq!(lines.next(), Some("1,40.000,,"));
    let row12 = content.lines().nth(12).expect("row m=12");
    assert!(row12.ends_with(",3.484"), "row 12 was {row12}");
}

#[test]
fn analyze_reports_published_predictions() {
    let out = run(&["analyze", &fixture("romeo_cipher.txt"), "--m-hi", "25"]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("letters: 350"));
    assert!(stdout.contains("index of coincidence: 0.050315"));
    assert!(stdout.contains("twist_plus: m = 16 over 2..=25"));
    assert!(stdout.contains("twist_plus_plus: m = 4 over 2..=25"));

    // narrower search, as the text's own key length analysis suggests
    let out = run(&["analyze", &fixture("romeo_cipher.txt"), "--m-hi", "11"]);
    assert!(stdout_of(&out).contains("twist_plus: m = 4 over 2..=11"));

    // 200-letter example: defaults give the q = 16 ceiling
    let out = run(&["analyze", &fixture("overlooked_cipher.txt")]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("twist_plus: m = 8 over 2..=16"));
    assert!(stdout.contains("twist_plus_plus: m = 4 over 2..=16"));
    assert!(stdout.contains("distances: 80, 122, 176"));
}

#[test]
fn analyze_csv_lists_one_estimate_per_method() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv_path = dir.path().join("estimates.csv");
    let out = run(&[
        "analyze",
        &fixture("overlooked_cipher.txt"),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    stdout_of(&out);
    let content = std::fs::read_to_string(&csv_path).expect("csv written");
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines[0], "method,estimate,m_lo,m_hi");
    assert!(lines[1].starts_with("ic_friedman,7.2441,,"));
    assert!(lines.contains(&"twist_plus,8,2,16"));
    assert!(lines.contains(&"twist_plus_plus,4,2,16"));
    assert_eq!(lines.len(), 5, "ic + three twist variants: {content}");
}

#[test]
fn kasiski_census_csv() {
    let dir = tempfile::tempdir().expect("tempdir");
    let census = dir.path().join("census.csv");
    let out = run(&[
        "kasiski",
        &fixture("overlooked_cipher.txt"),
        "--census-csv",
        census.to_str().unwrap(),
    ]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("distinct distances: 80, 122, 176"));
    assert!(stdout.contains("overall gcd: 2"));

    let content = std::fs::read_to_string(&census).expect("csv written");
    assert!(content.starts_with("divisor,count\n"));
    assert!(content.contains("\n16,2"), "divisor 16 hits 80 and 176");
}

#[test]
fn missing_file_and_bad_range_exit_2() {
    let out = run(&["analyze", "/no/such/file.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));

    let out = run_with_stdin(
        &["analyze", "-", "--m-lo", "2", "--m-hi", "25"],
        "ABCDEFGHIJ",
    );
    assert_eq!(out.status.code(), Some(2), "m_hi beyond text length");

    let out = run_with_stdin(&["encrypt", "--key", "WILL"], "12345 !? 67");
    assert_eq!(out.status.code(), Some(2), "letterless input");

    let out = run(&["not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_runs_are_deterministic_and_resolve_corpus_dir() {
    let dir = tempfile::tempdir().expect("tempdir");
    let corpus = synthetic_english(30_000, 11);
    std::fs::write(dir.path().join("corpus.txt"), corpus.to_string()).expect("write corpus");

    let config = r#"{
        "text_lengths": [150],
        "key_lengths": [2, 3],
        "m_domain": { "lo": 2, "hi": 10 },
        "texts_per_cell": 5,
        "keys_per_text": 2,
        "methods": ["twist_plus", "twist_plus_plus"],
        "master_seed": 99,
        "corpus_paths": ["corpus.txt"]
    }"#;
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, config).expect("write config");

    let run_once = |out_dir: &Path| {
        let out = Command::new(BIN)
            .args([
                "experiment",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out_dir.to_str().unwrap(),
            ])
            .env("TWISTLEN_CORPUS_DIR", dir.path())
            .output()
            .expect("spawn binary");
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read_to_string(out_dir.join("results.csv")).expect("results.csv")
    };

    let first = run_once(&dir.path().join("a"));
    let second = run_once(&dir.path().join("b"));
    assert_eq!(first, second, "same config and seed, same bytes");

    let mut lines = first.lines();
    assert_eq!(
        lines.next(),
        Some("N,k,method,m_lo,m_hi,trials,successes,rate")
    );
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[5], "10", "5 texts x 2 keys per cell: {line}");
    }
    assert_eq!(
        first.lines().count(),
        1 + 2 * 2,
        "2 key lengths x 2 methods"
    );

    for file in ["histogram.csv", "breakdown.csv", "figure_n150.csv"] {
        assert!(dir.path().join("a").join(file).exists(), "{file} missing");
    }
}

#[test]
fn experiment_rejects_unreadable_corpus_with_exit_2() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config_path = dir.path().join("config.json");
    std::fs::write(
        &config_path,
        r#"{
            "text_lengths": [150],
            "key_lengths": [2],
            "m_domain": { "lo": 2, "hi": 10 },
            "texts_per_cell": 1,
            "keys_per_text": 1,
            "methods": ["twist_plus_plus"],
            "master_seed": 1,
            "corpus_paths": ["missing_corpus.txt"]
        }"#,
    )
    .expect("write config");

    let out = Command::new(BIN)
        .args([
            "experiment",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .env("TWISTLEN_CORPUS_DIR", dir.path())
        .output()
        .expect("spawn binary");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_lemma_small_run_reports_no_violations() {
    let out = run(&["verify-lemma", "--cases", "500", "--seed", "3"]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("cases: 500"));
    assert!(stdout.contains("violations: 0"));

    // sequential mode must agree
    let seq = run(&[
        "verify-lemma",
        "--cases",
        "500",
        "--seed",
        "3",
        "--sequential",
    ]);
    assert_eq!(stdout, stdout_of(&seq));
}

#[test]
fn broken_stdout_pipe_exits_quietly() {
    use std::io::Read;

    let dir = tempfile::tempdir().expect("tempdir");
    let text = dir.path().join("long.txt");
    std::fs::write(&text, synthetic_english(6_000, 13).to_string()).expect("write text");

    let mut child = Command::new(BIN)
        .args(["kasiski", text.to_str().expect("utf-8 path")])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    let mut stdout = child.stdout.take().expect("piped");
    let mut first = [0u8; 64];
    stdout.read_exact(&mut first).expect("some output");
    drop(stdout); // hang up like `head`; the binary's next write gets EPIPE

    let status = child.wait().expect("wait");
    let mut stderr = String::new();
    child
        .stderr
        .take()
        .expect("piped")
        .read_to_string(&mut stderr)
        .expect("read stderr");
    assert_eq!(status.code(), Some(141), "stderr: {stderr}");
    assert!(!stderr.contains("panicked"), "stderr: {stderr}");
}
