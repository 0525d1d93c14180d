//! End-to-end tests of the `sseval` binary: JSON shape, exit codes,
//! determinism, and the datasets subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sseval"));
    cmd.env_remove("SSEVAL_DATA_DIR");
    cmd
}

fn run(args: &[&str], cwd: &Path) -> Output {
    binary()
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

/// Identity fixture: source == reference == system output.
fn identity_fixture(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let lines = "The quick brown fox jumps over the lazy dog.\nA cat sat on the mat today.\n";
    let orig = dir.join("orig.txt");
    let reference = dir.join("ref0.txt");
    let sys = dir.join("sys.txt");
    std::fs::write(&orig, lines).unwrap();
    std::fs::write(&reference, lines).unwrap();
    std::fs::write(&sys, lines).unwrap();
    (orig, reference, sys)
}

#[test]
fn evaluate_identity_fixture() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &["evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt"],
        dir.path(),
    );
    assert!(output.status.success(), "{}", stderr(&output));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let sari = doc["sari"].as_f64().unwrap();
    assert!((sari - 100.0 / 3.0).abs() < 1e-9, "sari = {sari}");
    assert_eq!(doc["bleu"].as_f64().unwrap(), 100.0);
    assert!(doc["fkgl"].is_number());
    assert_eq!(doc["transformations"]["copy"].as_f64().unwrap(), 1.0);
    assert_eq!(doc["qe"]["system"]["exact_match"].as_f64().unwrap(), 1.0);
    assert_eq!(doc["qe"]["system"]["compression_ratio"].as_f64().unwrap(), 1.0);
}

#[test]
fn metric_selection_controls_keys() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &[
            "evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "--metrics", "sari,bleu",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(doc.get("sari").is_some());
    assert!(doc.get("bleu").is_some());
    assert!(doc.get("fkgl").is_none());
    // transformation scores and QE aggregates are always reported
    assert!(doc.get("transformations").is_some());
    assert!(doc.get("qe").is_some());
}

#[test]
fn unknown_metric_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &[
            "evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "--metrics", "sari,rouge",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("rouge"));
}

#[test]
fn mismatched_line_counts_exit_2_with_both_counts() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    std::fs::write(dir.path().join("sys.txt"), "only one line.\n").unwrap();
    let output = run(
        &["evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains('2') && message.contains('1'), "{message}");
}

#[test]
fn corpus_source_is_required() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(&["evaluate", "--sys", "sys.txt"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn evaluate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    std::fs::write(
        dir.path().join("sys.txt"),
        "The quick fox jumps. The dog naps.\nA cat sat there.\n",
    )
    .unwrap();
    let args = ["evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt"];
    let first = run(&args, dir.path());
    let second = run(&args, dir.path());
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn table_flag_prints_table_not_json() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &[
            "evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt", "--table",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("SARI"));
    assert!(!text.trim_start().starts_with('{'));
}

#[test]
fn freq_table_enables_lexical_complexity() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    std::fs::write(dir.path().join("freq.txt"), "the\na\ncat\nfox\n").unwrap();
    let output = run(
        &[
            "evaluate", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "--freq-table", "freq.txt",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(doc["qe"]["system"]["lexical_complexity"].is_number());
}

#[test]
fn report_writes_html_and_prints_path() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &[
            "report", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "-o", "out/report.html",
        ],
        dir.path(),
    );
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("report.html"));
    let html = std::fs::read_to_string(dir.path().join("out/report.html")).unwrap();
    assert!(html.starts_with("<!DOCTYPE html>"));
    // written atomically: no temp file left behind
    assert!(!dir.path().join("out/report.html.tmp").exists());
}

#[test]
fn report_same_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    std::fs::write(
        dir.path().join("sys.txt"),
        "The quick fox jumps. The dog naps.\nA cat sat there.\n",
    )
    .unwrap();
    for name in ["a.html", "b.html"] {
        let output = run(
            &[
                "report", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
                "-o", name, "--seed", "9",
            ],
            dir.path(),
        );
        assert!(output.status.success());
    }
    let a = std::fs::read(dir.path().join("a.html")).unwrap();
    let b = std::fs::read(dir.path().join("b.html")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn missing_freq_table_degrades_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    let output = run(
        &[
            "report", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "-o", "report.html", "--freq-table", "absent.txt",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    assert!(stderr(&output).contains("warning"));
    assert!(dir.path().join("report.html").exists());
}

#[test]
fn report_unwritable_destination_fails_without_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    identity_fixture(dir.path());
    // destination parent is a regular file, so nothing can be created there
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let output = run(
        &[
            "report", "--orig", "orig.txt", "--ref", "ref0.txt", "--sys", "sys.txt",
            "-o", "blocker/report.html",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(!dir.path().join("blocker/report.html").exists());
}

#[test]
fn datasets_list_includes_builtin_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["datasets", "list"], dir.path());
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("turkcorpus-test 359 instances 8 refs"), "{text}");
    assert!(text.contains("pwkp 100 instances 1 refs"), "{text}");
    assert!(text.contains("hsplit 359 instances 4 refs"), "{text}");
}

#[test]
fn datasets_validate_catches_truncated_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir_all(data.join("pwkp")).unwrap();
    // 99 lines instead of the declared 100
    let lines: Vec<String> = (0..99).map(|i| format!("sentence {i}")).collect();
    std::fs::write(data.join("pwkp/orig.txt"), lines.join("\n") + "\n").unwrap();
    std::fs::write(data.join("pwkp/ref0.txt"), lines.join("\n") + "\n").unwrap();
    std::fs::write(
        data.join("registry.conf"),
        "[pwkp]\norig = pwkp/orig.txt\nref0 = pwkp/ref0.txt\n",
    )
    .unwrap();

    let output = binary()
        .args(["datasets", "validate", "pwkp"])
        .env("SSEVAL_DATA_DIR", &data)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains("100") && message.contains("99"), "{message}");
}

#[test]
fn datasets_validate_ok_and_test_set_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir_all(data.join("tiny")).unwrap();
    std::fs::write(data.join("tiny/orig.txt"), "The big cat sat down.\nDogs bark.\n").unwrap();
    std::fs::write(data.join("tiny/ref0.txt"), "The cat sat.\nDogs bark.\n").unwrap();
    std::fs::write(
        data.join("registry.conf"),
        "[tiny]\ninstances = 2\nreferences = 1\norig = tiny/orig.txt\nref0 = tiny/ref0.txt\n",
    )
    .unwrap();
    std::fs::write(dir.path().join("sys.txt"), "The cat sat.\nDogs bark.\n").unwrap();

    let validate = binary()
        .args(["datasets", "validate", "tiny"])
        .env("SSEVAL_DATA_DIR", &data)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(validate.status.success(), "{}", stderr(&validate));
    assert!(stdout(&validate).starts_with("ok tiny"));

    let evaluate = binary()
        .args(["evaluate", "--test-set", "tiny", "--sys", "sys.txt"])
        .env("SSEVAL_DATA_DIR", &data)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(evaluate.status.success(), "{}", stderr(&evaluate));
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(evaluate.stdout).unwrap()).unwrap();
    assert_eq!(doc["bleu"].as_f64().unwrap(), 100.0);
}

/// Minimal one-route HTTP server for the fetch test.
fn serve_one_file(body: &'static [u8]) -> (String, std::sync::Arc<std::sync::atomic::AtomicUsize>) {
    use std::io::{Read, Write};
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/orig.txt", listener.local_addr().unwrap());
    let hits = std::sync::Arc::new(std::sync::atomic::AtomicUsize::new(0));
    let counter = std::sync::Arc::clone(&hits);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            counter.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            let mut buf = [0u8; 1024];
            let _ = stream.read(&mut buf);
            let response = format!(
                "HTTP/1.1 200 OK\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
                body.len()
            );
            let _ = stream.write_all(response.as_bytes());
            let _ = stream.write_all(body);
        }
    });
    (url, hits)
}

#[test]
fn datasets_fetch_downloads_then_reports_cached() {
    let (url, hits) = serve_one_file(b"s1\ns2\n");
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::write(
        data.join("registry.conf"),
        format!(
            "[remote-set]\ninstances = 2\nreferences = 1\norig = remote-set/orig.txt\n\
             ref0 = remote-set/ref0.txt\nurl_orig = {url}\n"
        ),
    )
    .unwrap();

    let fetch = |_label: &str| {
        binary()
            .args(["datasets", "fetch", "remote-set"])
            .env("SSEVAL_DATA_DIR", &data)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };

    let first = fetch("first");
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stdout(&first).starts_with("downloaded "), "{}", stdout(&first));
    assert_eq!(hits.load(std::sync::atomic::Ordering::SeqCst), 1);

    // warm cache: reported as cached, no second request
    let second = fetch("second");
    assert!(second.status.success());
    assert!(stdout(&second).starts_with("cached "), "{}", stdout(&second));
    assert_eq!(hits.load(std::sync::atomic::Ordering::SeqCst), 1);
}

#[test]
fn datasets_fetch_without_urls_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["datasets", "fetch", "pwkp"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("URL"), "{}", stderr(&output));
}

#[test]
fn datasets_unknown_name_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["datasets", "validate", "no-such-set"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("no-such-set"));
}
