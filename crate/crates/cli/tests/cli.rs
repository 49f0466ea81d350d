use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use visbst::bench::{
    read_bench_csv, read_online_csv, write_bench_csv, write_online_csv, BenchRecord, MergeMode,
    OnlineRatioRecord,
};
use visbst::generators::SeriesKind;
use visbst::text::parse_edge_list;
use visbst::{AlgorithmId, Criterion};

fn visbst(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_visbst"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn random_series_text(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| format!("{} {}\n", 3 * i as i64 - 40, rng.gen_range(-5..6)))
        .collect()
}

#[test]
fn build_outputs_are_byte_identical_across_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "s.txt", &random_series_text(300, 1));
    for criterion in ["hvg", "nvg"] {
        let outputs: Vec<String> = ["basic", "dc", "bst"]
            .iter()
            .map(|algo| {
                stdout_of(&visbst(
                    &["build", &path, "--algo", algo, "--criterion", criterion],
                    "",
                ))
            })
            .collect();
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
}

#[test]
fn build_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "s.txt", "0 3\n1 1\n2 2\n3 4\n");
    let out = dir.path().join("edges.txt");
    let run = visbst(
        &[
            "build",
            &path,
            "--criterion",
            "hvg",
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert!(stdout_of(&run).is_empty());
    let edges = parse_edge_list(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(edges, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]);
}

#[test]
fn build_instrument_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "line.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n");
    let run = visbst(&["build", &path, "--criterion", "nvg", "--instrument"], "");
    assert!(run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("residual_checks: 6"), "{stderr}");
}

#[test]
fn empty_series_file_gives_empty_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "empty.txt", "");
    for algo in ["basic", "dc", "bst"] {
        assert_eq!(
            stdout_of(&visbst(&["build", &path, "--algo", algo], "")),
            ""
        );
    }
}

#[test]
fn duplicate_index_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "dup.txt", "0 1\n1 2\n1 3\n");
    let run = visbst(&["build", &path], "");
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("error"));
}

#[test]
fn missing_file_is_an_error() {
    let run = visbst(&["build", "/nonexistent/series.txt"], "");
    assert!(!run.status.success());
}

#[test]
fn zero_trials_is_a_usage_error() {
    for cmd in ["bench", "online-bench"] {
        let run = visbst(&[cmd, "--trials", "0"], "");
        assert_eq!(run.status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn unknown_names_are_usage_errors() {
    assert_eq!(
        visbst(&["generate", "--kind", "sine", "--n", "4"], "")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        visbst(&["build", "x", "--algo", "fast"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        visbst(&["build", "x", "--criterion", "lvg"], "")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn generate_is_deterministic_and_balanced_needs_full_size() {
    let a = stdout_of(&visbst(
        &["generate", "--kind", "uniform", "--n", "50", "--seed", "9"],
        "",
    ));
    let b = stdout_of(&visbst(
        &["generate", "--kind", "uniform", "--n", "50", "--seed", "9"],
        "",
    ));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 50);
    assert_eq!(
        stdout_of(&visbst(&["generate", "--kind", "balanced", "--n", "7"], ""))
            .lines()
            .count(),
        7
    );
    assert_eq!(
        visbst(&["generate", "--kind", "balanced", "--n", "6"], "")
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn stream_in_batches_matches_build() {
    let dir = tempfile::tempdir().unwrap();
    let text = random_series_text(100, 2);
    let path = write_file(dir.path(), "s.txt", &text);
    for criterion in ["hvg", "nvg"] {
        let expected = stdout_of(&visbst(
            &["build", &path, "--algo", "basic", "--criterion", criterion],
            "",
        ));
        let got = stdout_of(&visbst(
            &["stream", "--batch-size", "10"],
            &format!("{text}emit {criterion}\n"),
        ));
        assert_eq!(got, expected, "{criterion}");
    }
}

#[test]
fn stream_accepts_out_of_order_points() {
    let dir = tempfile::tempdir().unwrap();
    let text = random_series_text(60, 3);
    let path = write_file(dir.path(), "s.txt", &text);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.reverse();
    let shuffled: String = lines.iter().map(|l| format!("{l}\n")).collect();
    let expected = stdout_of(&visbst(&["build", &path, "--criterion", "nvg"], ""));
    let got = stdout_of(&visbst(
        &["stream", "--batch-size", "7", "--criterion", "nvg"],
        &shuffled,
    ));
    assert_eq!(got, expected);
}

#[test]
fn stream_skips_bad_lines() {
    let input = "0 1\nnot a point\n1 5\nemit pvg\n1 9\n2 2\n";
    let run = visbst(&["stream", "--batch-size", "2"], input);
    let stdout = stdout_of(&run);
    assert_eq!(parse_edge_list(&stdout).unwrap(), vec![(0, 1), (1, 2)]);
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert_eq!(stderr.matches("skipped").count(), 3, "{stderr}");
}

#[test]
fn stream_emits_are_separated_by_blank_lines() {
    let stdout = stdout_of(&visbst(&["stream"], "0 1\n1 2\nemit hvg\n2 0\nemit nvg\n"));
    let blocks: Vec<&str> = stdout.split("\n\n").collect();
    assert_eq!(blocks.len(), 2, "{stdout:?}");
    assert_eq!(parse_edge_list(blocks[0]).unwrap(), vec![(0, 1)]);
    assert_eq!(parse_edge_list(blocks[1]).unwrap(), vec![(0, 1), (1, 2)]);
}

#[test]
fn bench_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let run = visbst(
        &[
            "bench",
            "--kinds",
            "walk",
            "--sizes",
            "16,32",
            "--trials",
            "2",
            "--instrument",
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert!(run.status.success());
    let records = read_bench_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(records.len(), 2 * 2 * 3 * 2);
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("algorithm,criterion,kind,n,trial,elapsed_s,residual_checks\n"));
}

#[test]
fn online_bench_writes_ratios() {
    let run = visbst(
        &[
            "online-bench",
            "--l",
            "50",
            "--n",
            "20,40",
            "--trials",
            "3",
            "--modes",
            "insert",
        ],
        "",
    );
    let stdout = stdout_of(&run);
    let records = read_online_csv(stdout.as_bytes()).unwrap();
    assert_eq!(records.len(), 2 * 3);
    assert!(records
        .iter()
        .all(|r| r.mode == MergeMode::Insert && r.l == 50));
}

fn bench_record() -> impl Strategy<Value = BenchRecord> {
    (
        prop::sample::select(AlgorithmId::ALL.to_vec()),
        prop::sample::select(Criterion::ALL.to_vec()),
        prop::sample::select(SeriesKind::ALL.to_vec()),
        0usize..1 << 20,
        0u64..100,
        0.0f64..1e3,
        prop::option::of(any::<u64>()),
    )
        .prop_map(
            |(algorithm, criterion, kind, n, trial, elapsed_s, residual_checks)| BenchRecord {
                algorithm,
                criterion,
                kind,
                n,
                trial,
                elapsed_s,
                residual_checks,
            },
        )
}

fn online_record() -> impl Strategy<Value = OnlineRatioRecord> {
    (
        prop::sample::select(MergeMode::ALL.to_vec()),
        0usize..1 << 20,
        0usize..1 << 20,
        0u64..100,
        0.0f64..1e3,
        0.0f64..1e3,
    )
        .prop_map(
            |(mode, l, n, trial, t_offline_s, t_online_s)| OnlineRatioRecord {
                mode,
                l,
                n,
                trial,
                t_offline_s,
                t_online_s,
            },
        )
}

proptest! {
    #[test]
    fn bench_csv_round_trips(records in prop::collection::vec(bench_record(), 0..20)) {
        let mut buf = Vec::new();
        write_bench_csv(&records, &mut buf).unwrap();
        prop_assert_eq!(read_bench_csv(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn online_csv_round_trips(records in prop::collection::vec(online_record(), 0..20)) {
        let mut buf = Vec::new();
        write_online_csv(&records, &mut buf).unwrap();
        prop_assert_eq!(read_online_csv(buf.as_slice()).unwrap(), records);
    }
}
