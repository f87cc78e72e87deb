//! End-to-end tests that spawn the real binary: file parsing, id
//! alignment, exit codes, output formats, and the JSON/table round-trip
//! promise.

use std::path::{Path, PathBuf};
use std::process::Command;

use metric_gauntlet_cli::commands::LooReport;
use metric_gauntlet_cli::table::{render_loo, render_perturb, render_score, render_search};
use metric_gauntlet_core::metrics::MetricReport;
use metric_gauntlet_core::probes::{PerturbOutcome, SearchResult};

struct RunResult {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> RunResult {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_metric-gauntlet"));
    cmd.args(args);
    cmd.env_remove("METRIC_GAUNTLET_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary spawns");
    RunResult {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn run(args: &[&str]) -> RunResult {
    run_with_env(args, &[])
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture write");
    path
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

// -------------------------------------------------------------------
// score
// -------------------------------------------------------------------

#[test]
fn score_identity_corpus_maxes_overlap_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(
        dir.path(),
        "hyps.txt",
        "the cat sat on the mat\na man rides a horse\n",
    );
    let refs = write(
        dir.path(),
        "refs.txt",
        "the cat sat on the mat\na man rides a horse\n",
    );
    let got = run(&["score", "--hyps", p(&hyps), "--refs", p(&refs)]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let bleu4_row = got
        .stdout
        .lines()
        .find(|l| l.starts_with("BLEU-4"))
        .expect("BLEU-4 row");
    assert!(bleu4_row.contains("100.00"), "row was: {bleu4_row}");
    let rouge_row = got
        .stdout
        .lines()
        .find(|l| l.starts_with("ROUGE-L"))
        .expect("ROUGE-L row");
    assert!(rouge_row.contains("100.00"), "row was: {rouge_row}");
}

#[test]
fn score_json_round_trips_to_the_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a cat sat\nb d e f\n");
    let refs = write(dir.path(), "refs.txt", "a cat sat down\nb d c f\n");
    let base = ["score", "--hyps", p(&hyps), "--refs", p(&refs)];

    let table = run(&[&base[..], &["--format", "table"]].concat());
    let json = run(&[&base[..], &["--format", "json"]].concat());
    let both = run(&[&base[..], &["--format", "both"]].concat());
    assert_eq!(table.code, 0);
    assert_eq!(json.code, 0);

    let report: MetricReport = serde_json::from_str(&json.stdout).expect("valid report JSON");
    assert_eq!(render_score(&report), table.stdout);
    assert_eq!(both.stdout, format!("{}{}", table.stdout, json.stdout));
}

#[test]
fn score_aligns_jsonl_inputs_by_id_not_position() {
    let dir = tempfile::tempdir().unwrap();
    // Hypotheses listed in the opposite order of the references; only
    // id-based alignment yields a perfect score.
    let hyps = write(
        dir.path(),
        "hyps.jsonl",
        "{\"id\": \"img2\", \"hyp\": \"c d e f\"}\n{\"id\": \"img1\", \"hyp\": \"a b e f\"}\n",
    );
    let refs = write(
        dir.path(),
        "refs.jsonl",
        "{\"id\": \"img1\", \"refs\": [\"a b e f\"]}\n{\"id\": \"img2\", \"refs\": [\"c d e f\"]}\n",
    );
    let got = run(&[
        "score", "--hyps", p(&hyps), "--refs", p(&refs), "--format", "json",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let report: MetricReport = serde_json::from_str(&got.stdout).unwrap();
    assert_eq!(report.bleu4, 100.0);
}

#[test]
fn score_reports_the_missing_id_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.jsonl", "{\"id\": \"img1\", \"hyp\": \"a b\"}\n");
    let refs = write(
        dir.path(),
        "refs.jsonl",
        "{\"id\": \"img1\", \"refs\": [\"a b\"]}\n{\"id\": \"img9\", \"refs\": [\"c d\"]}\n",
    );
    let got = run(&["score", "--hyps", p(&hyps), "--refs", p(&refs)]);
    assert_eq!(got.code, 2);
    assert!(got.stderr.contains("img9"), "stderr was: {}", got.stderr);
}

#[test]
fn score_missing_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a b\n");
    let got = run(&[
        "score",
        "--hyps",
        p(&hyps),
        "--refs",
        p(&dir.path().join("nonexistent.txt")),
    ]);
    assert_eq!(got.code, 3);
    assert!(got.stderr.contains("nonexistent.txt"));
}

#[test]
fn score_lowercase_flag_folds_case_before_matching() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "The Cat Sat Down\n");
    let refs = write(dir.path(), "refs.txt", "the cat sat down\n");
    let base = ["score", "--hyps", p(&hyps), "--refs", p(&refs), "--format", "json"];

    let plain = run(&base);
    assert_eq!(plain.code, 0);
    let report: MetricReport = serde_json::from_str(&plain.stdout).unwrap();
    assert_eq!(report.bleu1, 0.0);

    let folded = run(&[&base[..], &["--lowercase"]].concat());
    assert_eq!(folded.code, 0);
    let report: MetricReport = serde_json::from_str(&folded.stdout).unwrap();
    assert_eq!(report.bleu4, 100.0);
}

#[test]
fn score_embeddings_add_the_embed_f_row() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a b\n");
    let refs = write(dir.path(), "refs.txt", "a b\n");
    let hyp_emb = write(
        dir.path(),
        "hyp_emb.jsonl",
        "{\"id\": \"1\", \"tokens\": [\"a\", \"b\"], \"vectors\": [[1.0, 0.0], [0.0, 1.0]]}\n",
    );
    let ref_emb = write(
        dir.path(),
        "ref_emb.jsonl",
        "{\"id\": \"1\", \"tokens\": [\"a\", \"b\"], \"vectors\": [[1.0, 0.0], [0.0, 1.0]]}\n",
    );
    let got = run(&[
        "score",
        "--hyps",
        p(&hyps),
        "--refs",
        p(&refs),
        "--embeddings",
        p(&hyp_emb),
        "--embeddings",
        p(&ref_emb),
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let row = got
        .stdout
        .lines()
        .find(|l| l.starts_with("Embed-F"))
        .expect("Embed-F row");
    assert!(row.contains("1.000"), "row was: {row}");
}

#[test]
fn score_embeddings_respect_the_baseline_header() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a b\n");
    let refs = write(dir.path(), "refs.txt", "c d\n");
    // Orthogonal vectors: raw F = 0; the header baseline 0.5 rescales
    // that to -1.
    let hyp_emb = write(
        dir.path(),
        "hyp_emb.jsonl",
        "{\"id\": \"1\", \"tokens\": [\"a\", \"b\"], \"vectors\": [[1.0, 0.0], [1.0, 0.0]]}\n",
    );
    let ref_emb = write(
        dir.path(),
        "ref_emb.jsonl",
        "{\"baseline\": 0.5}\n{\"id\": \"1\", \"tokens\": [\"c\", \"d\"], \"vectors\": [[0.0, 1.0], [0.0, 1.0]]}\n",
    );
    let got = run(&[
        "score",
        "--hyps",
        p(&hyps),
        "--refs",
        p(&refs),
        "--embeddings",
        p(&hyp_emb),
        "--embeddings",
        p(&ref_emb),
        "--format",
        "json",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let report: MetricReport = serde_json::from_str(&got.stdout).unwrap();
    assert_eq!(report.bert_f, Some(-1.0));
}

// -------------------------------------------------------------------
// loo
// -------------------------------------------------------------------

#[test]
fn loo_over_identical_corpora_reports_ceiling_mean_and_zero_sd() {
    let dir = tempfile::tempdir().unwrap();
    let text = "the cat sat on the mat\na man rides a horse\n";
    let r1 = write(dir.path(), "r1.txt", text);
    let r2 = write(dir.path(), "r2.txt", text);
    let r3 = write(dir.path(), "r3.txt", text);
    let got = run(&[
        "loo", "--refs", p(&r1), "--refs", p(&r2), "--refs", p(&r3), "--format", "json",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let report: LooReport = serde_json::from_str(&got.stdout).unwrap();
    assert_eq!(report.protocol, "RvR");
    assert_eq!(report.per_iteration.len(), 3);
    assert_eq!(report.mean.bleu4, 100.0);
    assert_eq!(report.mean.rouge_l, 100.0);
    assert_eq!(report.sd.bleu4, 0.0);
    assert_eq!(report.sd.meteor, 0.0);
}

#[test]
fn loo_system_run_reproduces_the_reference_run_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "a b c d\ne f g h\n");
    let r2 = write(dir.path(), "r2.txt", "a b c x\ne f g y\n");
    let r3 = write(dir.path(), "r3.txt", "a b z d\ne w g h\n");
    let refs = ["--refs", p(&r1), "--refs", p(&r2), "--refs", p(&r3)];

    let rvr = run(&[&["loo"][..], &refs, &["--format", "json"]].concat());
    assert_eq!(rvr.code, 0, "stderr: {}", rvr.stderr);
    let sys = ["--hyps", p(&r1)];
    let svr = run(&[&["loo"][..], &refs, &sys, &["--format", "json"]].concat());
    assert_eq!(svr.code, 0, "stderr: {}", svr.stderr);

    let rvr: LooReport = serde_json::from_str(&rvr.stdout).unwrap();
    let svr: LooReport = serde_json::from_str(&svr.stdout).unwrap();
    assert_eq!(svr.protocol, "SvR");
    // Iteration 0 holds out corpus 0, which is exactly the system corpus
    // here, so the two protocols coincide bit for bit.
    assert_eq!(rvr.per_iteration[0], svr.per_iteration[0]);
}

#[test]
fn loo_json_round_trips_to_the_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "a b c d\ne f g h\n");
    let r2 = write(dir.path(), "r2.txt", "a b c x\ne f g y\n");
    let base = ["loo", "--refs", p(&r1), "--refs", p(&r2)];

    let table = run(&[&base[..], &["--format", "table"]].concat());
    let json = run(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(table.code, 0);
    let report: LooReport = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(render_loo(&report), table.stdout);
}

#[test]
fn loo_rejects_ragged_reference_files() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "a b\nc d\n");
    let r2 = write(dir.path(), "r2.txt", "a b\n");
    let got = run(&["loo", "--refs", p(&r1), "--refs", p(&r2)]);
    assert_eq!(got.code, 2, "stderr: {}", got.stderr);
}

// -------------------------------------------------------------------
// perturb
// -------------------------------------------------------------------

#[test]
fn perturb_counts_targeted_substitutions_exactly() {
    let dir = tempfile::tempdir().unwrap();
    // "the" appears 3 times in R1 (out of 8 tokens).
    let r1 = write(dir.path(), "r1.txt", "the cat on the mat\nthe dog ran\n");
    let r2 = write(dir.path(), "r2.txt", "a cat on a mat\na dog ran\n");
    let probe = write(
        dir.path(),
        "probe.json",
        "{\"mode\": \"targeted\", \"targets\": [\"the\"], \"replacement\": \"UNK\"}\n",
    );
    let got = run(&[
        "perturb",
        "--refs",
        p(&r1),
        "--refs",
        p(&r2),
        "--probe-config",
        p(&probe),
        "--format",
        "both",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    assert!(
        got.stdout.contains("substituted 3 tokens (37.50%)"),
        "stdout was: {}",
        got.stdout
    );

    let json_start = got.stdout.find('{').unwrap();
    let outcome: PerturbOutcome = serde_json::from_str(&got.stdout[json_start..]).unwrap();
    assert_eq!(outcome.substituted_tokens, 3);
    assert_eq!(outcome.substitution_fraction, 3.0 / 8.0);
    // UNK never appears in the held-out references, so no overlap metric
    // may rise.
    assert!(outcome.deltas.bleu4 <= 0.0);
    assert!(outcome.deltas.rouge_l <= 0.0);
}

#[test]
fn perturb_threshold_one_is_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "a b c\nd e f\n");
    let r2 = write(dir.path(), "r2.txt", "a b x\nd e y\n");
    let probe = write(
        dir.path(),
        "probe.json",
        "{\"mode\": \"threshold\", \"T\": 1, \"replacement\": \"UNK\"}\n",
    );
    let got = run(&[
        "perturb",
        "--refs",
        p(&r1),
        "--refs",
        p(&r2),
        "--probe-config",
        p(&probe),
        "--format",
        "json",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    let outcome: PerturbOutcome = serde_json::from_str(&got.stdout).unwrap();
    assert_eq!(outcome.substituted_tokens, 0);
    assert_eq!(outcome.report_before, outcome.report_after);
    let tokens: Vec<Vec<String>> = outcome
        .perturbed
        .iter()
        .map(|s| s.tokens().iter().map(|t| t.as_str().to_string()).collect())
        .collect();
    assert_eq!(
        tokens,
        vec![
            vec!["a".to_string(), "b".to_string(), "c".to_string()],
            vec!["d".to_string(), "e".to_string(), "f".to_string()],
        ]
    );
}

#[test]
fn perturb_unreachable_fraction_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "the cat\nthe dog\n");
    let r2 = write(dir.path(), "r2.txt", "a cat\na dog\n");
    let stop = write(dir.path(), "stop.txt", "the\n");
    let probe = write(
        dir.path(),
        "probe.json",
        "{\"mode\": \"random_content\", \"fraction\": 0.9, \"seed\": 1, \"replacement\": \"UNK\"}\n",
    );
    let got = run(&[
        "perturb",
        "--refs",
        p(&r1),
        "--refs",
        p(&r2),
        "--probe-config",
        p(&probe),
        "--stoplist",
        p(&stop),
    ]);
    assert_eq!(got.code, 4, "stderr: {}", got.stderr);
}

#[test]
fn perturb_requires_heldout_references() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "a b\n");
    let probe = write(
        dir.path(),
        "probe.json",
        "{\"mode\": \"threshold\", \"T\": 1, \"replacement\": \"UNK\"}\n",
    );
    let got = run(&["perturb", "--refs", p(&r1), "--probe-config", p(&probe)]);
    assert_eq!(got.code, 2, "stderr: {}", got.stderr);
}

#[test]
fn perturb_json_round_trips_to_the_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = write(dir.path(), "r1.txt", "the cat on the mat\nthe dog ran\n");
    let r2 = write(dir.path(), "r2.txt", "a cat on a mat\na dog ran\n");
    let probe = write(
        dir.path(),
        "probe.json",
        "{\"mode\": \"targeted\", \"targets\": [\"the\", \"cat\"], \"replacement\": \"UNK\"}\n",
    );
    let base = [
        "perturb",
        "--refs",
        p(&r1),
        "--refs",
        p(&r2),
        "--probe-config",
        p(&probe),
    ];
    let table = run(&[&base[..], &["--format", "table"]].concat());
    let json = run(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(table.code, 0);
    let outcome: PerturbOutcome = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(render_perturb(&outcome), table.stdout);
}

// -------------------------------------------------------------------
// search-ss
// -------------------------------------------------------------------

#[test]
fn search_finds_the_toy_winner() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(dir.path(), "train.txt", "a b\nc d\n");
    let refs = write(dir.path(), "refs.txt", "a b\na c\n");
    let got = run(&[
        "search-ss",
        "--train",
        p(&train),
        "--refs",
        p(&refs),
        "--objective",
        "bleu1",
        "--format",
        "both",
    ]);
    assert_eq!(got.code, 0, "stderr: {}", got.stderr);
    assert!(got.stdout.contains("winner: a b"), "stdout: {}", got.stdout);
    assert!(
        got.stdout.contains("objective: bleu1 = 75.00"),
        "stdout: {}",
        got.stdout
    );
    let json_start = got.stdout.find('{').unwrap();
    let result: SearchResult = serde_json::from_str(&got.stdout[json_start..]).unwrap();
    assert_eq!(result.objective_score, 75.0);
    assert_eq!(result.candidates_evaluated, 2);
}

#[test]
fn search_naive_flag_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(
        dir.path(),
        "train.txt",
        "a b c\nb c d\nc d e\na a a\nd e f g\n",
    );
    let refs = write(dir.path(), "refs.txt", "a b c d\nb c d e\nc d e f\n");
    let base = [
        "search-ss", "--train", p(&train), "--refs", p(&refs), "--format", "json",
    ];
    let fast = run(&base);
    let naive = run(&[&base[..], &["--naive"]].concat());
    assert_eq!(fast.code, 0, "stderr: {}", fast.stderr);
    assert_eq!(naive.code, 0, "stderr: {}", naive.stderr);
    assert_eq!(fast.stdout, naive.stdout);
}

#[test]
fn search_json_round_trips_to_the_identical_table() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(dir.path(), "train.txt", "a b c\nb c d\n");
    let refs = write(dir.path(), "refs.txt", "a b c d\nb c d e\n");
    let base = ["search-ss", "--train", p(&train), "--refs", p(&refs)];
    let table = run(&[&base[..], &["--format", "table"]].concat());
    let json = run(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(table.code, 0);
    let result: SearchResult = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(render_search(&result), table.stdout);
}

#[test]
fn search_empty_train_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(dir.path(), "train.txt", "");
    let refs = write(dir.path(), "refs.txt", "a b\n");
    let got = run(&["search-ss", "--train", p(&train), "--refs", p(&refs)]);
    assert_eq!(got.code, 2, "stderr: {}", got.stderr);
}

// -------------------------------------------------------------------
// Shared plumbing
// -------------------------------------------------------------------

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a b c d\n");
    let refs = write(dir.path(), "refs.txt", "a b c d\n");
    let out_path = dir.path().join("report.json");
    let base = [
        "score", "--hyps", p(&hyps), "--refs", p(&refs), "--format", "json",
    ];

    let to_stdout = run(&base);
    let to_file = run(&[&base[..], &["--out", p(&out_path)]].concat());
    assert_eq!(to_file.code, 0, "stderr: {}", to_file.stderr);
    assert_eq!(to_file.stdout, "", "--out must not also print the report");
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, to_stdout.stdout);
}

#[test]
fn thread_env_var_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let hyps = write(dir.path(), "hyps.txt", "a b\n");
    let refs = write(dir.path(), "refs.txt", "a b\n");
    let args = ["score", "--hyps", p(&hyps), "--refs", p(&refs)];

    let bad = run_with_env(&args, &[("METRIC_GAUNTLET_THREADS", "many")]);
    assert_eq!(bad.code, 2, "stderr: {}", bad.stderr);
    assert!(bad.stderr.contains("METRIC_GAUNTLET_THREADS"));

    let good = run_with_env(&args, &[("METRIC_GAUNTLET_THREADS", "1")]);
    assert_eq!(good.code, 0, "stderr: {}", good.stderr);
}

#[test]
fn unknown_flags_exit_2() {
    let got = run(&["score", "--frobnicate"]);
    assert_eq!(got.code, 2, "stderr: {}", got.stderr);
}
