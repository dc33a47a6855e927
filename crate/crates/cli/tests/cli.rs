//! End-to-end checks of the command-line interface: flag handling, exit
//! codes, warnings, and output determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bibrank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_toy_corpus(dir: &Path) -> (PathBuf, PathBuf) {
    let authorship = dir.join("authorship.csv");
    let citations = dir.join("citations.csv");
    fs::write(
        &authorship,
        "author_key,paper_id\na1,p1\na1,p2\na1,p3\na2,p4\na2,p5\na3,p6\n",
    )
    .unwrap();
    fs::write(
        &citations,
        "citing_paper_id,cited_paper_id\np4,p5\np4,p6\np5,p6\n",
    )
    .unwrap();
    (authorship, citations)
}

#[test]
fn score_citex_authors_matches_reference_values() {
    let dir = TempDir::new().unwrap();
    let (a, c) = write_toy_corpus(dir.path());
    let out_path = dir.path().join("scores.csv");
    let output = run(&[
        "score",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--method",
        "citex",
        "--entity",
        "author",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let written = fs::read_to_string(&out_path).unwrap();
    let mut lines = written.lines();
    assert_eq!(lines.next().unwrap(), "rank,entity,score");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let score: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((score - 1.0 / 3.0).abs() < 1e-3, "{row}");
    }
}

#[test]
fn caps_on_citation_free_corpus_warns_and_exits_zero() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let c = dir.path().join("c.csv");
    fs::write(&a, "author_key,paper_id\nx,p1\ny,p2\n").unwrap();
    fs::write(&c, "citing_paper_id,cited_paper_id\n").unwrap();
    let out_path = dir.path().join("scores.csv");
    let output = run(&[
        "score",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--method",
        "caps",
        "--entity",
        "author",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(
        stderr_of(&output).contains("all-zero fixed point"),
        "stderr: {}",
        stderr_of(&output)
    );
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.contains("0.00000000000e0"));
}

#[test]
fn unknown_flags_and_bad_values_exit_one() {
    let dir = TempDir::new().unwrap();
    let (a, c) = write_toy_corpus(dir.path());
    let output = run(&["score", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&[
        "score",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--method",
        "pagerank",
        "--entity",
        "author",
    ]);
    assert_eq!(output.status.code(), Some(1));

    // Method/entity combinations that do not exist are usage errors.
    let output = run(&[
        "score",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--method",
        "hindex",
        "--entity",
        "paper",
    ]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&[
        "compare",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--methods",
        "citex,bogus",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("unknown method"));
}

#[test]
fn data_errors_exit_two_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let (a, _) = write_toy_corpus(dir.path());
    let output = run(&[
        "validate",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        dir.path().join("missing.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "citing_paper_id,cited_paper_id\np1\n").unwrap();
    let output = run(&[
        "validate",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("line 2"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn non_convergence_exits_three_with_scores_written() {
    let dir = TempDir::new().unwrap();
    let (a, c) = write_toy_corpus(dir.path());
    let out_path = dir.path().join("scores.csv");
    // The paper iteration needs ~19 rounds at the default tolerance; one
    // round cannot converge.
    let output = run(&[
        "score",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--method",
        "citex",
        "--entity",
        "paper",
        "--max-iter",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(
        stderr_of(&output).contains("did not converge"),
        "stderr: {}",
        stderr_of(&output)
    );
    let written = fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().count(), 7);
}

#[test]
fn validate_reports_self_citations() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let c = dir.path().join("c.csv");
    fs::write(&a, "author_key,paper_id\nx,p1\n").unwrap();
    fs::write(&c, "citing_paper_id,cited_paper_id\np1,p1\n").unwrap();
    let output = run(&[
        "validate",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("self_citations_stripped: 1"), "{stdout}");
    assert!(!stdout.contains("status: clean"), "{stdout}");
}

#[test]
fn synth_writes_loadable_corpus_files() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("synth_a.csv");
    let c = dir.path().join("synth_c.csv");
    let output = run(&[
        "synth",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--n-papers",
        "200",
        "--n-authors",
        "60",
        "--citations-per-paper",
        "3.0",
        "--seed",
        "42",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let validate = run(&[
        "validate",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
    ]);
    assert_eq!(validate.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&validate.stdout);
    assert!(stdout.contains("status: clean"), "{stdout}");
    assert!(stdout.contains("papers: 200"), "{stdout}");
}

#[test]
fn synth_rejects_infeasible_configs() {
    let dir = TempDir::new().unwrap();
    let output = run(&[
        "synth",
        "--authorship",
        dir.path().join("a.csv").to_str().unwrap(),
        "--citations",
        dir.path().join("c.csv").to_str().unwrap(),
        "--n-papers",
        "5",
        "--citations-per-paper",
        "5.0",
    ]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&[
        "synth",
        "--authorship",
        dir.path().join("a.csv").to_str().unwrap(),
        "--citations",
        dir.path().join("c.csv").to_str().unwrap(),
        "--authors-per-paper",
        "zipf:2",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn every_subcommand_help_exits_zero_and_documents_flags() {
    let expected: &[(&str, &[&str])] = &[
        (
            "validate",
            &["--authorship", "--citations", "--metadata", "--out"],
        ),
        (
            "score",
            &[
                "--authorship",
                "--citations",
                "--metadata",
                "--method",
                "--entity",
                "--out",
                "--epsilon",
                "--max-iter",
            ],
        ),
        (
            "compare",
            &[
                "--authorship",
                "--citations",
                "--metadata",
                "--methods",
                "--top-n",
                "--out",
                "--epsilon",
                "--max-iter",
            ],
        ),
        (
            "gini",
            &[
                "--authorship",
                "--citations",
                "--method",
                "--entity",
                "--out",
                "--epsilon",
                "--max-iter",
            ],
        ),
        (
            "synth",
            &[
                "--authorship",
                "--citations",
                "--n-papers",
                "--n-authors",
                "--citations-per-paper",
                "--attachment-offset",
                "--authors-per-paper",
                "--author-productivity-skew",
                "--seed",
                "--plant-prolific-uncited",
                "--plant-repeated-authors",
            ],
        ),
    ];
    for (sub, flags) in expected {
        let output = run(&[sub, "--help"]);
        assert_eq!(output.status.code(), Some(0), "{sub} --help");
        let stdout = String::from_utf8_lossy(&output.stdout);
        for flag in *flags {
            assert!(stdout.contains(flag), "{sub} --help missing {flag}");
        }
    }
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn compare_report_lists_requested_methods() {
    let dir = TempDir::new().unwrap();
    let (a, c) = write_toy_corpus(dir.path());
    let out_path = dir.path().join("report.txt");
    let output = run(&[
        "compare",
        "--authorship",
        a.to_str().unwrap(),
        "--citations",
        c.to_str().unwrap(),
        "--methods",
        "caps,citex,hindex",
        "--top-n",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let report = fs::read_to_string(&out_path).unwrap();
    assert!(report.contains("methods: caps, citex, hindex"));
    assert!(report.contains("== top authors =="));
    assert!(report.contains("== authors rank agreement (spearman rho) =="));
}
