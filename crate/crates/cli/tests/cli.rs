//! End-to-end tests of the binary: exit codes, witnesses, golden outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greedoid-lab"))
        .args(args)
        .env_remove("GREEDOID_LAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn path_of(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn check_interval_on_path_passes() {
    let out = run(&["check", path_of(&fixture("path.greedoid")), "--props", "interval"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "[PASS] interval\n");
}

#[test]
fn check_defaults_flag_optimism_failure() {
    let out = run(&["check", path_of(&fixture("trimmed.greedoid"))]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("[PASS] normal"), "{text}");
    assert!(text.contains("[PASS] interval"), "{text}");
    assert!(text.contains("[FAIL] optimism"), "{text}");
    assert!(text.contains("never continues any prefix"), "{text}");
}

#[test]
fn check_antimatroid_witness() {
    let out = run(&["check", path_of(&fixture("line4.greedoid")), "--props", "antimatroid"]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout(&out),
        "[FAIL] antimatroid — union of {a} and {b,c} is infeasible\n"
    );
    let out = run(&["check", path_of(&fixture("shelling.greedoid")), "--props", "antimatroid"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_missing_file_is_an_error() {
    let out = run(&["check", path_of(&fixture("no-such-file.greedoid"))]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot read"), "{}", stderr(&out));
}

#[test]
fn check_unparsable_fixture_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.greedoid");
    std::fs::write(&path, "alphabet: a\nfeasible: {b}\n").unwrap();
    let out = run(&["check", path_of(&path)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown letter"), "{}", stderr(&out));
}

#[test]
fn check_unknown_prop_is_a_usage_error() {
    let out = run(&["check", path_of(&fixture("path.greedoid")), "--props", "sideways"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn rep_passes_on_covering_rank() {
    let out = run(&["rep", path_of(&fixture("path.greedoid")), path_of(&fixture("path.rank"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    for name in ["rank-axioms", "representation", "aligned", "adjunction", "cover-preserving"] {
        assert!(text.contains(&format!("[PASS] {name}")), "{text}");
    }
}

#[test]
fn rep_reports_misrepresentation_witness() {
    let out = run(&[
        "rep",
        path_of(&fixture("path.greedoid")),
        path_of(&fixture("bad.rank")),
        "--check",
        "representation",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(
        text.contains("[FAIL] representation — the families first differ at {b}"),
        "{text}"
    );
    assert!(text.contains("infeasible in the greedoid"), "{text}");
}

#[test]
fn rep_detects_broken_rank_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drop.rank");
    // Not monotone: the full set ranks below a singleton.
    std::fs::write(
        &path,
        "alphabet: a,b\nrank: {} = 0\nrank: {a} = 1\nrank: {a,b} = 0\nrank: {b} = 1\n",
    )
    .unwrap();
    let out = run(&["rep", path_of(&fixture("path.greedoid")), path_of(&path)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] rank-axioms"), "{}", stdout(&out));
}

#[test]
fn rep_rejects_alphabet_mismatch() {
    let out = run(&[
        "rep",
        path_of(&fixture("triangle.greedoid")),
        path_of(&fixture("path.rank")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("different alphabets"), "{}", stderr(&out));
}

#[test]
fn rep_galois_reproduces_the_collapsing_composite() {
    let out = run(&[
        "rep",
        path_of(&fixture("figure.greedoid")),
        path_of(&fixture("figure.rank")),
        "--check",
        "galois",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("[PASS] adjunction"), "{text}");
    assert!(text.contains("[PASS] cover-preserving"), "{text}");
    assert!(text.contains("[FAIL] insertion — composite sends {b} to {}"), "{text}");
    assert!(text.contains("[FAIL] isomorphism"), "{text}");
}

#[test]
fn lattice_reports_structure_and_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("lattice.dot");
    let out = run(&[
        "lattice",
        path_of(&fixture("trimmed.greedoid")),
        "--dot",
        path_of(&dot),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("flat 0: kernel {} rank 0"), "{text}");
    assert!(text.contains("[PASS] semimodular"), "{text}");
    assert!(text.contains("[PASS] kernels-intersection-closed"), "{text}");
    assert!(text.contains("[PASS] forking"), "{text}");
    let rendered = std::fs::read_to_string(&dot).unwrap();
    assert!(rendered.starts_with("digraph flat_lattice {"), "{rendered}");
}

#[test]
fn audit_clean_instance_exits_zero_and_writes_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("audit.tsv");
    let cex = dir.path().join("counterexamples");
    let out = run(&[
        "audit",
        path_of(&fixture("trimmed.greedoid")),
        "--tsv",
        path_of(&tsv),
        "--emit-counterexample",
        path_of(&cex),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("equivalence audit"), "{text}");
    assert!(text.contains("greatest candidate misrepresents {a,d}"), "{text}");
    let tsv_text = std::fs::read_to_string(&tsv).unwrap();
    assert_eq!(tsv_text.lines().filter(|l| l.starts_with("item\t")).count(), 5);
    assert_eq!(tsv_text.lines().filter(|l| l.starts_with("violation\t")).count(), 0);
    // No violations, so no counterexample directory appears.
    assert!(!cex.exists());
}

#[test]
fn audit_requires_a_loop_free_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loopy.greedoid");
    std::fs::write(&path, "alphabet: a,b\nfeasible: {}\nfeasible: {a}\n").unwrap();
    let out = run(&["audit", path_of(&path)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] normal"), "{}", stdout(&out));
    assert!(stdout(&out).contains("loops {b}"), "{}", stdout(&out));
}

#[test]
fn survey_two_letters_is_clean() {
    let out = run(&["survey", "2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("3 normal greedoids"), "{text}");
    assert!(text.contains("no violated implications"), "{text}");
}

#[test]
fn survey_rejects_oversized_alphabets() {
    let out = run(&["survey", "9"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("at most 4"), "{}", stderr(&out));
}

#[test]
fn survey_honours_the_environment_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_greedoid-lab"))
        .args(["survey", "3"])
        .env("GREEDOID_LAB_BUDGET", "2")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn invalid_environment_budget_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_greedoid-lab"))
        .args(["check", path_of(&fixture("path.greedoid"))])
        .env("GREEDOID_LAB_BUDGET", "plenty")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("GREEDOID_LAB_BUDGET"), "{}", stderr(&out));
}

#[test]
fn construct_ubg_matches_the_checked_in_fixture() {
    let out = run(&["construct", "ubg", path_of(&fixture("path.graph"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "alphabet: a,b\nfeasible: {}\nfeasible: {a}\nfeasible: {a,b}\n"
    );
}

#[test]
fn construct_poset_anti_lists_lower_sets() {
    let out = run(&["construct", "poset-anti", path_of(&fixture("chain.poset"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "alphabet: a,b,c\nfeasible: {}\nfeasible: {a}\nfeasible: {a,b}\nfeasible: {a,b,c}\n"
    );
}

#[test]
fn construct_trim_reproduces_the_golden_family() {
    let out = run(&[
        "construct",
        "trim",
        path_of(&fixture("line4.greedoid")),
        path_of(&fixture("shelling.greedoid")),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "alphabet: a,b,c,d\nfeasible: {}\nfeasible: {a}\nfeasible: {a,b}\n\
         feasible: {a,c}\nfeasible: {c}\nfeasible: {c,d}\n"
    );
}

#[test]
fn construct_trim_rejects_a_non_antimatroid() {
    let out = run(&[
        "construct",
        "trim",
        path_of(&fixture("line4.greedoid")),
        path_of(&fixture("line4.greedoid")),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] trim"), "{}", stdout(&out));
}

#[test]
fn greedy_follows_the_weights() {
    let out = run(&[
        "greedy",
        path_of(&fixture("triangle7.greedoid")),
        "--weights",
        "a=3,b=2,c=1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "abc\n");
    let out = run(&[
        "greedy",
        path_of(&fixture("triangle7.greedoid")),
        "--weights",
        "a=1,b=2,c=3",
    ]);
    // {c} alone is infeasible, so the first pick is b; c follows at once.
    assert_eq!(stdout(&out), "bca\n");
}

#[test]
fn greedy_on_a_forced_chain() {
    let out = run(&["greedy", path_of(&fixture("path.greedoid"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "ab\n");
}

#[test]
fn greedy_breaks_ties_towards_earlier_letters() {
    let out = run(&["greedy", path_of(&fixture("triangle7.greedoid"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "abc\n");
}

#[test]
fn greedy_weight_lists_must_cover_each_letter_once() {
    let f = fixture("triangle7.greedoid");
    for weights in ["a=3,b=2", "a=1,a=2,b=3,c=4", "a=1,b=2,z=3", "a=1,b=two,c=3"] {
        let out = run(&["greedy", path_of(&f), "--weights", weights]);
        assert_eq!(code(&out), 2, "weights `{weights}` should be rejected");
    }
}

#[test]
fn export_lattice_defaults_to_stdout() {
    let out = run(&["export", "lattice", path_of(&fixture("path.greedoid"))]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph flat_lattice {"), "{text}");
    assert!(text.contains("f0 -> f1;"), "{text}");
    assert!(text.contains("f1 -> f2;"), "{text}");
}

#[test]
fn export_galois_draws_both_adjoints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("galois.dot");
    let out = run(&[
        "export",
        "galois",
        path_of(&fixture("figure.greedoid")),
        path_of(&fixture("figure.rank")),
        "--out",
        path_of(&path),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("subgraph cluster_flats"), "{text}");
    assert!(text.contains("subgraph cluster_closed"), "{text}");
    assert!(text.contains("c4 [label=\"{b}\"]"), "{text}");
    // The closed set {b} maps down to the bottom flat: the collapse that
    // separates adjointness from isomorphism.
    assert!(text.contains("c4 -> f0 [style=dotted"), "{text}");
    assert!(text.contains("f0 -> c0 [style=dashed"), "{text}");
}
