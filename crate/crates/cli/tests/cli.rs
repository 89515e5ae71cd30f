//! End-to-end tests of the `reidemeister` binary: fixed input files in, exact
//! stdout/stderr/exit-code contract out. Every expected line here is frozen on
//! purpose — the CLI promises byte-identical reports for identical inputs, so
//! any diff in these strings is a reportable behaviour change.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_reidemeister"));
    cmd.args(args);
    // the prime override must come from the test, not the ambient shell
    cmd.env_remove("REIDEMEISTER_PRIME");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

/// Asserts that `text` contains `line` as a complete line, not a substring
/// of a longer one — keeps "R = 2" from matching "R = 25".
fn assert_line(text: &str, line: &str) {
    assert!(
        text.lines().any(|l| l == line),
        "expected line {line:?} in output:\n{text}"
    );
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", stderr(out));
}

// ---------------------------------------------------------------------------
// twisted
// ---------------------------------------------------------------------------

#[test]
fn twisted_reports_classes_and_representatives() {
    let out = run(&["twisted", fixture("c4.json").to_str().unwrap(), fixture("c4_inv.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "group: cyclic(4) (order 4)");
    assert_line(&text, "automorphism: images [0,3,2,1] (order 2)");
    assert_line(&text, "R = 2");
    assert_line(&text, "classes: [0,2],[1,3]");
    assert_line(&text, "representatives: [0,1]");
}

#[test]
fn twisted_decide_reports_witness_or_inequivalence() {
    let c4 = fixture("c4.json");
    let inv = fixture("c4_inv.json");
    let out = run(&["twisted", c4.to_str().unwrap(), inv.to_str().unwrap(), "--decide", "0", "2"]);
    assert_exit(&out, 0);
    assert_line(&stdout(&out), "decision: 0 ~ 2 equivalent (witness g = 1)");

    let out = run(&["twisted", c4.to_str().unwrap(), inv.to_str().unwrap(), "--decide", "0", "1"]);
    assert_exit(&out, 0);
    assert_line(&stdout(&out), "decision: 0 ~ 1 inequivalent");
}

// ---------------------------------------------------------------------------
// tbft
// ---------------------------------------------------------------------------

#[test]
fn tbft_sweeps_every_automorphism_of_s3() {
    let out = run(&["tbft", fixture("s3.json").to_str().unwrap(), "--all-automorphisms"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "group: symmetric(3) (order 6)");
    assert_line(&text, "prime: 7");
    assert_line(&text, "all pass: true");
    let aut_rows: Vec<&str> = text.lines().filter(|l| l.starts_with("aut[")).collect();
    assert_eq!(aut_rows.len(), 6);
    assert!(aut_rows.iter().all(|l| l.ends_with(", pass")));
    assert_line(&text, "aut[0]: images [0,1,2,3,4,5], R = 3, S_f = 3, invariant = 3, pass");
}

#[test]
fn tbft_accepts_a_multiplication_table_group() {
    // the quaternion group comes in as an explicit table with element names
    let out = run(&["tbft", fixture("q8.json").to_str().unwrap(), "--all-automorphisms"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "all pass: true");
    assert_eq!(text.lines().filter(|l| l.starts_with("aut[")).count(), 24);
}

#[test]
fn prime_override_changes_the_working_prime() {
    let s3 = fixture("s3.json");
    let out = run_with_env(
        &["tbft", s3.to_str().unwrap(), "--all-automorphisms"],
        &[("REIDEMEISTER_PRIME", "13")],
    );
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "prime: 13");
    assert_line(&text, "all pass: true");
}

#[test]
fn prime_override_rejects_inadmissible_and_garbage() {
    let s3 = fixture("s3.json");
    // 5 is prime but 5 mod exp(S3) = 5 mod 6 != 1
    let out = run_with_env(
        &["tbft", s3.to_str().unwrap(), "--all-automorphisms"],
        &[("REIDEMEISTER_PRIME", "5")],
    );
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("not an admissible prime"));

    let out = run_with_env(
        &["tbft", s3.to_str().unwrap(), "--all-automorphisms"],
        &[("REIDEMEISTER_PRIME", "abc")],
    );
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("must be a prime number"));
}

// ---------------------------------------------------------------------------
// group spec kinds
// ---------------------------------------------------------------------------

#[test]
fn group_files_may_reference_sibling_files() {
    // product and semidirect specs name their factor files relative to the
    // spec's own directory, so running from anywhere must work
    let out = run(&["autlist", fixture("z6_product.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "group: product(cyclic(2), cyclic(3)) (order 6)");
    assert_line(&text, "automorphisms: 2");

    let out = run(&["autlist", fixture("s3_semidirect.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "group: semidirect(cyclic(3), m=2) (order 6)");
    assert_line(&text, "automorphisms: 6");
}

#[test]
fn permutation_groups_close_under_the_generators() {
    let out = run(&["autlist", fixture("perm_s3.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "group: permutation(degree=3, order=6) (order 6)");
    assert_line(&text, "automorphisms: 6");
}

#[test]
fn autlist_identifies_each_automorphism() {
    let out = run(&["autlist", fixture("c4.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "automorphisms: 2");
    assert_line(&text, "aut[0]: images [0,1,2,3] (order 1)");
    assert_line(&text, "aut[1]: images [0,3,2,1] (order 2)");
}

// ---------------------------------------------------------------------------
// congruence
// ---------------------------------------------------------------------------

#[test]
fn congruence_audit_of_the_cat_map() {
    let out = run(&["congruence", "--matrix", fixture("catmap.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "source: Z^2 automorphism [[2,1],[1,1]]");
    assert_line(&text, "n 1: sum 1, residue 0, pass");
    assert_line(&text, "n 2: sum 4, residue 0, pass");
    assert_line(&text, "n 3: sum 15, residue 0, pass");
    assert_line(&text, "n 4: sum 40, residue 0, pass");
    assert_line(&text, "skipped: none");
    assert_line(&text, "violations: none");
    assert_line(&text, "all pass: true");
}

#[test]
fn congruence_audit_of_a_finite_group() {
    let out = run(&[
        "congruence",
        "--group",
        fixture("z3.json").to_str().unwrap(),
        "--aut",
        fixture("z3_inv.json").to_str().unwrap(),
        "--max-n",
        "6",
    ]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "n 1: sum 1, residue 0, pass");
    assert_line(&text, "n 6: sum 0, residue 0, pass");
    assert_line(&text, "all pass: true");
}

#[test]
fn congruence_audit_skips_infinite_terms_honestly() {
    // M = -I on Z: odd iterates have R = 2, even iterates R = inf
    let out = run(&["congruence", "--matrix", fixture("neg1.json").to_str().unwrap(), "--max-n", "4"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "n 1: sum 2, residue 0, pass");
    assert_line(&text, "n 2: skipped (infinite term)");
    assert_line(&text, "n 4: skipped (infinite term)");
    assert_line(&text, "skipped: 2,4");
    assert_line(&text, "all pass: true");
}

// ---------------------------------------------------------------------------
// zeta
// ---------------------------------------------------------------------------

#[test]
fn zeta_lefschetz_of_the_torus_cat_map() {
    let out = run(&["zeta", "--lefschetz", fixture("torus.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    assert_line(&stdout(&out), "zeta = (1 - 3*z + z^2)/(1 - z)^2");
}

#[test]
fn zeta_floer_product_form() {
    let out = run(&["zeta", "--floer", "2", "--counts", "1,3"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "counts: [1,3]");
    assert_line(&text, "zeta = 1/((1 - z)*(1 - z^2))");
}

#[test]
fn zeta_reidemeister_series_of_the_cat_map() {
    let out = run(&[
        "zeta",
        "--reidemeister",
        fixture("catmap.json").to_str().unwrap(),
        "--order",
        "6",
    ]);
    assert_exit(&out, 0);
    assert_line(
        &stdout(&out),
        "series = 1 + z + 3*z^2 + 8*z^3 + 21*z^4 + 55*z^5 + 144*z^6 + O(z^7)",
    );
}

#[test]
fn zeta_rejects_negative_counts_as_input_error() {
    let out = run(&["zeta", "--floer", "2", "--counts", "1,-3"]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("negative"), "stderr: {}", stderr(&out));
}

// ---------------------------------------------------------------------------
// separate
// ---------------------------------------------------------------------------

#[test]
fn separate_finds_a_finite_quotient_and_certificate() {
    let out = run(&["separate", fixture("neg1.json").to_str().unwrap(), "0", "1", "--rp"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "R = 2");
    assert_line(&text, "decision: inequivalent");
    assert_line(&text, "separation: k = 2 (x -> [0], y -> [1])");
    assert_line(&text, "rp: modulus 2, classes 2, conditions verified");
}

#[test]
fn separate_reports_a_witness_for_equivalent_vectors() {
    // y - x = 4 = (1 - (-1)) * 2, so g = 2 conjugates 0 to 4
    let out = run(&["separate", fixture("neg1.json").to_str().unwrap(), "0", "4"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "decision: equivalent (witness g = [2])");
    assert_line(&text, "separation: not applicable (already equivalent)");
}

#[test]
fn separate_with_infinite_reidemeister_number() {
    // the identity has R = inf; the residual certificate does not apply, but
    // this particular pair still dies in the mod-2 quotient
    let out = run(&["separate", fixture("id2.json").to_str().unwrap(), "0,0", "1,0", "--rp"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "R = inf");
    assert_line(&text, "decision: inequivalent");
    assert_line(&text, "separation: k = 2 (x -> [0,0], y -> [1,0])");
    assert_line(&text, "rp: not applicable (R = inf)");
}

// ---------------------------------------------------------------------------
// lemma-check
// ---------------------------------------------------------------------------

#[test]
fn lemma_check_matches_twisted_and_coset_classes() {
    let out = run(&[
        "lemma-check",
        fixture("z3.json").to_str().unwrap(),
        fixture("z3_inv.json").to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert_line(&text, "m: 2");
    assert_line(&text, "twisted classes: 1");
    assert_line(&text, "coset classes: 1");
    assert_line(&text, "bijection holds: true");
}

// ---------------------------------------------------------------------------
// input errors always exit 2
// ---------------------------------------------------------------------------

#[test]
fn malformed_table_is_an_input_error() {
    let out = run(&[
        "twisted",
        fixture("bad_table.json").to_str().unwrap(),
        fixture("c4_inv.json").to_str().unwrap(),
    ]);
    assert_exit(&out, 2);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("row 3 is not a permutation"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_spec_fields_are_rejected() {
    let out = run(&["autlist", fixture("unknown_field.json").to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("unknown field `flavor`"), "stderr: {}", stderr(&out));
}

#[test]
fn fields_from_another_kind_are_rejected() {
    let out = run(&["autlist", fixture("wrong_field.json").to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(
        stderr(&out).contains("field \"degree\" is not allowed for kind \"cyclic\""),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["autlist", fixture("no_such_group.json").to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("no_such_group.json"), "stderr: {}", stderr(&out));
}

#[test]
fn self_referencing_specs_are_cut_off() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("ouroboros.json");
    std::fs::write(
        &path,
        r#"{"kind": "product", "factors": ["ouroboros.json", "ouroboros.json"]}"#,
    )
    .expect("write spec");
    let out = run(&["autlist", path.to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("nest too deeply"), "stderr: {}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    // clap rejects the unknown flag before any command logic runs
    let out = run(&["twisted", "--no-such-flag"]);
    assert_exit(&out, 2);
}

// ---------------------------------------------------------------------------
// determinism: identical runs produce identical bytes
// ---------------------------------------------------------------------------

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: Vec<Vec<String>> = vec![
        vec![
            "tbft".into(),
            fixture("s3.json").to_str().unwrap().into(),
            "--all-automorphisms".into(),
        ],
        vec![
            "tbft".into(),
            fixture("s3.json").to_str().unwrap().into(),
            "--all-automorphisms".into(),
            "--json".into(),
        ],
        vec![
            "twisted".into(),
            fixture("c4.json").to_str().unwrap().into(),
            fixture("c4_inv.json").to_str().unwrap().into(),
            "--json".into(),
        ],
        vec![
            "congruence".into(),
            "--matrix".into(),
            fixture("catmap.json").to_str().unwrap().into(),
            "--json".into(),
        ],
        vec![
            "separate".into(),
            fixture("neg1.json").to_str().unwrap().into(),
            "0".into(),
            "1".into(),
            "--rp".into(),
            "--json".into(),
        ],
    ];
    for args in &cases {
        let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let first = run(&argv);
        let second = run(&argv);
        assert_exit(&first, 0);
        assert_eq!(first.stdout, second.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn json_reports_carry_the_full_contract() {
    let out = run(&[
        "twisted",
        fixture("c4.json").to_str().unwrap(),
        fixture("c4_inv.json").to_str().unwrap(),
        "--json",
    ]);
    assert_exit(&out, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(report["command"], "twisted");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["results"]["reidemeister"], 2);
    assert_eq!(report["results"]["classes"][0][0], 0);
    assert_eq!(report["results"]["classes"][0][1], 2);
    // inputs are echoed so a report is self-contained
    assert_eq!(report["inputs"]["group"]["kind"], "cyclic");

    let out = run(&[
        "tbft",
        fixture("s3.json").to_str().unwrap(),
        "--all-automorphisms",
        "--json",
    ]);
    assert_exit(&out, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let verdicts = report["verdicts"].as_array().expect("verdict list");
    assert_eq!(verdicts.len(), 6);
    assert!(verdicts.iter().all(|v| v["pass"] == true));
}
