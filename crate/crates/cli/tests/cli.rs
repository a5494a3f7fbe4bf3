use std::fs;
use std::process::{Command, Output};

fn ncp_verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncp-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn counts_partitions_and_trees() {
    let o = ncp_verify(&["enumerate", "--what", "partitions", "--n", "7", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "429");
    let o = ncp_verify(&["enumerate", "--what", "trees", "--n", "4", "--count"]);
    assert_eq!(stdout(&o).trim(), "12");
    let o = ncp_verify(&["enumerate", "--what", "maxchains", "--n", "5", "--count"]);
    assert_eq!(stdout(&o).trim(), "125");
}

#[test]
fn lists_partitions_one_per_line() {
    let o = ncp_verify(&["enumerate", "--what", "partitions", "--n", "4"]);
    assert_eq!(stdout(&o).lines().count(), 14);
}

#[test]
fn check_refuted_chain() {
    let o = ncp_verify(&["check", "--chain", "12,46", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(1,+,3)(1)"), "{text}");
    assert!(text.contains("replay"), "{text}");
}

#[test]
fn check_positive_control_as_json() {
    let o = ncp_verify(&["check", "--chain", "24<246", "--n", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cond_iv"]["outcome"], "witness");
}

#[test]
fn check_with_dual_and_dominant() {
    let o = ncp_verify(&[
        "check",
        "--chain",
        "13<13457",
        "--n",
        "7",
        "--dual",
        "--dominant",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dual"));
}

#[test]
fn incomparable_chain_is_a_usage_error() {
    let o = ncp_verify(&["check", "--chain", "13<24", "--n", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(ncp_verify(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        ncp_verify(&["enumerate", "--what", "partitions", "--n", "12"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ncp_verify(&["--help"]).status.code(), Some(0));
}

#[test]
fn small_theorem_run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let csv = dir.path().join("classes.csv");
    let o = ncp_verify(&[
        "theorem5",
        "--n",
        "6",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["n"], 6);
    let header = fs::read_to_string(&csv).unwrap();
    assert!(header.starts_with("representative,"));
}

#[test]
fn seven_strand_run_reports_misalignment_only() {
    // The theorem holds; the transcribed table disagrees in a few places.
    let o = ncp_verify(&["theorem5", "--n", "7", "--no-certificates"]);
    let text = stdout(&o);
    assert!(text.contains("THEOREM 5 VERIFIED"), "{text}");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        let o = ncp_verify(&[
            "render",
            "--input",
            "12<12,34",
            "--out",
            out.to_str().unwrap(),
            "--n",
            "7",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("<svg"));
    let tree = dir.path().join("t.svg");
    let o = ncp_verify(&[
        "render",
        "--input",
        "1-2,2-3,3-4",
        "--out",
        tree.to_str().unwrap(),
        "--n",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn lemma_validation_is_clean_for_small_n() {
    let o = ncp_verify(&["validate-lemma3", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 violations"));
}

#[test]
fn fixtures_listing() {
    let o = ncp_verify(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("case")).count(),
        39
    );
}
