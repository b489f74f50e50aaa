use std::process::Command;

fn wittlift(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wittlift")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn show_witt_polynomial() {
    let (code, out, _) = wittlift(&["show", "c", "--p", "2", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2*X^3*Y + 3*X^2*Y^2 + 2*X*Y^3");
}

#[test]
fn show_phi() {
    let (code, out, _) = wittlift(&["show", "phi", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "X*Y");
    let (_, out, _) = wittlift(&["show", "phi", "--p", "3"]);
    assert_eq!(out.trim(), "X^2*Y + X*Y^2");
}

#[test]
fn show_y_basis_is_a_10x10_hermite_matrix() {
    let (code, out, _) = wittlift(&["show", "Y-basis", "--p", "2", "--r", "1"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.trim().lines().collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.matches(',').count() == 9));
    let (_, again, _) = wittlift(&["show", "Y-basis", "--p", "2", "--r", "1"]);
    assert_eq!(out, again);
}

#[test]
fn show_hnf() {
    let (code, out, _) = wittlift(&["show", "hnf", "--matrix", "2,4;6,8"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "[2, 0]\n[0, 4]");
}

#[test]
fn unknown_selector_is_a_usage_error() {
    let (code, _, err) = wittlift(&["show", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown selector"));
}

#[test]
fn malformed_flag_is_a_usage_error() {
    let (code, _, err) = wittlift(&["verify", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, _) = wittlift(&["verify", "--p", "4"]);
    assert_eq!(code, 2);
    let (code, _, err) = wittlift(&["verify", "--grid", "p=2;r=12"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"));
}

#[test]
fn witt_suite_at_p5_r3() {
    let (code, out, _) = wittlift(&["verify", "--only", "witt", "--p", "5", "--r", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let report = wittlift_cli::VerificationReport::from_json(&out).unwrap();
    assert!(!report.failed());
    assert!(report.checks.iter().any(|c| c.name == "congruence_p2" && c.params["p"] == "5"));
}

#[test]
fn report_file_round_trips() {
    let path = std::env::temp_dir().join(format!("wittlift-report-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = wittlift(&["verify", "--only", "lemma,pairing", "--p", "2", "--r", "1", "--report", p, "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 failed"));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let report = wittlift_cli::VerificationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    assert_eq!(report.meta.suites, vec!["pairing", "lemma"]);
}
