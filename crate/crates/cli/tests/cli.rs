//! End-to-end checks of the command-line surface.

use std::process::Command;

fn qcurve(args: &[&str]) -> (String, String, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcurve"))
        .args(args)
        .output()
        .expect("spawn qcurve");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.success(),
    )
}

#[test]
fn normalize_applies_the_rewrite_system() {
    let (out, _, ok) = qcurve(&["normalize", "c a"]);
    assert!(ok);
    assert_eq!(out.trim(), "q^-1 a c");
    let (out, _, _) = qcurve(&["normalize", "a* a + c c*"]);
    assert_eq!(out.trim(), "1");
}

#[test]
fn act_applies_the_hopf_operators() {
    let (out, _, ok) = qcurve(&["act", "--op", "E", "a"]);
    assert!(ok);
    assert_eq!(out.trim(), "-q c*");
    let (out, _, _) = qcurve(&["act", "--op", "K", "a"]);
    assert_eq!(out.trim(), "q^{-1/2} a");
    let (out, _, _) = qcurve(&["act", "--op", "X-", "a*"]);
    assert_eq!(out.trim(), "c");
}

#[test]
fn differentials_print_canonical_forms() {
    let (out, _, _) = qcurve(&["d", "a*"]);
    assert_eq!(out.trim(), "c w-");
    let (out, _, _) = qcurve(&["del", "a"]);
    assert_eq!(out.trim(), "-q c* w+");
    let (out, _, _) = qcurve(&["delbar", "a"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn curvature_values() {
    let (out, _, ok) = qcurve(&["curvature", "--n", "0"]);
    assert!(ok);
    assert_eq!(out.trim(), "0");
    let (out, _, _) = qcurve(&["curvature", "--n", "2"]);
    // -q^{-1}(q + q^{-1}) = -1 - q^{-2}
    assert_eq!(out.trim(), "(-1 - q^-2)");
}

#[test]
fn sections_lists_the_kernel() {
    let (out, _, ok) = qcurve(&["sections", "--n", "0", "--maxlen", "4"]);
    assert!(ok);
    assert!(out.contains("kernel dimension 1"));
    assert!(out.lines().any(|l| l.trim() == "1"));
}

#[test]
fn parse_errors_set_exit_code_and_position() {
    let (_, err, ok) = qcurve(&["normalize", "a ] c"]);
    assert!(!ok);
    assert!(err.contains("position 2"), "{err}");
    let (_, err, ok) = qcurve(&["normalize", "b"]);
    assert!(!ok);
    assert!(err.contains("unknown generator"), "{err}");
}

#[test]
fn unknown_suite_is_rejected_with_usage() {
    let (_, err, ok) = qcurve(&["verify", "nonsense"]);
    assert!(!ok);
    assert!(err.contains("registry"), "{err}");
}

#[test]
fn config_file_is_read_and_flags_override() {
    let dir = std::env::temp_dir().join("qcurve-config-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.txt");
    std::fs::write(&path, "n=2\nseed=9\n").unwrap();
    let (out, _, _) = qcurve(&["curvature", "--config", path.to_str().unwrap()]);
    assert_eq!(out.trim(), "(-1 - q^-2)"); // n = 2 from the file
    let (out, _, _) = qcurve(&[
        "curvature",
        "--config",
        path.to_str().unwrap(),
        "--n",
        "1",
    ]);
    assert_eq!(out.trim(), "-1"); // flag overrides file
}

#[test]
fn verify_single_suite_exits_zero_and_machine_format_is_stable() {
    let (out1, _, ok) = qcurve(&["verify", "confluence", "--format", "machine", "--seed", "3"]);
    assert!(ok);
    let (out2, _, _) = qcurve(&["verify", "confluence", "--format", "machine", "--seed", "3"]);
    assert_eq!(out1, out2);
    assert!(out1.contains("summary { suite: confluence"));
}

#[test]
fn jet_verify_reports_the_splitting_defect() {
    // canonical pair on the trivial bundle splits; a perturbed (1,0)
    // part does not.
    let (out, _, ok) = qcurve(&["jet", "verify", "--n", "0"]);
    assert!(ok);
    assert!(out.contains("splitting-defect-zero-true"), "{out}");
    let (out, _, ok) = qcurve(&["jet", "verify", "--n", "0", "--perturb10", "a* c*"]);
    assert!(ok);
    assert!(out.contains("splitting-defect-zero-false"), "{out}");
    // a perturbation of the wrong weight is rejected up front
    let (_, err, ok) = qcurve(&["jet", "verify", "--n", "0", "--perturb10", "a"]);
    assert!(!ok);
    assert!(err.contains("weight"), "{err}");
}

#[test]
fn bimodule_verify_exits_nonzero_on_the_honest_checks() {
    let (out, _, ok) = qcurve(&["bimodule", "verify", "--format", "machine"]);
    assert!(!ok);
    assert!(out.contains("check compat-canonical-n+0 fail residual="), "{out}");
    assert!(out.contains("check lift-identity-n+0 pass"), "{out}");
}

#[test]
fn report_goes_to_file_with_out_flag() {
    let dir = std::env::temp_dir().join("qcurve-out-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let (_, _, ok) = qcurve(&[
        "verify",
        "curvature-table",
        "--format",
        "machine",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(ok);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("check curvature-n+1 pass"));
}
