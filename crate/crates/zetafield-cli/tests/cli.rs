//! End-to-end runs of the built binary: exit-code contract, report
//! content, artifact round trips, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zetafield"))
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn zeta_build_reports_the_elliptic_pipeline() {
    let out = bin()
        .args(["zeta", "build", "--spec"])
        .arg(spec("elliptic_f5.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# zetafield-report 1\n"));
    assert!(text.contains("l_coefficients: 1, 3, 5"));
    assert!(text.contains("class_number: 9"));
    assert!(text.contains("rh_verdict: true"));
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let run = || {
        bin()
            .args(["zeta", "build", "--seed", "42", "--spec"])
            .arg(spec("genus2_f7.toml"))
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn perturb_validate_fix_round_trip() {
    let artifact = tmp("roundtrip_member.toml");
    let out = bin()
        .args(["perturb", "fail-rh", "--epsilon", "1e-3", "--annulus", "10", "--spec"])
        .arg(spec("elliptic_f5.toml"))
        .arg("--out")
        .arg(&artifact)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("membership_verdict: true"));
    assert!(stdout(&out).contains("rh_verdict: false"));

    let val = bin()
        .args(["validate", "member", "--spec"])
        .arg(&artifact)
        .output()
        .unwrap();
    assert_eq!(val.status.code(), Some(0), "stderr: {}", stderr(&val));
    assert!(stdout(&val).contains("membership_verdict: true"));
    assert!(stdout(&val).contains("rh_verdict: false"));

    let restored = tmp("roundtrip_restored.toml");
    let fix = bin()
        .args(["perturb", "fix-rh", "--spec"])
        .arg(&artifact)
        .arg("--out")
        .arg(&restored)
        .output()
        .unwrap();
    assert_eq!(fix.status.code(), Some(0), "stderr: {}", stderr(&fix));
    assert!(stdout(&fix).contains("rh_verdict: true"));

    let val2 = bin()
        .args(["validate", "member", "--spec"])
        .arg(&restored)
        .output()
        .unwrap();
    assert_eq!(val2.status.code(), Some(0), "stderr: {}", stderr(&val2));
    assert!(stdout(&val2).contains("rh_verdict: true"));
}

#[test]
fn malformed_spec_exits_one_with_location() {
    let bad = tmp("malformed.toml");
    std::fs::write(&bad, "p = 5\nr = \"one\"\nmodel = \"elliptic\"\n").unwrap();
    let out = bin()
        .args(["zeta", "build", "--spec"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("input error"), "stderr: {err}");
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn singular_curve_exits_one() {
    let bad = tmp("singular.toml");
    std::fs::write(&bad, "p = 5\nr = 1\nmodel = \"elliptic\"\ncoefficients = [0, 0]\n").unwrap();
    let out = bin()
        .args(["curve", "count", "--spec"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("singular"));
}

#[test]
fn tampered_artifact_fails_verification_with_named_invariant() {
    let artifact = tmp("tamper_member.toml");
    let out = bin()
        .args(["perturb", "fail-rh", "--spec"])
        .arg(spec("elliptic_f5.toml"))
        .arg("--out")
        .arg(&artifact)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    // flip one exact coefficient of h; the seed replay can no longer
    // reproduce it
    let text = std::fs::read_to_string(&artifact).unwrap();
    let needle = "re = \"1709943291904/73097875138836272591360025\"";
    assert!(text.contains(needle), "artifact layout changed: {text}");
    let tampered = text.replacen(needle, "re = \"1709943291905/73097875138836272591360025\"", 1);
    let bad = tmp("tampered_member.toml");
    std::fs::write(&bad, tampered).unwrap();

    let val = bin()
        .args(["validate", "member", "--spec"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(val.status.code(), Some(2), "stderr: {}", stderr(&val));
    let err = stderr(&val);
    assert!(
        err.contains("artifact.provenance_consistency") || err.contains("membership."),
        "stderr: {err}"
    );
}

#[test]
fn unknown_flag_exits_one() {
    let out = bin().args(["zeta", "build", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn nevanlinna_csv_has_stable_header() {
    let out = bin()
        .args([
            "zeta",
            "nevanlinna",
            "--rmax",
            "100",
            "--grid",
            "3",
            "--alpha",
            "1,inf",
            "--format",
            "csv",
            "--spec",
        ])
        .arg(spec("elliptic_f5.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("r,alpha,n,N,m,T\n"));
    // 7 radii x 2 probes plus the header
    assert_eq!(text.lines().count(), 15);
}
