use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut full = vec!["verify"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--quiet", "--no-timing", "--json", path.to_str().unwrap()]);
    let out = modinv(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (out.status.code().unwrap(), text)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

#[test]
fn n_one_is_rejected() {
    let out = modinv(&["verify", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n > 1"), "{err}");
}

#[test]
fn invalid_inputs_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--n", "2", "--variant", "h2"],
        &["verify", "--n", "2", "--modulus-q", "0x5"],
        &["verify", "--n", "2", "--modulus-q", "0xzz"],
        &[
            "verify",
            "--n",
            "2",
            "--modulus-ambient",
            "0x13",
            "--lambda-basis",
            "0x1,0x1",
        ],
        &["verify", "--n", "2", "--d", "2", "--lambda-basis", "0x1"],
        &["verify", "--n", "3", "--modulus-ambient", "0x13"],
        &["verify", "--n", "2", "--oracle-max-degree", "61"],
        &[
            "verify",
            "--n",
            "2",
            "--modulus-q",
            "0x7",
            "--modulus-ambient",
            "0x7",
            "--lambda-basis",
            "0x4",
        ],
        &["verify", "--n", "17"],
        &["selftest", "bogus"],
        &["selftest", "cocycle", "--n", "4"],
    ];
    for args in cases {
        assert_eq!(modinv(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn closure_cap_is_a_failed_check() {
    let (code, text) = report(&["--n", "2", "--max-group", "10"]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["verdict"], "FAIL(closure)");
    assert_eq!(r["failed_clause"], "closure");
}

#[test]
fn reports_match_golden_files() {
    let (code, text) = report(&["--n", "2", "--d", "0", "--oracle-max-degree", "12"]);
    assert_eq!(code, 0);
    assert_eq!(text, golden("verify_n2_d0_h1.json"));
    let (code, text) = report(&["--n", "2", "--d", "1", "--variant", "h0"]);
    assert_eq!(code, 0);
    assert_eq!(text, golden("verify_n2_d1_h0.json"));
}

#[test]
fn reports_are_byte_stable_across_thread_counts() {
    let args = ["--n", "2", "--d", "1", "--oracle-max-degree", "24"];
    let (_, one) = report(&[&["--threads", "1"][..], &args[..]].concat());
    let (_, four) = report(&[&["--threads", "4"][..], &args[..]].concat());
    let (_, again) = report(&args);
    assert!(!one.is_empty());
    assert_eq!(one, four);
    assert_eq!(one, again);
}

#[test]
fn report_keys_in_stable_order() {
    let (_, text) = report(&["--n", "2"]);
    let keys = [
        "n",
        "d",
        "variant",
        "moduli",
        "lambda_basis",
        "group_order",
        "split",
        "alpha",
        "gamma",
        "action_note",
        "action",
        "degrees",
        "degree_product",
        "jacobian_nonzero",
        "invariance",
        "oracle",
        "verdict",
        "failed_clause",
        "message",
        "elapsed_ms",
    ];
    let positions: Vec<usize> = keys
        .iter()
        .map(|k| {
            text.find(&format!("\n  \"{k}\":"))
                .unwrap_or_else(|| panic!("missing {k}"))
        })
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let r: Value = serde_json::from_str(&text).unwrap();
    assert!(r["elapsed_ms"].is_null());
    let timed = modinv(&["verify", "--n", "2", "--json", "/dev/stdout", "--quiet"]);
    let r: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn text_summary_names_verdict() {
    let out = modinv(&["verify", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("order 504"));
    assert!(s.contains("degrees (9, 56, 1)"));
    assert!(s.contains("verdict     POLYNOMIAL"));
    assert!(modinv(&["verify", "--n", "2", "--quiet"]).stdout.is_empty());
}

#[test]
fn nondefault_basis_gives_affine_action() {
    let (code, text) = report(&[
        "--n",
        "2",
        "--modulus-ambient",
        "0x13",
        "--lambda-basis",
        "0x2",
    ]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["d"], 1);
    assert_eq!(r["group_order"], 960);
    assert_ne!(r["alpha"], "0x0");
    assert_eq!(r["degrees"], serde_json::json!([20, 48, 1]));
    assert!(r["action_note"].as_str().unwrap().starts_with("affine"));
}

#[test]
fn selftest_scopes() {
    let out = modinv(&["selftest", "cocycle", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("cocycle      n=2 960/960 pass"), "{s}");

    let out = modinv(&["selftest", "dickson", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(
        s.contains("c0 = x^2*y + x*y^2, c1 = x^2 + x*y + y^2"),
        "{s}"
    );

    let out = modinv(&["selftest", "oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("oracle       n=1 16/16 pass"));

    let out = modinv(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("n=3 32256/32256 pass"), "{s}");
    assert!(!s.contains("FAIL"));
}
