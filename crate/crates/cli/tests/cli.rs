//! Exit-code contract, report shape and golden JSON for the `lsca` binary.

use std::path::PathBuf;

use assert_cmd::Command;
use predicates::str::contains;
use serde_json::Value;

fn lsca() -> Command {
    let mut cmd = Command::cargo_bin("lsca").expect("binary is built");
    cmd.current_dir(env!("CARGO_MANIFEST_DIR"));
    cmd.env("LSCA_COLOR", "never");
    cmd
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = lsca().args(args).arg("--json").output().expect("runs");
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), v)
}

/// Replaces the timing field so reports compare byte for byte.
fn masked(mut v: Value) -> String {
    v["timing_ms"] = Value::from(0);
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored report; set `LSCA_BLESS=1` to rewrite it.
fn assert_golden(name: &str, args: &[&str]) {
    let (_, v) = json(args);
    let actual = masked(v);
    let path = golden(name);
    if std::env::var_os("LSCA_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn family_lsc_compat_passes() {
    lsca()
        .args(["check", "--family", "T1", "--axioms", "lsc,compat"])
        .assert()
        .code(0)
        .stdout(contains("pass lsc"))
        .stdout(contains("result: pass"));
}

#[test]
fn wab_file_is_lie() {
    lsca().args(["check", "examples/wab.lsca", "--axioms", "lie"]).assert().code(0);
    lsca().args(["check", "examples/vir.lsca"]).assert().code(0);
}

#[test]
fn constraint_violation_is_usage_error() {
    lsca()
        .args(["check", "--family", "T4", "--set", "b=0", "--set", "k1=0"])
        .assert()
        .code(3)
        .stderr(contains("k1 != 0"));
}

#[test]
fn failing_axiom_exits_one_with_counterexample() {
    let (code, v) = json(&["check", "examples/vir_lsc.lsca", "--axioms", "skew,jacobi"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["status"], "fail");
        let cx = &check["counterexample"];
        assert!(cx["residual"].as_str().is_some_and(|s| !s.is_empty()));
        assert!(cx["point"].is_object());
        assert_ne!(cx["value"], "0");
    }
}

#[test]
fn parse_error_exits_two_with_caret() {
    let dir = std::env::temp_dir().join(format!("lsca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.lsca");
    std::fs::write(&file, "algebra V lie;\ngenerators L;\nbracket [L _ L] = lam^;\n").unwrap();
    lsca()
        .arg("check")
        .arg(&file)
        .assert()
        .code(2)
        .stderr(contains("3:23"))
        .stderr(contains("exponent"))
        .stderr(contains("^"));
}

#[test]
fn usage_errors_exit_three() {
    lsca().args(["check"]).assert().code(3);
    lsca().args(["coeff", "--family", "T1", "--mode", "sideways"]).assert().code(3);
    lsca().args(["check", "--family", "T99"]).assert().code(3);
    lsca().args(["check", "--family", "T1", "--set", "zz=1"]).assert().code(3);
    lsca().args(["check", "--family", "T1", "--set", "c=x"]).assert().code(3);
    lsca().args(["check", "--family", "T1", "--axioms", "nope"]).assert().code(3);
    lsca().args(["check", "missing.lsca"]).assert().code(3);
    lsca().args(["coeff", "examples/wab.lsca", "--mode", "corollary"]).assert().code(3);
}

#[test]
fn help_and_version_exit_zero() {
    lsca().arg("--help").assert().code(0).stdout(contains("refute"));
    lsca().arg("--version").assert().code(0);
}

#[test]
fn equations_print_fourteen_residuals() {
    let (code, v) = json(&["equations", "--family", "T5"]);
    assert_eq!(code, 0);
    let items = v["checks"][0]["items"].as_array().unwrap();
    assert_eq!(items.len(), 14);
    assert!(items.iter().all(|i| i["value"] == "0"));
    lsca()
        .args(["equations", "--family", "T8", "--set", "c=2", "--set", "h1=1", "--set", "k2=3"])
        .assert()
        .code(0)
        .stdout(contains("E14   0"));
}

#[test]
fn coefficient_modes() {
    for args in [
        &["coeff", "--family", "T1", "--window", "3", "--mode", "corollary"][..],
        &["coeff", "--family", "T9", "--set", "h1=1", "--set", "k1=1", "--window", "3", "--mode", "left-symmetry"],
        &["coeff", "--family", "T1", "--window", "3", "--mode", "lie"],
        &["coeff", "examples/wab.lsca", "--window", "2", "--mode", "lie"],
    ] {
        lsca().args(args).assert().code(0);
    }
}

#[test]
fn refute_reports_witnesses() {
    let (code, v) = json(&["refute"]);
    assert_eq!(code, 0);
    let items = v["checks"][0]["items"].as_array().unwrap();
    assert!(items.len() >= 8);
    assert!(items.iter().all(|i| i["status"] == "pass"));
}

#[test]
fn list_covers_all_families() {
    let out = lsca().arg("list").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for k in 1..=11 {
        assert!(text.contains(&format!("T{k} ")), "T{k} missing");
    }
    assert!(text.contains("c != 0"));
    let (_, v) = json(&["list"]);
    assert_eq!(v["catalog"].as_array().unwrap().len(), 11);
}

#[test]
fn json_is_deterministic() {
    let args = ["check", "--family", "T10", "--axioms", "lsc,compat,equations"];
    assert_eq!(masked(json(&args).1), masked(json(&args).1));
}

#[test]
fn color_is_opt_in() {
    let out = lsca().env("LSCA_COLOR", "always").args(["check", "examples/vir.lsca"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("\x1b[32m"));
    let out = lsca().args(["check", "examples/vir.lsca"]).output().unwrap();
    assert!(!String::from_utf8_lossy(&out.stdout).contains('\x1b'));
}

#[test]
fn golden_reports() {
    assert_golden("check_t1.json", &["check", "--family", "T1", "--axioms", "lsc,compat"]);
    assert_golden("check_vir_lsc_skew.json", &["check", "examples/vir_lsc.lsca", "--axioms", "skew"]);
    assert_golden("equations_t5.json", &["equations", "--family", "T5"]);
    assert_golden("refute.json", &["refute"]);
}

/// Every key a report emits is declared by the shipped schema, and every
/// required key is present.
#[test]
fn reports_follow_the_shipped_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/report-v1.schema.json")).unwrap();
    let check_keys = |obj: &Value, def: &Value| {
        let props = def["properties"].as_object().unwrap();
        for key in obj.as_object().unwrap().keys() {
            assert!(props.contains_key(key), "undeclared key {key}");
        }
        for req in def["required"].as_array().unwrap() {
            assert!(obj.get(req.as_str().unwrap()).is_some(), "missing {req}");
        }
    };
    for args in [&["check", "examples/vir_lsc.lsca", "--axioms", "jacobi"][..], &["list"], &["refute"]] {
        let (_, v) = json(args);
        check_keys(&v, &schema);
        check_keys(&v["subject"], &schema["properties"]["subject"]);
        for c in v["checks"].as_array().unwrap() {
            check_keys(c, &schema["$defs"]["check"]);
        }
    }
}
