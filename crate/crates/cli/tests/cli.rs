//! End-to-end tests of the `mcg` binary: output shapes and exit codes.

use std::process::Command;

fn mcg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mcg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn eval_perm_prints_cycles() {
    let (code, out, _) = mcg(&["eval", "--rep", "perm", "T"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(1 2)");

    let (code, out, _) = mcg(&["eval", "--g", "15", "--p", "1", "--rep", "perm", "rho3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "()");

    let (code, out, _) = mcg(&["eval", "--p", "4", "--rep", "perm", "rho3 rho4"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(1 2 3 4)");
}

#[test]
fn eval_homz_of_the_squared_slide_is_the_identity() {
    let (code, out, _) = mcg(&["eval", "--rep", "homZ", "y^2"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 16);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split_whitespace().collect();
        for (j, c) in cells.iter().enumerate() {
            assert_eq!(*c, if i == j { "1" } else { "0" }, "entry ({i},{j})");
        }
    }
}

#[test]
fn eval_homf2_json_has_hex_rows() {
    let (code, out, _) = mcg(&["eval", "--rep", "homF2", "--json", "A1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["rep"], "homF2");
    assert_eq!(v["dim"], 16);
    assert_eq!(v["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn act_traces_a_known_image() {
    let (code, out, _) = mcg(&["act", "T^2", "gamma5"]);
    assert_eq!(code, 0);
    assert!(out.contains("image known"), "got: {out}");
    assert!(out.contains("gamma7"), "got: {out}");
}

#[test]
fn act_reports_blocked_words_as_undecided() {
    let (code, out, _) = mcg(&["act", "--p", "4", "rho1", "e1"]);
    assert_eq!(code, 2);
    assert!(out.contains("image unknown"), "got: {out}");
}

#[test]
fn check_passes_a_true_identity_in_all_layers() {
    let (code, out, _) = mcg(&["check", "(A1^-1)^(rho3)", "F1"]);
    assert_eq!(code, 0);
    for layer in ["action: pass", "homZ: pass", "homF2: pass", "perm: pass"] {
        assert!(out.contains(layer), "missing '{layer}' in: {out}");
    }
}

#[test]
fn check_understands_the_builtin_abbreviations() {
    let (code, _, err) = mcg(&["check", "(G1)^(T^2)", "G2"]);
    assert_eq!(code, 0, "stderr: {err}");
}

#[test]
fn check_exit_codes_distinguish_fail_and_undecided() {
    let (code, _, _) = mcg(&["check", "--layers", "homF2,perm", "A1", "B1"]);
    assert_eq!(code, 1);
    let (code, _, _) = mcg(&["check", "--layers", "action", "A1 B1", "B1 A1"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_default_ledger_is_clean() {
    let (code, out, err) = mcg(&[
        "verify", "--g", "14", "--p", "1", "--layers", "homF2,perm,action",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("0 fail, 0 undecided"), "got: {out}");
    assert!(out.contains("generate Sym_p: true"), "got: {out}");
}

#[test]
fn verify_json_report_carries_the_conventions() {
    let (code, out, _) = mcg(&["verify", "--json", "--layers", "homF2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["params"]["g"], 15);
    assert!(v["conventionHash"].as_str().unwrap().len() == 64);
    assert!(v["entriesChecked"].as_u64().unwrap() >= 45);
}

#[test]
fn verify_out_writes_report_and_conventions() {
    let dir = std::env::temp_dir().join(format!("mcg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let (code, _, err) = mcg(&[
        "verify", "--layers", "perm", "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let text = std::fs::read_to_string(&report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let conventions = std::fs::read_to_string(dir.join("report.conventions.txt")).unwrap();
    assert!(conventions.contains(v["conventionHash"].as_str().unwrap()));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_accepts_a_custom_ledger_file() {
    let dir = std::env::temp_dir().join(format!("mcg-cli-ledger-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tiny.ledger");
    std::fs::write(
        &path,
        "def W = T^2\nTINY | perm | (W)^-1 T T | 1 | | rotation squares cancel\n",
    )
    .unwrap();
    let (code, out, err) = mcg(&["verify", "--ledger", path.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("TINY"), "got: {out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gens_compare_certifies_equality() {
    let (code, out, err) = mcg(&["gens-compare", "--g", "14", "--p", "1"]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("mod-2 group: yes"), "got: {out}");
    assert!(out.contains("Sym_p: yes"), "got: {out}");
}

#[test]
fn usage_and_input_errors_exit_3() {
    let (code, _, _) = mcg(&["frobnicate"]);
    assert_eq!(code, 3);
    let (code, _, _) = mcg(&["eval", "--g", "5", "--p", "1", "A1"]);
    assert_eq!(code, 3);
    let (code, _, _) = mcg(&["eval", "nosuchword$$"]);
    assert_eq!(code, 3);
    let (code, _, _) = mcg(&["check", "--layers", "bogus", "A1", "A1"]);
    assert_eq!(code, 3);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = mcg(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}
