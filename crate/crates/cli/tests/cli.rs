//! End-to-end runs of the `bfl` binary: exit codes, output shape, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use bfl_core::catalog::{enumerate_classes, parse_generator_text, GroupBlueprint};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfl"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("bfl runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = bfl(&full);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap_or(Value::Null))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("bfl-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn s6_fpf_against_transposition_exits_zero() {
    let o = bfl(&["bf-pair", "--group", "sym:6", "--c-class", "fpf2", "--d-class", "2a", "--p", "2", "--plan", "exhaustive"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("bf-pair sym:6 p=2: holds"));
}

#[test]
fn a5_five_class_commutators_close() {
    let o = bfl(&["comm-closed", "--group", "alt:5", "--class", "5a", "--p", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not closed under squares"));
}

#[test]
fn structconst_support_matches_pair_count() {
    let (c, v) = json(&["structconst", "--table", "tables/a5.json", "--i", "4", "--j", "4", "--list-support"]);
    assert_eq!(c, 0);
    let support = v["support"].as_array().unwrap();
    assert!(!support.is_empty());

    // oracle: count pairs in C_i × C_j multiplying to a fixed representative
    let table: Value = serde_json::from_str(&std::fs::read_to_string(root().join("tables/a5.json")).unwrap()).unwrap();
    let g = GroupBlueprint::alt(5).construct().unwrap();
    let list = enumerate_classes(&g).unwrap();
    let rep = |k: usize| {
        let text = table["classes"][k]["representative"].as_str().unwrap();
        parse_generator_text(&format!("group T perm 5\nx = {text}\n")).unwrap().get("x").unwrap().clone()
    };
    let members = |k: usize| list.class_elements(&g, list.class_of(&rep(k)).unwrap(), 1000).unwrap();
    let ci = members(4);
    let mut hit = Vec::new();
    for e in 0..list.len() {
        let z = rep(e);
        let n = ci.iter().filter(|c| ci.iter().any(|d| c.mul(d) == z)).count();
        if n > 0 {
            hit.push((e as u64, n as u64));
        }
    }
    let got: Vec<(u64, u64)> = support.iter().map(|s| (s["class"].as_u64().unwrap(), s["multiplicity"].as_u64().unwrap())).collect();
    assert_eq!(got, hit);
}

#[test]
fn failing_verdict_exits_one() {
    let o = bfl(&["cc-inverse", "--group", "alt:5", "--class", "5a", "--p", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness product_not_p_element"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&bfl(&["no-such-command"])), 64);
    assert_eq!(code(&bfl(&["bf-pair", "--group", "sym:6", "--c-class", "2a", "--p", "2"])), 64);
    assert_eq!(code(&bfl(&["bf-pair", "--group", "sym:6", "--c-class", "zz", "--d-class", "2a", "--p", "2"])), 64);
    assert_eq!(code(&bfl(&["classes", "--group", "sym:99"])), 64);
    assert_eq!(code(&bfl(&["scan-sym", "--n", "7"])), 64);
    assert_eq!(code(&bfl(&["--threads", "0", "scan-o3"])), 64);
}

#[test]
fn ambiguous_selector_is_usage_error() {
    let o = bfl(&["bf-pair", "--group", "sym:6", "--c-class", "order:2", "--d-class", "2a", "--p", "2"]);
    assert_eq!(code(&o), 64);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("ambiguous"), "{err}");
}

#[test]
fn order_size_selector_resolves() {
    // S6 involution classes have sizes 15, 45 and 15
    let o = bfl(&["--dry-run", "bf-pair", "--group", "sym:6", "--c-class", "order:2,size:45", "--d-class", "2a", "--p", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn data_errors_exit_65() {
    assert_eq!(code(&bfl(&["structconst", "--table", "missing-table", "--i", "1", "--j", "1"])), 65);
    let d = scratch("bad");
    let f = d.join("bad.gen");
    std::fs::write(&f, "group B perm 3\nx = (1,2,9)\n").unwrap();
    assert_eq!(code(&bfl(&["classes", "--group", &format!("file:{}", f.display())])), 65);
}

#[test]
fn every_subcommand_has_a_dry_run() {
    let runs: &[&[&str]] = &[
        &["catalog", "--group", "gl:3:2"],
        &["classes", "--group", "alt:5"],
        &["bf-pair", "--group", "sym:6", "--c-class", "2a", "--d-class", "2b", "--p", "2"],
        &["wreath-free", "--group", "sym:6", "--c-class", "2a", "--d-class", "2b", "--p", "2"],
        &["comm-closed", "--group", "alt:5", "--class", "5a", "--p", "5"],
        &["cc-inverse", "--group", "alt:5", "--class", "5a", "--class", "5b", "--p", "5"],
        &["structconst", "--table", "a5", "--i", "1", "--j", "1"],
        &["wreath-section", "--group", "d8", "--p", "2"],
        &["repn-check", "--battery"],
        &["scan-sym", "--n", "10"],
        &["scan-o3"],
        &["scan-sl2n3"],
        &["l2q-trace"],
        &["l2q-laurent"],
        &["identity-scan", "--group", "psl2:7"],
        &["gen-table", "--shipped", "a5"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json", "--dry-run"];
        full.extend_from_slice(args);
        let o = bfl(&full);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["dry_run"], true, "{args:?}");
    }
}

#[test]
fn json_output_is_deterministic_across_threads() {
    let args = ["scan-sym", "--n", "8"];
    let a = bfl(&[&["--format", "json", "--threads", "1"][..], &args].concat());
    let b = bfl(&[&["--format", "json", "--threads", "3"][..], &args].concat());
    let c = bfl(&[&["--format", "json"][..], &args].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let sampled = ["--format", "json", "scan-sl2n3", "--samples", "50", "--seed", "7"];
    assert_eq!(bfl(&sampled).stdout, bfl(&sampled).stdout);
}

#[test]
fn witnesses_replay_from_a_saved_report() {
    let d = scratch("replay");
    let out = d.join("report.json");
    let o = bfl(&["--format", "json", "--out", out.to_str().unwrap(), "bf-pair", "--group", "alt:5", "--c-class", "5a", "--d-class", "5a", "--p", "5"]);
    assert_eq!(code(&o), 1);
    let (c, v) = json(&["replay", "--report", out.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] == "holds"));
}

#[test]
fn wreath_section_expectations() {
    assert_eq!(code(&bfl(&["wreath-section", "--group", "wreath:3", "--p", "3", "--expect", "found"])), 0);
    assert_eq!(code(&bfl(&["wreath-section", "--group", "q8", "--p", "2", "--expect", "found"])), 1);
    assert_eq!(code(&bfl(&["wreath-section", "--group", "d8", "--p", "2", "--expect", "found"])), 0);
}

#[test]
fn shipped_tables_regenerate_identically() {
    let d = scratch("tables");
    let o = bfl(&["gen-table", "--all-shipped", "--dir", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for (stem, _) in bfl_core::class_algebra::SHIPPED_TABLES {
        let name = format!("{stem}.json");
        let fresh = std::fs::read_to_string(d.join(&name)).unwrap();
        let shipped = std::fs::read_to_string(root().join("tables").join(&name)).unwrap();
        assert_eq!(fresh, shipped, "{name}");
    }
}

#[test]
fn table_level_pair_test_exit_codes() {
    // involution classes of S6: fpf x transposition passes, transposition x transposition does not
    let (c, v) = json(&["structconst", "--table", "s6", "--i", "2a", "--j", "2a", "--p", "2"]);
    assert_eq!(c, 1);
    assert_eq!(v[0]["status"], "fails");
}

#[test]
fn trace_identity_mismatch_is_reported() {
    let (c, v) = json(&["l2q-trace", "--q", "7"]);
    assert_eq!(c, 1);
    assert_eq!(v[0]["facts"]["observed_trace"], "4*t^2 + 0*t + 2");
}
