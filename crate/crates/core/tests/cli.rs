//! The command-line contract: outputs, JSON records and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use plugpalf::report::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plugpalf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plugpalf-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn invariants_of_reduced_a() {
    let o = run(&["invariants", "kirby", "catalog:A.reduced"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("parity       even"), "{s}");
    assert!(s.contains("det          15"), "{s}");
}

#[test]
fn invariants_of_w12_palf() {
    let o = run(&["invariants", "palf", "catalog:W(1,2)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    let inv = r.invariants.unwrap();
    assert_eq!((inv.chi, inv.b2), (2, 1));
}

#[test]
fn malformed_file_exits_1() {
    let dir = scratch("malformed");
    let f = dir.join("bad.palf");
    std::fs::write(&f, "holes 4\ncycle {}\n").unwrap();
    let o = run(&["invariants", "palf", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:7: empty curve"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn run_script_results_and_failures() {
    let o = run(&["run-script", "catalog:B.kirby", "catalog:reduce_B", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("L -8 -3\nL -3 -3\n"), "{s}");
    assert!(s.contains("# step 1: cancel 2 with 1"), "{s}");

    let dir = scratch("script");
    let f = dir.join("bad.script");
    std::fs::write(&f, "slide 1 over 2 +\ncancel 1 with 1\n").unwrap();
    let o = run(&["run-script", "catalog:A.kirby", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 2"));
}

#[test]
fn theorem1_reports() {
    assert_eq!(run(&["verify-theorem1", "--m", "1", "--n", "2"]).status.code(), Some(0));
    let o = run(&["verify-theorem1", "--m", "3", "--n", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.items[0].comparisons.iter().any(|c| c.quantity == "cycles" && c.computed == "11"));
    assert_eq!(run(&["verify-theorem1", "--m", "1", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn theorem2_json_round_trips() {
    let o = run(&["verify-theorem2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.items.len(), 6);
    assert!(r.items.iter().all(|i| i.pass));
    let again: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn theorem2_with_corrupted_b_fails_item_5() {
    let dir = scratch("corrupt-b");
    let o = run(&["catalog", "export", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.join("kirby/B.kirby");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("handle f=-2", "handle f=-4").replace("L 0 0 -2", "L 0 0 -4")).unwrap();
    let o = run(&["--data", dir.to_str().unwrap(), "verify-theorem2", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!r.items[4].pass);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_is_reproducible() {
    let a = run(&["selftest-relations", "--seed", "42", "--cases", "50", "--json"]);
    let b = run(&["selftest-relations", "--seed", "42", "--cases", "50", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_from_constraints_file() {
    let dir = scratch("search");
    let f = dir.join("c.constraints");
    std::fs::write(&f, "holes 2\ncycles 3\nh1 0\nb2 1\nform -3\n").unwrap();
    let o = run(&["search", "--constraints", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holes 2\ncycle {1}\ncycle {2}\ncycle {1,2}\n"));
}

#[test]
fn fmt_canonicalizes() {
    let dir = scratch("fmt");
    let f = dir.join("x.palf");
    std::fs::write(&f, "# c\nholes 3\ncycle { 3, 1 }\n").unwrap();
    let o = run(&["fmt", "palf", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "holes 3\ncycle {1,3}\n");
}

#[test]
fn catalog_validate_passes() {
    let o = run(&["catalog", "validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
