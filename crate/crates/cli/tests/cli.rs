use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use catreach_core::witnesses::{build_certificate, build_family, Family, Params};
use tempfile::TempDir;

fn catreach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catreach")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Writes both operands of a family into one file and returns `file:A`, `file:B`.
fn family_files(dir: &Path, f: Family, m: usize, n: usize) -> (String, String) {
    let (a, b) = build_family(f, &Params::new(m, n)).unwrap();
    let path = write(dir, "pair.dfa", &format!("{}\n{}", a.to_text("A"), b.to_text("B")));
    (format!("{path}:A"), format!("{path}:B"))
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn verify_family_maslov_passes() {
    let o = catreach(&["verify-family", "--name", "reg-mas70", "--m", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("bfs\t20") && out.contains("formula\t20") && out.contains("match\tyes"), "{out}");
}

#[test]
fn off_alphabet_certificate_fails_with_diagnostic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::RegBrz16, 3, 3);
    let cert = write(dir.path(), "c.cert", "cert\nfocus 1'\nbase {}\ntarget {1}\nentry 1: c\n");
    let o = catreach(&["check-cert", "--A", &a, "--B", &b, "--cert", &cert]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("outside the shared alphabet"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(catreach(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(catreach(&["verify-family", "--name", "nope", "--m", "3", "--n", "3"]).status.code(), Some(2));
    assert_eq!(catreach(&["sweep", "--m", "6..3", "--n", "3", "--all"]).status.code(), Some(2));
    let o = catreach(&["analyze", "--A", "/no/such/file", "--B", "/no/such/file"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.dfa", "dfa X\nstates 2\nalphabet a\ninitial 1\nfinal 2\na: (1,2\n");
    let o = catreach(&["analyze", "--A", &bad, "--B", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));
}

#[test]
fn constraint_violation_is_a_usage_error() {
    let o = catreach(&["verify-family", "--name", "reg-brsi17", "--m", "4", "--n", "4", "--j", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gcd"));
}

#[test]
fn enumerate_agrees_for_maslov_and_brz16() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::RegMas70, 3, 3);
    let o = catreach(&["enumerate", "--A", &a, "--B", &b, "--k", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("equal\tyes"));
    let (a, b) = family_files(dir.path(), Family::RegBrz16, 3, 3);
    let o = catreach(&["enumerate", "--A", &a, "--B", &b, "--k", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["equal"], true);
    assert_eq!(v["pair_dfa"], v["direct"]);
}

#[test]
fn enumerate_one_state_loops() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "one.dfa", "dfa L\nstates 1\nalphabet a\ninitial 1\nfinal 1\na: id\n");
    let o = catreach(&["enumerate", "--A", &f, "--B", &f, "--k", "2", "--json"]);
    let v = json(&o);
    for key in ["pair_dfa", "nfa", "direct"] {
        assert_eq!(v[key], serde_json::json!(["ε", "a", "aa"]), "{key}");
    }
}

#[test]
fn enumerate_guards_length() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::RegMas70, 3, 3);
    let o = catreach(&["enumerate", "--A", &a, "--B", &b, "--k", "13"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_round_trip() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::SuffixFreeHaSa09, 4, 4);
    let cert = build_certificate(Family::SuffixFreeHaSa09, &Params::new(4, 4)).unwrap();
    let cert = write(dir.path(), "c.cert", &cert.to_text());
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify-family", "--name", "reg-mas70", "--m", "4", "--n", "3", "--json"],
        vec!["analyze", "--A", &a, "--B", &b, "--json"],
        vec!["build-concat", "--A", &a, "--B", &b, "--json"],
        vec!["check-cert", "--A", &a, "--B", &b, "--cert", &cert, "--order-oracle", "--synthesize", "{1,2,4}", "--json"],
        vec!["decide-complete", "--A", &a, "--B", &b, "--cert", &cert, "--json"],
        vec!["sweep", "--m", "3", "--n", "3..4", "--name", "reg-mas70", "--json"],
    ];
    for args in runs {
        let o = catreach(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let v = json(&o);
        let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
    // typed round trip through the library report type
    let o = catreach(&["verify-family", "--name", "reg-mas70", "--m", "4", "--n", "3", "--json"]);
    let report: catreach_core::witnesses::FamilyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), json(&o));
    assert!(report.passed());
}

#[test]
fn check_cert_synthesizes_a_subset() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::RegMas70, 3, 3);
    let cert = build_certificate(Family::RegMas70, &Params::new(3, 3)).unwrap();
    let cert = write(dir.path(), "c.cert", &cert.to_text());
    let o = catreach(&["check-cert", "--A", &a, "--B", &b, "--cert", &cert, "--synthesize", "{1,3}", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["synthesis"]["reached"], true);
    let o = catreach(&["synthesize", "--A", &a, "--B", &b, "--cert", &cert, "--set", "{2,3}"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("(1',{2,3})\tyes"), "{}", stdout(&o));
}

#[test]
fn decide_complete_reports_a_cycle() {
    let dir = TempDir::new().unwrap();
    // b and c are constants, so neither entry's state has a preimage under the other
    let left = "dfa L\nstates 1\nalphabet b c\ninitial 1\nfinal 1\nb: id\nc: id\n";
    let right = "dfa R\nstates 3\nalphabet b c\ninitial 1\nfinal 3\nb: [all -> 2]\nc: [all -> 3]\n";
    let l = write(dir.path(), "l.dfa", left);
    let r = write(dir.path(), "r.dfa", right);
    let cert = write(dir.path(), "c.cert", "cert\nfocus 1'\nbase {1}\ntarget {1,2,3}\nentry 1: ε\nentry 2: b\nentry 3: c\n");
    let o = catreach(&["decide-complete", "--A", &l, "--B", &r, "--cert", &cert, "--order-oracle"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{out}{}", stderr(&o));
    assert!(out.contains("complete\tno") && out.contains("oracle-agrees\tyes"), "{out}");
    assert!(out.contains("cycle\t"), "{out}");
}

#[test]
fn build_concat_emits_dot() {
    let dir = TempDir::new().unwrap();
    let (a, b) = family_files(dir.path(), Family::RegMas70, 3, 3);
    let o = catreach(&["build-concat", "--A", &a, "--B", &b, "--emit", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("shape=").count(), 20 + 1);
}

#[test]
fn sweep_prints_the_documented_columns() {
    let o = catreach(&["sweep", "--m", "3..4", "--n", "3", "--name", "reg-mas70", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("family\tm\tn\tbfs\tformula\tmatch\tclasses\tcert-via"));
    assert_eq!(lines.count(), 2);
}
