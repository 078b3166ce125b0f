use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lgkappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgkappa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lgkappa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s1_files() -> (PathBuf, PathBuf, PathBuf) {
    (
        scratch("la.json", r#"{"alphabet": ["a"], "words": ["a"]}"#),
        scratch(
            "c2.json",
            r#"{"elements": ["e","g"], "identity": "e", "table": [["e","g"],["g","e"]]}"#,
        ),
        scratch("f.json", r#"[{"word": "aa", "g": "g"}]"#),
    )
}

#[test]
fn canon_worked_example() {
    let o = lgkappa(&["canon", "(bababa)^w b^(w-3) b (bb)^(w+1)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "b(ab)^w b^(w-1)");

    let again = lgkappa(&["canon", "--json", stdout(&o).trim()]);
    let v: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(v["canonical"], "b(ab)^w b^(w-1)");
    assert_eq!(v["trace"].as_array().unwrap().len(), 0);
}

#[test]
fn sc_reproduces_the_l1_sequence() {
    let lang = scratch(
        "l1.json",
        r#"{"alphabet": ["a","b"], "words": ["aaa","aab","bb"]}"#,
    );
    let o = lgkappa(&["sc", "--lang", lang.to_str().unwrap(), "aaaaabaa"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "(aaa, aaaa, aaa, aaaa, aaa, aaab, aab, ba, aa)"
    );
    let b = lgkappa(&["boundary", "--lang", lang.to_str().unwrap()]);
    assert_eq!(stdout(&b).trim(), "ba abb bbb aaaa aaab");
}

#[test]
fn decide_writes_a_replayable_certificate() {
    let cert = std::env::temp_dir().join(format!("lgkappa-cert-{}.json", std::process::id()));
    let o = lgkappa(&[
        "decide",
        "a^(w+1)",
        "a^(w+2)",
        "--variety",
        "lg",
        "--certificate",
        cert.to_str().unwrap(),
        "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["equal"], false);
    assert_eq!(v["params"]["k"], 8);
    assert_eq!(v["params"]["kprime"], 12);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(written, v);
    let r = lgkappa(&["replay", cert.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let t = lgkappa(&["decide", "ab", "ab"]);
    assert!(stdout(&t).contains("equal: true"));
}

#[test]
fn bad_input_exits_nonzero() {
    let o = lgkappa(&["canon", "a^(w"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
    let r = lgkappa(&["decide", "(a^w b)^w", "a"]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("rank 2"));
    let l = scratch("bad.json", r#"{"alphabet": ["a"], "words": ["ab"]}"#);
    let s = lgkappa(&["sc", "--lang", l.to_str().unwrap(), "a"]);
    assert!(!s.status.success());
}

#[test]
fn build_check_and_present_s1() {
    let (l, g, f) = s1_files();
    let files = [
        "--lang",
        l.to_str().unwrap(),
        "--group",
        g.to_str().unwrap(),
        "--f",
        f.to_str().unwrap(),
    ];
    let b = lgkappa(&[&["build", "--json"][..], &files].concat());
    let v: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(v["size"], 9);

    let t = lgkappa(&[&["build", "--table", "json"][..], &files].concat());
    let table = scratch("s1-table.json", &stdout(&t));
    let c = lgkappa(&[
        "check-local-group",
        "--json",
        "--table",
        table.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(v["report"]["local_group"], true);
    assert_eq!(v["report"]["minimal_ideal"], 8);

    let p = lgkappa(&[&["presentation", "--verify"][..], &files].concat());
    assert!(p.status.success());
    let out = stdout(&p);
    assert!(out.contains("aa = a[g]a"));
    assert!(out.contains("relations hold: true"));
}

#[test]
fn eval_in_builtins() {
    let o = lgkappa(&["eval", "a^w", "--builtin", "S1"]);
    assert_eq!(stdout(&o).trim(), "(a, g, a)");
    let o = lgkappa(&[
        "eval",
        "ab^(w+1)",
        "--builtin",
        "C6",
        "--assign",
        "a=g",
        "--assign",
        "b=g^2",
    ]);
    assert_eq!(stdout(&o).trim(), "g^3");
    let o = lgkappa(&["check-local-group", "--builtin", "T3"]);
    assert!(stdout(&o).contains("local group: false"));
    let o = lgkappa(&["eval", "ab", "--builtin", "C6", "--assign", "a=g"]);
    assert!(!o.status.success());
}

#[test]
fn selftest_passes() {
    let o = lgkappa(&["selftest", "--seed", "7", "--count", "8"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failures"));
}
