use std::path::PathBuf;
use std::process::{Command, Output};

use nomfix_cli::{cmd_check, cmd_demo, cmd_eval, cmd_translate, cmd_validity, Report, ReportVerdict, Settings};
use serde_json::Value;

fn nomfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nomfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    nomfix(args).status.code().expect("exited normally")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(nomfix(args).stdout).unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = nomfix(&all);
    let r: Report = serde_json::from_slice(&out.stdout).expect("report JSON parses");
    assert_eq!(Some(r.exit_code), out.status.code());
    r
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_examples() {
    assert_eq!(code(&["check", "fix", "⊢ [a]a = [b]b"]), 0);
    assert_eq!(code(&["check", "fresh", "⊢ [a]a ≈ [b]b"]), 0);
    assert_eq!(code(&["check", "fix-gvar", "(a b) fix X, (c d) fix X |- (a c) fix X"]), 1);
    assert_eq!(code(&["check", "fix", "(a b) fix X, (c d) fix X |- (a c) fix X"]), 0);
    assert_eq!(code(&["check", "fresh", "|- a # a"]), 1);
    assert_eq!(code(&["check", "--system", "fresh", "a#X |- a # f(X)"]), 0);
}

#[test]
fn check_detects_the_system() {
    assert_eq!(json(&["check", "a#X |- a # [b]X"]).system, "fresh");
    assert_eq!(json(&["check", "|- (a b) fix [a]a"]).system, "fix");
    let r = json(&["check", "new c1. (a c1) fix X |- (a c1) fix f(X)"]);
    assert_eq!(r.system, "strong-fix");
    assert_eq!(r.verdict, ReportVerdict::Bool(true));
}

#[test]
fn theory_flag_selects_commutativity() {
    assert_eq!(code(&["check", "fresh", "|- +(a, b) ~ +(b, a)"]), 1);
    assert_eq!(code(&["--theory", "c", "check", "fresh", "|- +(a, b) ~ +(b, a)"]), 0);
    assert_eq!(code(&["--theory", "ac", "check", "fresh", "|- a ~ a"]), 2);
}

#[test]
fn input_errors_exit_2_with_location() {
    let out = nomfix(&["check", "fix", "|- [a"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column"), "{err}");
    assert_eq!(code(&["check", "nosuch", "|- a = a"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["demo", "nosuch"]), 2);
    assert_eq!(code(&["suite", "nosuch"]), 2);
    assert_eq!(code(&["eval", "pfinn", "", "a"]), 2);
    assert_eq!(code(&["eval", "pfin", "", "X"]), 0);
    assert_eq!(code(&["verify", "/nonexistent/proof.json"]), 2);
}

#[test]
fn show_proof_prints_the_tree() {
    let out = stdout(&["check", "fix", "|- (a b) fix [a]a", "--show-proof"]);
    assert!(out.contains("(fix_abs)"), "{out}");
    assert!(out.contains("(fix_a)"), "{out}");
    let plain = stdout(&["check", "fix", "|- (a b) fix [a]a"]);
    assert!(!plain.contains("fix_abs"));
}

#[test]
fn translate_examples() {
    assert_eq!(stdout(&["translate", "fresh-to-fix", "a#X"]).trim(), "new c1. (a c1) fix X");
    assert_eq!(stdout(&["translate", "fix-to-fresh", "new c1. (a c1) fix X"]).trim(), "a#X");
    let r = json(&[
        "translate",
        "fix-to-fresh",
        "new c1,c2. (a c1) fix X, (b c2) fix X |- (a b) fix X",
    ]);
    assert_eq!(r.exit_code, 2);
    assert!(r.diagnostics[0].contains("shape error on `(a b) fix X`"), "{:?}", r.diagnostics);
    let back = stdout(&["translate", "fix-to-fresh", "new c1,c2. (a c1) fix X, (b c2) fix X |- X ~ X"]);
    assert_eq!(back.trim(), "a#X, b#X, ~c1#X, ~c2#X |- X ~ X");
}

#[test]
fn eval_and_validity_examples() {
    assert_eq!(stdout(&["eval", "pfin", "X:={a,b}", "f(X, a)"]).trim(), "{a}");
    assert_eq!(stdout(&["eval", "singleton", "", "[a]f(a)"]).trim(), "⋆");
    assert_eq!(stdout(&["eval", "--model", "words", "X := abc", "(a b).X"]).trim(), "bac");
    let r = json(&[
        "validity",
        "pfin",
        "X1:={a1,a2}",
        "(a1 a2) fix X1, (a3 a4) fix X1 |- (a1 a3) fix X1",
    ]);
    assert_eq!(r.verdict, ReportVerdict::Bool(false));
    assert_eq!(r.data.as_ref().unwrap()["values"][0], "{a2, a3}");
}

#[test]
fn demos_reproduce() {
    assert!(stdout(&["demo", "counterexample-pfin"]).contains("derivable=true, valid-in-pfin=false"));
    assert!(stdout(&["demo", "counterexample-c"]).contains("derivable=true, valid-in-ground-alpha-c=false"));
    assert_eq!(code(&["demo", "example-7-1"]), 0);
    let table = stdout(&["demo", "strong-axioms"]);
    for line in table.lines().filter(|l| l.contains("|-")) {
        let name = line.split_whitespace().next().unwrap();
        let strong = ["A", "Hom", "I", "N", "Lproj", "Rproj"].contains(&name);
        assert_eq!(line.split_whitespace().nth(1) == Some("strong"), strong, "{line}");
    }
}

#[test]
fn validate_files() {
    let p = data("ex71.problem");
    assert_eq!(code(&["validate", &p, &data("fresh-pair.cand")]), 0);
    let r = json(&["validate", &p, &data("fresh-triple.cand")]);
    assert_eq!(r.verdict, ReportVerdict::residual());
    assert_eq!(r.exit_code, 0);
    assert_eq!(code(&["validate", &p, &data("fix-pair.cand")]), 0);
    assert_eq!(code(&["validate", &p, &data("wrong.cand")]), 1);
    assert_eq!(code(&["validate", &p, &data("fix-pair.cand"), "--instance", "X := f^C(a, b)"]), 0);
    assert_eq!(code(&["validate", &p, &data("fix-pair.cand"), "--instance", "X := f^C(a, c)"]), 1);
    assert_eq!(code(&["validate", &p, &data("fresh-pair.cand"), "--instance", "X := a"]), 2);
    assert_eq!(code(&["validate", &p, &data("small.sig")]), 2);
}

#[test]
fn signature_file_restricts_symbols() {
    let sig = data("small.sig");
    assert_eq!(code(&["--sig", &sig, "check", "fix", "|- lam([a]a) = lam([b]b)"]), 0);
    assert_eq!(code(&["--sig", &sig, "check", "fix", "|- h(a) = h(a)"]), 2);
}

#[test]
fn verify_round_trips_derivations() {
    let r = json(&["check", "fix", "|- app([a]a, b) = app([b]b, b)"]);
    let tree = r.derivation.clone().expect("derivable judgements carry a tree");
    let dir = std::env::temp_dir().join(format!("nomfix-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, serde_json::to_string(&tree).unwrap()).unwrap();
    assert_eq!(code(&["verify", good.to_str().unwrap()]), 0);
    let whole = dir.join("report.json");
    std::fs::write(&whole, serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(code(&["verify", whole.to_str().unwrap()]), 0);

    let mut broken = tree.clone();
    broken["conclusion"] = Value::String("|- app([a]a, b) = app([b]b, a)".into());
    let bad = dir.join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&broken).unwrap()).unwrap();
    let out = stdout(&["verify", bad.to_str().unwrap()]);
    assert!(out.contains("rule mismatch at root"), "{out}");
    assert_eq!(code(&["verify", bad.to_str().unwrap()]), 1);

    std::fs::write(&bad, "{\"rule\": \"nope\"}").unwrap();
    assert_eq!(code(&["verify", bad.to_str().unwrap()]), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suites_run_from_the_cli() {
    let r = json(&["suite", "strong-support", "--seed", "3"]);
    assert_eq!(r.verdict, ReportVerdict::Bool(true));
    assert_eq!(r.data.unwrap()[0]["seed"], 3);
}

#[test]
fn reports_round_trip_through_json() {
    let s = Settings::default();
    let reports = [
        cmd_check(Some("fix"), "|- [a]a = [b]b", &s),
        cmd_check(None, "|- a # a", &s),
        cmd_check(Some("fix"), "|- [a", &s),
        cmd_translate("fresh-to-fix", "a#X, b#Y", &s),
        cmd_eval("words", "X := ab", "[a]X", &s),
        cmd_validity("ground-alpha-c", "X1 := +(a1, a2)", "(a1 a2) fix X1 |- (a1 a2) fix X1", &s),
        cmd_demo("example-7-1"),
    ];
    for r in reports {
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn exit_codes_follow_verdicts() {
    for (args, want) in [
        (vec!["check", "|- a = a"], 0),
        (vec!["check", "|- a = b"], 1),
        (vec!["validity", "words", "X := ab", "a#X |- a # X"], 0),
        (vec!["validity", "words", "X := ab", "|- a # X"], 1),
        (vec!["validity", "words", "X := b", "a#X |- a # X"], 0),
        (vec!["eval", "pfin", "Y := {a}", "X"], 0),
    ] {
        let r = json(&args);
        let expected = match r.verdict {
            ReportVerdict::Bool(true) => 0,
            ReportVerdict::Bool(false) => 1,
            ReportVerdict::Tag(ref t) if t == "valid-with-residual" => 0,
            _ => 2,
        };
        assert_eq!(r.exit_code, expected, "{args:?}");
        assert_eq!(r.exit_code, want, "{args:?}");
    }
}
