//! The eleven acceptance criteria, one line each. Runs without the libtest
//! harness so the report is always printed; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nomfix::deriv_fix::{check_judgement, FixOptions, VarRuleMode};
use nomfix::deriv_fresh::{check_alpha, FreshBody};
use nomfix::deriv_strong::{check_alpha_strong, check_fix_strong, translate_strong_judgement, StrongBody, StrongError};
use nomfix::derivation::EqTheory;
use nomfix::permgroups::GenSet;
use nomfix::semantics::{
    classify_axioms, context_valid, interpret, judgement_valid, standard_axioms, strong_support_check, GroundMod,
    PFin, SigmaAlgebra, Valuation, DEFAULT_UNIVERSE_BOUND,
};
use nomfix::suites::{self, SuiteReport};
use nomfix::syntax::{parse_fix_context, parse_fix_judgement, parse_fresh_judgement, parse_strong_judgement, parse_subst};
use nomfix::terms::{parse_term, Atom, Perm, Signature, Subst};
use nomfix::unify_validate::{instantiate_and_check, parse_candidate, parse_problem, validate, Outcome};

const SEED: u64 = 2024;
const COUNTEREXAMPLE: &str = "(a1 a2) fix X1, (a3 a4) fix X1 |- (a1 a3) fix X1";

type Verdict = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {:.2}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn fix_derivable(text: &str, mode: VarRuleMode) -> bool {
    let sig = Signature::builtin();
    let j = parse_fix_judgement(text, &sig).expect("parses");
    check_judgement(&j, &EqTheory::Core, &FixOptions::mode(mode)).expect("bounded").derivable
}

fn atoms(names: &[&str]) -> BTreeSet<Atom> {
    names.iter().map(|n| Atom::user(n)).collect()
}

fn suites_clean(reports: &[SuiteReport]) -> Result<String, String> {
    let mut parts = Vec::new();
    for r in reports {
        ensure(
            r.passed(),
            format!("{}: {} violations, e.g. {:?}", r.name, r.violations, r.examples.first()),
        )?;
        parts.push(format!("{} {} cases/{} checks", r.name, r.cases, r.checks));
    }
    Ok(parts.join("; "))
}

fn c1_alpha_equivalence() -> Verdict {
    let sig = Signature::builtin();
    let start = Instant::now();
    let fix = fix_derivable("⊢ [a]a = [b]b", VarRuleMode::SubsetDom);
    let fj = parse_fresh_judgement("⊢ [a]a ≈ [b]b", &sig).map_err(|e| e.to_string())?;
    let FreshBody::Alpha(s, t) = &fj.body else {
        return Err("expected an α-equality".into());
    };
    let fresh = check_alpha(&fj.context, s, t, &EqTheory::Core).derivable;
    ensure(fix, "fix system refutes [a]a = [b]b")?;
    ensure(fresh, "freshness system refutes [a]a ≈ [b]b")?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("both systems derive [a]a = [b]b".into())
}

fn c2_pfin_counterexample() -> Verdict {
    let sig = Signature::builtin();
    let start = Instant::now();
    ensure(fix_derivable(COUNTEREXAMPLE, VarRuleMode::SubsetDom), "not derivable in subset-dom mode")?;
    let j = parse_fix_judgement(COUNTEREXAMPLE, &sig).unwrap();
    let val = Valuation::new().with("X1", atoms(&["a1", "a2"]));
    ensure(context_valid(&PFin, &val, &j.context).unwrap(), "context not valid in pfin")?;
    let moved = interpret(&PFin, &val, &parse_term("(a1 a3).X1", &sig).unwrap()).unwrap();
    ensure(
        moved == atoms(&["a3", "a2"]),
        format!("⟦(a1 a3)·X1⟧ = {}", PFin.show(&moved)),
    )?;
    ensure(!judgement_valid(&PFin, &val, &j).unwrap(), "judgement valid in pfin")?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("derivable, ⟦(a1 a3)·X1⟧ = {}, invalid in pfin", PFin.show(&moved)))
}

fn c3_c_counterexample() -> Verdict {
    let sig = Signature::builtin();
    let start = Instant::now();
    let m = GroundMod::alpha_c(&sig);
    ensure(fix_derivable(COUNTEREXAMPLE, VarRuleMode::SubsetDom), "not derivable in subset-dom mode")?;
    let j = parse_fix_judgement(COUNTEREXAMPLE, &sig).unwrap();
    let x = m.class_of(&parse_term("+(a1, a2)", &sig).unwrap()).unwrap();
    let val = Valuation::new().with("X1", x.clone());
    ensure(context_valid(&m, &val, &j.context).unwrap(), "context not valid in ground-alpha-c")?;
    ensure(!judgement_valid(&m, &val, &j).unwrap(), "judgement valid in ground-alpha-c")?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("derivable, invalid in ground-alpha-c at X1 = {}", m.show(&x)))
}

fn c4_group_generated() -> Verdict {
    let start = Instant::now();
    ensure(
        !fix_derivable(COUNTEREXAMPLE, VarRuleMode::GroupGenerated),
        "counter-example derivable in group-generated mode",
    )?;
    let group = GenSet::new(vec![
        Perm::swap(Atom::user("a1"), Atom::user("a2")),
        Perm::swap(Atom::user("a3"), Atom::user("a4")),
    ]);
    let order = group.elements().map_err(|e| e.to_string())?.len();
    ensure(order == 4, format!("⟨(a1 a2),(a3 a4)⟩ has {order} elements"))?;
    let binder = "(b d') fix X |- (a b).[a]X = [a]X";
    ensure(fix_derivable(binder, VarRuleMode::SubsetDom), "binder judgement not derivable in subset-dom mode")?;
    ensure(
        !fix_derivable(binder, VarRuleMode::GroupGenerated),
        "binder judgement derivable in group-generated mode",
    )?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("both judgements rejected by the group-generated rule; group order 4".into())
}

fn c5_soundness() -> Verdict {
    let start = Instant::now();
    let reports = suites::soundness(SEED, 1000, 5);
    let summary = suites_clean(&reports)?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(summary)
}

fn c6_strong_correctness() -> Verdict {
    let start = Instant::now();
    let summary = suites_clean(&[suites::strong_correctness(SEED, 1000)])?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(summary)
}

fn c7_translations() -> Verdict {
    let sig = Signature::builtin();
    let start = Instant::now();
    let summary = suites_clean(&[suites::translations(SEED, 500)])?;
    within(start.elapsed(), Duration::from_secs(30))?;
    let j = parse_strong_judgement("new c1,c2. (a c1) fix X, (b c2) fix X |- (a b) fix X", &sig).unwrap();
    ensure(
        matches!(translate_strong_judgement(&j), Err(StrongError::Shape { .. })),
        "no shape error on (a b) fix X",
    )?;
    let StrongBody::Fix(pi, t) = &j.body else { unreachable!() };
    let mut alpha = j.clone();
    alpha.body = StrongBody::Alpha(t.act(pi), t.clone());
    ensure(
        check_alpha_strong(&alpha, &EqTheory::Core).map_err(|e| e.to_string())?.derivable,
        "(a b)·X ≈ X not derivable",
    )?;
    ensure(
        check_fix_strong(&j).map_err(|e| e.to_string())?.derivable,
        "(a b) fix X not derivable",
    )?;
    Ok(format!("{summary}; shape error on (a b) fix X, ≈ form derivable"))
}

fn c8_axiom_table() -> Verdict {
    let strong = ["A", "Hom", "I", "N", "Lproj", "Rproj"];
    let not_strong = ["C", "D", "ATOM", "PermBinder"];
    let table = classify_axioms(&standard_axioms());
    ensure(table.len() == strong.len() + not_strong.len(), "unexpected axiom count")?;
    for (name, v) in &table {
        let want = strong.contains(&name.as_str());
        ensure(
            want || not_strong.contains(&name.as_str()),
            format!("unexpected axiom {name}"),
        )?;
        ensure(v.strong == want, format!("{name}: classified strong={}", v.strong))?;
    }
    Ok(format!("{} strong, {} not strong", strong.len(), not_strong.len()))
}

fn c9_strong_support() -> Verdict {
    let sig = Signature::builtin();
    let summary = suites_clean(&[suites::strong_support(SEED, 200)])?;
    let m = GroundMod::alpha_c(&sig);
    let x = m.class_of(&parse_term("+(a, b)", &sig).unwrap()).unwrap();
    let check =
        strong_support_check(&m, &x, &atoms(&["a", "b"]), DEFAULT_UNIVERSE_BOUND).map_err(|e| e.to_string())?;
    ensure(!check.strong, "canon(a+b) passes in ground-alpha-c")?;
    let witness = Perm::swap(Atom::user("a"), Atom::user("b"));
    ensure(
        check.witness.as_ref() == Some(&witness),
        format!("witness {:?}", check.witness.map(|p| p.to_string())),
    )?;
    Ok(format!("{summary}; canon(a+b) fails with witness {witness}"))
}

fn c10_validator() -> Verdict {
    let sig = Signature::builtin();
    let problem = parse_problem("f^C(X, Y) =?= f^C(c, (a b).X) [C]", &sig).map_err(|e| e.to_string())?;
    let mut outcomes = Vec::new();
    for (text, want) in [
        ("format: fresh-pair\nsubst: X := c; Y := c", Outcome::Valid),
        ("format: fresh-triple\nsubst: Y := c\nresidual: X = (a b).X", Outcome::ValidWithResidual),
        ("format: fix-pair\ncontext: (a b) fix X\nsubst: Y := c", Outcome::Valid),
    ] {
        let cand = parse_candidate(text, &sig).map_err(|e| e.to_string())?;
        let got = validate(&problem, &cand).map_err(|e| e.to_string())?.outcome;
        ensure(got == want, format!("{}: {got}, expected {want}", cand.format_name()))?;
        outcomes.push(got.to_string());
    }
    let upsilon = parse_fix_context("(a b) fix X", &sig).unwrap();
    let sigma = parse_subst("Y := c", &sig).unwrap();
    for g in ["f^C(a, b)", "f^C(f^C(a, b), f^C(a, b))"] {
        let delta = Subst::new().with("X", parse_term(g, &sig).unwrap());
        let got = instantiate_and_check(&problem, &upsilon, &sigma, &delta)
            .map_err(|e| e.to_string())?
            .outcome;
        ensure(got == Outcome::Valid, format!("instance X := {g}: {got}"))?;
    }
    Ok(format!("{}; both instances accepted", outcomes.join(", ")))
}

fn c11_model_laws() -> Verdict {
    let start = Instant::now();
    let summary = suites_clean(&suites::model_laws(SEED, 1000))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(summary)
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("alpha-equivalence of [a]a and [b]b in both systems", c1_alpha_equivalence),
        ("pfin counter-example to the subset-dom rule", c2_pfin_counterexample),
        ("ground-alpha-c counter-example to the subset-dom rule", c3_c_counterexample),
        ("group-generated rule rejects both unsound judgements", c4_group_generated),
        ("soundness suites", c5_soundness),
        ("strong fixed-point/alpha correctness", c6_strong_correctness),
        ("translations between freshness and strong judgements", c7_translations),
        ("strong-axiom classification table", c8_axiom_table),
        ("strong support in ground models", c9_strong_support),
        ("unification candidate validator", c10_validator),
        ("model law suite", c11_model_laws),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("{label} PASS ({secs:.2}s) {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{label} FAIL ({secs:.2}s) {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
