use std::collections::BTreeSet;

use nomfix::deriv_fix::{
    check_judgement, verify_proof, FixBody, FixJudgement, FixOptions, ProofTree, Rule, Theory, VarRuleMode,
};
use nomfix::deriv_fresh::{check_alpha, FreshContext};
use nomfix::derivation::EqTheory;
use nomfix::gen::{self, GenConfig, Sample};
use nomfix::permgroups::{ds, GenSet};
use nomfix::semantics::{
    canon_c, interpret, strong_support_check, GroundMod, PFin, SigmaAlgebra, Valuation, Words,
    DEFAULT_UNIVERSE_BOUND,
};
use nomfix::syntax::{parse_fix_context, parse_fix_judgement, parse_subst};
use nomfix::terms::{parse_term, Atom, Perm, Signature, Subst, Symbol, Term, Var};
use nomfix::unify_validate::{ds_rule_on_instance, instantiate_and_check, parse_problem, Outcome};
use proptest::prelude::*;
use rand::Rng;

fn cfg() -> GenConfig {
    GenConfig::default()
}

fn pool() -> Vec<Atom> {
    cfg().atom_pool()
}

fn perm_from(seed: u64, swaps: usize) -> Perm {
    gen::perm(&mut gen::rng(seed), &pool(), swaps)
}

/// Applies a C-step at every commutative node with probability one half.
fn c_shuffle(sig: &Signature, t: &Term, r: &mut impl Rng) -> Term {
    match t {
        Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(c_shuffle(sig, body, r))),
        Term::App(f, args) => {
            let mut args: Vec<Term> = args.iter().map(|u| c_shuffle(sig, u, r)).collect();
            if sig.is_commutative(f) && args.len() == 2 && r.gen_bool(0.5) {
                args.swap(0, 1);
            }
            Term::App(f.clone(), args)
        }
        _ => t.clone(),
    }
}

/// Renames every binder to a fresh pool atom not free in the body.
fn alpha_rename(t: &Term, r: &mut impl Rng) -> Term {
    match t {
        Term::Abs(a, body) => {
            let body = alpha_rename(body, r);
            let free = body.free_names().expect("ground");
            let choices: Vec<Atom> = pool()
                .into_iter()
                .chain((1..4).map(|i| Atom::user(&format!("z{i}"))))
                .filter(|b| b == a || !free.contains(b))
                .collect();
            let b = gen::pick(r, &choices).clone();
            Term::Abs(b.clone(), Box::new(body.act(&Perm::swap(a.clone(), b))))
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|u| alpha_rename(u, r)).collect()),
        _ => t.clone(),
    }
}

fn close_valuation<M: Sample>(m: &M, t: &Term, seed: u64) -> Valuation<M::Elem> {
    let mut r = gen::rng(seed);
    t.vars().into_iter().map(|x| (x, m.sample(&mut r, &cfg()))).collect()
}

fn interpretation_is_equivariant<M: Sample>(m: &M, t: &Term, pi: &Perm, seed: u64) -> Result<(), TestCaseError> {
    let val = close_valuation(m, t, seed);
    let lhs = interpret(m, &val, &t.act(pi)).unwrap();
    let rhs = m.act(pi, &interpret(m, &val, t).unwrap());
    prop_assert_eq!(m.show(&lhs), m.show(&rhs), "{} under {}", t, pi);
    Ok(())
}

/// A derivable judgement with one extra constraint `π fix X`, `dom(π)`
/// inside the atoms already constrained on `X`: the narrow judgement and an
/// `fr` tree proving it from the wider one.
fn fr_instance(seed: u64, mode: VarRuleMode) -> Option<(FixJudgement, ProofTree)> {
    let mut r = gen::rng(seed);
    let j = gen::fix_judgement(&mut r, &cfg());
    if !matches!(j.body, FixBody::Eq(..)) {
        return None;
    }
    let vars: Vec<_> = j.context.vars().into_iter().collect();
    if vars.is_empty() {
        return None;
    }
    let x = gen::pick(&mut r, &vars).clone();
    let dom: Vec<Atom> = j.context.dom_of(&x).into_iter().collect();
    let mut pi = Perm::id();
    for _ in 0..r.gen_range(1..=2) {
        pi = pi.compose(&Perm::swap(gen::pick(&mut r, &dom).clone(), gen::pick(&mut r, &dom).clone()));
    }
    let mut wide = j.context.clone();
    wide.insert(pi.clone(), x.clone());
    let premise = FixJudgement { context: wide, body: j.body.clone() };
    let inner = check_judgement(&premise, &EqTheory::Core, &FixOptions::mode(mode)).unwrap().derivation?;
    let tree = ProofTree::node(Rule::Fr { pi, var: x }, j.clone(), vec![inner]);
    Some((j, tree))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn action_composes(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let t = gen::term(&mut gen::rng(seed), &cfg(), 4);
        let (p, q) = (perm_from(s1, 3), perm_from(s2, 3));
        prop_assert_eq!(t.act(&q).act(&p), t.act(&p.compose(&q)));
        prop_assert_eq!(t.act(&p).act(&p.inverse()), t.clone());
        prop_assert_eq!(t.act(&Perm::id()), t);
    }

    #[test]
    fn conjugation_is_a_homomorphism(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (p, q, rho) = (perm_from(s1, 3), perm_from(s2, 3), perm_from(s3, 3));
        prop_assert_eq!(p.compose(&q).conjugate(&rho), p.conjugate(&rho).compose(&q.conjugate(&rho)));
        let moved: BTreeSet<Atom> = p.domain().iter().map(|a| rho.apply(a)).collect();
        prop_assert_eq!(p.conjugate(&rho).domain(), moved);
        for a in pool() {
            prop_assert_eq!(p.conjugate(&rho).apply(&rho.apply(&a)), rho.apply(&p.apply(&a)));
        }
    }

    #[test]
    fn printed_terms_parse_back(seed in any::<u64>()) {
        let sig = Signature::builtin();
        let t = gen::term(&mut gen::rng(seed), &cfg(), 4);
        prop_assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
    }

    #[test]
    fn action_commutes_with_substitution(seed in any::<u64>(), s1 in any::<u64>()) {
        let mut r = gen::rng(seed);
        let t = gen::term(&mut r, &cfg(), 3);
        let sigma: Subst = cfg()
            .var_pool()
            .into_iter()
            .map(|x| (x, gen::term(&mut r, &cfg(), 2)))
            .fold(Subst::new(), |mut s, (x, u)| { s.insert(x, u); s });
        let pi = perm_from(s1, 3);
        prop_assert_eq!(t.subst(&sigma).act(&pi), t.act(&pi).subst(&sigma));
        prop_assert_eq!(t.subst(&sigma.act(&pi)), {
            let pointwise: Subst = sigma.iter().map(|(x, u)| (x.clone(), u.act(&pi))).fold(Subst::new(), |mut s, (x, u)| { s.insert(x, u); s });
            t.subst(&pointwise)
        });
    }

    #[test]
    fn generated_groups_are_closed(s1 in any::<u64>(), s2 in any::<u64>()) {
        let gens = vec![perm_from(s1, 2), perm_from(s2, 2)];
        let g = GenSet::new(gens.clone());
        let elems = g.elements().unwrap();
        let set: BTreeSet<Perm> = elems.iter().cloned().collect();
        prop_assert!(set.contains(&Perm::id()));
        for p in &gens {
            prop_assert!(set.contains(p));
        }
        for p in &elems {
            prop_assert!(set.contains(&p.inverse()));
            for q in &elems {
                prop_assert!(set.contains(&p.compose(q)));
            }
        }
        prop_assert_eq!(g.order().unwrap() as usize, set.len());
        let p = perm_from(s1 ^ s2, 2);
        prop_assert_eq!(g.contains(&p).unwrap(), set.contains(&p));
    }

    #[test]
    fn disagreement_sets(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (p, q) = (perm_from(s1, 3), perm_from(s2, 3));
        let d = ds(&p, &q);
        prop_assert_eq!(&d, &ds(&q, &p));
        prop_assert!(ds(&p, &p).is_empty());
        prop_assert_eq!(d, q.inverse().compose(&p).domain());
    }

    #[test]
    fn ds_rule_holds_for_ground_terms_modulo_alpha(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut r = gen::rng(seed);
        let free = &pool()[..3];
        let g = gen::ground_term(&mut r, &cfg(), 4, free);
        let (p, q) = (perm_from(s1, 2), perm_from(s2, 2));
        prop_assert_ne!(ds_rule_on_instance(&p, &q, &g, &EqTheory::Core), Some(false));
    }

    #[test]
    fn interpretation_commutes_with_the_action(seed in any::<u64>(), s1 in any::<u64>()) {
        let t = gen::term(&mut gen::rng(seed), &cfg(), 4);
        let pi = perm_from(s1, 3);
        interpretation_is_equivariant(&Words, &t, &pi, seed)?;
        interpretation_is_equivariant(&PFin, &t, &pi, seed)?;
        interpretation_is_equivariant(&GroundMod::alpha(), &t, &pi, seed)?;
        interpretation_is_equivariant(&GroundMod::alpha_c(&Signature::builtin()), &t, &pi, seed)?;
    }

    #[test]
    fn derivability_is_equivariant(seed in any::<u64>(), s1 in any::<u64>()) {
        let j = gen::fix_judgement(&mut gen::rng(seed), &cfg());
        let pi = perm_from(s1, 3);
        let f = |a: &Atom| pi.apply(a);
        let mut renamed = j.clone();
        renamed.context = j.context.iter().map(|(p, x)| (p.rename_atoms(&f), x.clone())).collect();
        renamed.body = match &j.body {
            FixBody::Fix(p, t) => FixBody::Fix(p.rename_atoms(&f), t.rename_atoms(&f)),
            FixBody::Eq(s, t) => FixBody::Eq(s.rename_atoms(&f), t.rename_atoms(&f)),
        };
        for mode in [VarRuleMode::SubsetDom, VarRuleMode::GroupGenerated] {
            let opts = FixOptions::mode(mode);
            let a = check_judgement(&j, &EqTheory::Core, &opts).unwrap().derivable;
            let b = check_judgement(&renamed, &EqTheory::Core, &opts).unwrap().derivable;
            prop_assert_eq!(a, b, "{} vs {}", j, renamed);
        }
    }

    #[test]
    fn canonical_forms_decide_alpha_c(seed in any::<u64>(), related in any::<bool>()) {
        let sig = Signature::builtin();
        let mut r = gen::rng(seed);
        let free = &pool()[..3];
        let s = gen::ground_term(&mut r, &cfg(), 4, free);
        let t = if related {
            alpha_rename(&c_shuffle(&sig, &s, &mut r), &mut r)
        } else {
            gen::ground_term(&mut r, &cfg(), 4, free)
        };
        let theory = EqTheory::c_of(&sig);
        let oracle = check_alpha(&FreshContext::new(), &s, &t, &theory).derivable;
        prop_assert_eq!(canon_c(&sig, &s) == canon_c(&sig, &t), oracle, "{} vs {}", s, t);
        if related {
            prop_assert!(oracle, "{} vs {}", s, t);
        }
    }

    #[test]
    fn associativity_model_has_strong_support(seed in any::<u64>()) {
        let mut c = GenConfig { atoms: 4, ..cfg() };
        c.symbols.push((Symbol::new("f"), 2));
        let m = GroundMod::alpha_a("f");
        let x = m.sample(&mut gen::rng(seed), &c);
        let universe: BTreeSet<Atom> = c.atom_pool().into_iter().collect();
        let check = strong_support_check(&m, &x, &universe, DEFAULT_UNIVERSE_BOUND).unwrap();
        prop_assert!(check.strong, "{} fails with {:?}", m.show(&x), check.witness.map(|p| p.to_string()));
    }

    #[test]
    fn fr_is_admissible_under_the_subset_rule(seed in any::<u64>()) {
        let mode = VarRuleMode::SubsetDom;
        if let Some((j, tree)) = fr_instance(seed, mode) {
            verify_proof(&tree, &Theory::core(Signature::builtin()), mode).unwrap();
            let narrow = check_judgement(&j, &EqTheory::Core, &FixOptions::mode(mode)).unwrap();
            prop_assert!(narrow.derivable, "{}", j);
        }
    }

    #[test]
    fn fixed_instances_of_the_fix_pair_are_solutions(seed in any::<u64>()) {
        let sig = Signature::builtin();
        let problem = parse_problem("f^C(X, Y) =?= f^C(c, (a b).X) [C]", &sig).unwrap();
        let upsilon = parse_fix_context("(a b) fix X", &sig).unwrap();
        let sigma = parse_subst("Y := c", &sig).unwrap();
        let m = GroundMod::alpha_c(&sig);
        let c = GenConfig {
            symbols: vec![(Symbol::new("f^C"), 2), (Symbol::new("h"), 1), (Symbol::new("0"), 0)],
            ..cfg()
        };
        let swap = Perm::swap(Atom::user("a"), Atom::user("b"));
        let mut r = gen::rng(seed);
        let mut g = m.sample_fixed(&mut r, &c, std::slice::from_ref(&swap));
        if r.gen_bool(0.5) {
            g = Term::app("f^C", vec![Term::atom("a"), Term::atom("b")]);
        }
        prop_assert_eq!(m.act(&swap, &g), g.clone());
        let delta = Subst::new().with("X", g.clone());
        let report = instantiate_and_check(&problem, &upsilon, &sigma, &delta).unwrap();
        prop_assert_eq!(report.outcome, Outcome::Valid, "X := {}", g);
    }
}

#[test]
fn ds_rule_fails_modulo_commutativity() {
    let sig = Signature::builtin();
    let g = parse_term("+(a, b)", &sig).unwrap();
    let swap = Perm::swap(Atom::user("a"), Atom::user("b"));
    assert_eq!(ds_rule_on_instance(&swap, &Perm::id(), &g, &EqTheory::c_of(&sig)), Some(false));
    assert_eq!(ds_rule_on_instance(&swap, &Perm::id(), &g, &EqTheory::Core), None);
}

#[test]
fn fr_is_not_admissible_under_the_group_rule() {
    let sig = Signature::builtin();
    let opts = FixOptions::mode(VarRuleMode::GroupGenerated);
    let narrow = parse_fix_judgement(
        concat!(
            "(a1 a5) fix X, (a2 a4)(a1 a6) fix X, (a3 a6) fix X |- ",
            "[a6]g(lam((a1 a4)(a4 a3)(a1 a3).X), [a2][a6]a5) = [a6]g(lam((a1 a3).X), [a2][a6]a5)"
        ),
        &sig,
    )
    .unwrap();
    let (pi, x) = (Perm::swap(Atom::user("a1"), Atom::user("a4")), Var::new("X"));
    assert!(pi.domain().is_subset(&narrow.context.dom_of(&x)));
    let mut premise = narrow.clone();
    premise.context.insert(pi, x);
    assert!(check_judgement(&premise, &EqTheory::Core, &opts).unwrap().derivable);
    assert!(!check_judgement(&narrow, &EqTheory::Core, &opts).unwrap().derivable);
}
