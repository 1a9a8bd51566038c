//! Randomised property suites over the engines and models.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::deriv_fix::{check_judgement, FixJudgement, FixOptions, VarRuleMode};
use crate::deriv_fresh::{check_alpha, check_fresh, FreshBody, FreshJudgement};
use crate::deriv_strong::{
    check_alpha_strong, check_fix_strong, check_strong, translate_fresh_judgement, translate_strong_judgement,
    NuJudgement, StrongBody,
};
use crate::derivation::EqTheory;
use crate::gen::{self, GenConfig, Sample};
use crate::semantics::{
    context_valid, fix_sem, judgement_valid, strong_support_check, GroundMod, PFin, Singleton,
    Valuation, Words, DEFAULT_UNIVERSE_BOUND,
};
use crate::terms::{Atom, Perm, Signature, Symbol, Var};

/// Keep at most this many violation descriptions.
const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub violations: usize,
    pub examples: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> SuiteReport {
        SuiteReport {
            name: name.into(),
            seed,
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }
}

pub const SUITE_NAMES: [&str; 6] = ["soundness", "strong-correctness", "translations", "strong-support", "model-laws", "all"];

/// Runs a suite by name; `all` runs every suite.
pub fn run_named(name: &str, seed: u64) -> Option<Vec<SuiteReport>> {
    Some(match name {
        "soundness" => soundness(seed, 1000, 5).to_vec(),
        "strong-correctness" => vec![strong_correctness(seed, 1000)],
        "translations" => vec![translations(seed, 500)],
        "strong-support" => vec![strong_support(seed, 200)],
        "model-laws" => model_laws(seed, 1000),
        "all" => {
            let mut out = soundness(seed, 1000, 5).to_vec();
            out.push(strong_correctness(seed, 1000));
            out.push(translations(seed, 500));
            out.push(strong_support(seed, 200));
            out.extend(model_laws(seed, 1000));
            out
        }
        _ => return None,
    })
}

/// Context permutations grouped by unknown.
fn gens_of(j: &FixJudgement, x: &Var) -> Vec<Perm> {
    j.context.perms_of(x)
}

fn vars_of(j: &FixJudgement) -> BTreeSet<Var> {
    let mut vs = j.context.vars();
    vs.extend(j.body.vars());
    vs
}

/// Most unknowns get a value satisfying their constraints; the rest are
/// unconstrained, which may falsify the context.
fn valuation<M: Sample, R: Rng>(m: &M, r: &mut R, cfg: &GenConfig, j: &FixJudgement) -> Valuation<M::Elem> {
    vars_of(j)
        .into_iter()
        .map(|x| {
            let e = if r.gen_bool(0.85) {
                m.sample_fixed(r, cfg, &gens_of(j, &x))
            } else {
                m.sample(r, cfg)
            };
            (x, e)
        })
        .collect()
}

fn validity_in<M: Sample, R: Rng>(
    m: &M,
    r: &mut R,
    cfg: &GenConfig,
    j: &FixJudgement,
    per: usize,
    rep: &mut SuiteReport,
    live: &mut (usize, usize),
) {
    for _ in 0..per {
        let val = valuation(m, r, cfg, j).strict();
        let ctx_ok = context_valid(m, &val, &j.context).expect("every unknown is valued");
        live.1 += 1;
        if ctx_ok {
            live.0 += 1;
        }
        let ok = judgement_valid(m, &val, j).expect("every unknown is valued");
        rep.check(ok, || {
            let shown: Vec<String> = val.iter().map(|(x, e)| format!("{x} := {}", m.show(e))).collect();
            format!("{j} fails in {} under {}", m.name(), shown.join("; "))
        });
    }
}

fn derivable_sample<R: Rng>(r: &mut R, cfg: &GenConfig, mode: VarRuleMode, n: usize) -> (Vec<FixJudgement>, usize) {
    let opts = FixOptions::mode(mode);
    let mut out = Vec::with_capacity(n);
    let mut tried = 0;
    while out.len() < n && tried < n * 200 {
        tried += 1;
        let j = gen::fix_judgement(r, cfg);
        if check_judgement(&j, &EqTheory::Core, &opts).is_ok_and(|v| v.derivable) {
            out.push(j);
        }
    }
    (out, tried)
}

/// Derivable fixed-point judgements are valid: subset-dom derivations in
/// the strong models, group-generated derivations in every model.
pub fn soundness(seed: u64, n: usize, valuations: usize) -> [SuiteReport; 2] {
    let cfg = GenConfig::default();
    let sig = Signature::builtin();
    let mut r = gen::rng(seed);
    let mut reports = [
        SuiteReport::new("soundness/subset-dom", seed),
        SuiteReport::new("soundness/group-generated", seed),
    ];
    for (rep, mode) in reports.iter_mut().zip([VarRuleMode::SubsetDom, VarRuleMode::GroupGenerated]) {
        let start = Instant::now();
        let (js, tried) = derivable_sample(&mut r, &cfg, mode, n);
        rep.cases = js.len();
        rep.check(js.len() == n, || format!("only {} derivable judgements in {tried} attempts", js.len()));
        let mut live = (0, 0);
        let mut unsound_in_pfin = 0;
        for j in &js {
            validity_in(&Singleton, &mut r, &cfg, j, valuations, rep, &mut live);
            validity_in(&Words, &mut r, &cfg, j, valuations, rep, &mut live);
            validity_in(&GroundMod::alpha(), &mut r, &cfg, j, valuations, rep, &mut live);
            if mode == VarRuleMode::GroupGenerated {
                validity_in(&PFin, &mut r, &cfg, j, valuations, rep, &mut live);
                validity_in(&GroundMod::alpha_c(&sig), &mut r, &cfg, j, valuations, rep, &mut live);
            } else {
                let mut probe = SuiteReport::new("probe", seed);
                validity_in(&PFin, &mut r, &cfg, j, valuations, &mut probe, &mut (0, 0));
                unsound_in_pfin += usize::from(!probe.passed());
            }
        }
        rep.notes.push(format!("{} derivable out of {tried} generated", js.len()));
        rep.notes.push(format!("{} of {} valuations satisfy the context", live.0, live.1));
        if mode == VarRuleMode::SubsetDom {
            rep.notes.push(format!("{unsound_in_pfin} derivable judgements are refuted in pfin (not a violation)"));
        }
        rep.elapsed_ms = start.elapsed().as_millis();
    }
    reports
}

/// `ν c̄.Υ ⊢ π ⋏ t` is derivable exactly when `ν c̄.Υ ⊢ π·t ≈ t` is.
pub fn strong_correctness(seed: u64, n: usize) -> SuiteReport {
    let start = Instant::now();
    let cfg = GenConfig::default();
    let mut r = gen::rng(seed ^ 0x5eed_0006);
    let mut rep = SuiteReport::new("strong-correctness", seed);
    let mut yes = 0;
    for _ in 0..n {
        let j = gen::strong_fix_judgement(&mut r, &cfg);
        let StrongBody::Fix(pi, t) = &j.body else { unreachable!() };
        let eq = NuJudgement {
            nu: j.nu.clone(),
            context: j.context.clone(),
            body: StrongBody::Alpha(t.act(pi), t.clone()),
        };
        let fix = check_fix_strong(&j).expect("generated judgements are well-formed").derivable;
        let alpha = check_alpha_strong(&eq, &EqTheory::Core).expect("well-formed").derivable;
        yes += usize::from(fix);
        rep.check(fix == alpha, || format!("{j}: fix={fix}, alpha={alpha}"));
    }
    rep.cases = n;
    rep.notes.push(format!("{yes} of {n} derivable"));
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

fn fresh_derivable(j: &FreshJudgement) -> bool {
    match &j.body {
        FreshBody::Fresh(a, t) => check_fresh(&j.context, a, t).derivable,
        FreshBody::Alpha(s, t) => check_alpha(&j.context, s, t, &EqTheory::Core).derivable,
    }
}

/// Both translations between the freshness and strong systems preserve
/// derivability.
pub fn translations(seed: u64, n: usize) -> SuiteReport {
    let start = Instant::now();
    let cfg = GenConfig::default();
    let mut r = gen::rng(seed ^ 0x5eed_0007);
    let mut rep = SuiteReport::new("translations", seed);
    let (mut fresh_yes, mut strong_yes) = (0, 0);
    for _ in 0..n {
        let j = gen::fresh_judgement(&mut r, &cfg);
        let d = fresh_derivable(&j);
        let tj = translate_fresh_judgement(&j);
        let td = check_strong(&tj, &EqTheory::Core).expect("translations are well-formed").derivable;
        fresh_yes += usize::from(d);
        rep.check(d == td, || format!("{j} ({d}) vs {tj} ({td})"));
    }
    for _ in 0..n {
        let j = gen::strong_translatable_judgement(&mut r, &cfg);
        let d = check_strong(&j, &EqTheory::Core).expect("well-formed").derivable;
        match translate_strong_judgement(&j) {
            Ok(tj) => {
                let td = fresh_derivable(&tj);
                strong_yes += usize::from(d);
                rep.check(d == td, || format!("{j} ({d}) vs {tj} ({td})"));
            }
            Err(e) => rep.check(false, || format!("{j}: {e}")),
        }
    }
    rep.cases = 2 * n;
    rep.notes.push(format!("{fresh_yes} of {n} freshness judgements derivable"));
    rep.notes.push(format!("{strong_yes} of {n} strong judgements derivable"));
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Ground terms modulo α have strong supports; `+(a, b)` modulo αC does not.
pub fn strong_support(seed: u64, n: usize) -> SuiteReport {
    let start = Instant::now();
    let cfg = GenConfig {
        atoms: 4,
        ..GenConfig::default()
    };
    let universe: BTreeSet<Atom> = cfg.atom_pool().into_iter().collect();
    let free: Vec<Atom> = cfg.atom_pool();
    let mut r = gen::rng(seed ^ 0x5eed_0009);
    let mut rep = SuiteReport::new("strong-support", seed);
    let m = GroundMod::alpha();
    for _ in 0..n {
        let x = m.canon(&gen::ground_term(&mut r, &cfg, 3, &free));
        let res = strong_support_check(&m, &x, &universe, DEFAULT_UNIVERSE_BOUND).expect("universe within bound");
        rep.check(res.strong, || format!("{x}: fixed by {:?}", res.witness.map(|p| p.to_string())));
    }
    let c = GroundMod::alpha_c(&Signature::builtin());
    let (a, b) = (Atom::user("a"), Atom::user("b"));
    let x = c.canon(&crate::terms::Term::App(
        Symbol::new("+"),
        vec![crate::terms::Term::Atom(a.clone()), crate::terms::Term::Atom(b.clone())],
    ));
    let u: BTreeSet<Atom> = [a.clone(), b.clone(), Atom::user("c")].into_iter().collect();
    let res = strong_support_check(&c, &x, &u, DEFAULT_UNIVERSE_BOUND).expect("universe within bound");
    rep.check(!res.strong && res.witness == Some(Perm::swap(a, b)), || {
        format!("{x} in ground-alpha-c: expected witness (a b), got {:?}", res.witness.map(|p| p.to_string()))
    });
    rep.cases = n + 1;
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Group action, equivariance, the abstraction condition, support
/// equivariance, and `dom(π) ∩ supp(x) = ∅ ⟹ π ⋏ x`.
pub fn laws_for<M: Sample, R: Rng>(m: &M, r: &mut R, cfg: &GenConfig, n: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rep = SuiteReport::new(&format!("model-laws/{}", m.name()), seed);
    let pool = gen::value_atoms(cfg);
    let formers: Vec<(Symbol, usize)> = cfg.symbols.clone();
    for _ in 0..n {
        let x = m.sample(r, cfg);
        let y = m.sample(r, cfg);
        let p = gen::perm(r, &pool, 3);
        let q = gen::perm(r, &pool, 3);
        let a = gen::pick(r, &pool).clone();
        let show = |e: &M::Elem| m.show(e);
        rep.check(m.act(&Perm::id(), &x) == x, || format!("id·{} differs", show(&x)));
        rep.check(m.act(&p, &m.act(&q, &x)) == m.act(&p.compose(&q), &x), || {
            format!("{p}·({q}·{}) differs from ({p}∘{q})·{}", show(&x), show(&x))
        });
        rep.check(m.act(&p, &m.atom(&a)) == m.atom(&p.apply(&a)), || format!("atom {a} not equivariant under {p}"));
        rep.check(m.act(&p, &m.abs(&a, &x)) == m.abs(&p.apply(&a), &m.act(&p, &x)), || {
            format!("abs({a}, {}) not equivariant under {p}", show(&x))
        });
        let (f, arity) = gen::pick(r, &formers).clone();
        let args: Vec<M::Elem> = (0..arity).map(|i| if i % 2 == 0 { x.clone() } else { y.clone() }).collect();
        let moved: Vec<M::Elem> = args.iter().map(|e| m.act(&p, e)).collect();
        rep.check(m.act(&p, &m.app(&f, &args)) == m.app(&f, &moved), || {
            format!("{f} not equivariant under {p}")
        });
        rep.check(!m.supp(&m.abs(&a, &x)).contains(&a), || format!("{a} in supp(abs({a}, {}))", show(&x)));
        let moved_supp: BTreeSet<Atom> = m.supp(&x).iter().map(|b| p.apply(b)).collect();
        rep.check(m.supp(&m.act(&p, &x)) == moved_supp, || format!("supp not equivariant on {}", show(&x)));
        let supp = m.supp(&x);
        let outside: Vec<Atom> = pool.iter().filter(|b| !supp.contains(b)).cloned().collect();
        let pi = if outside.len() >= 2 && r.gen_bool(0.7) { gen::perm(r, &outside, 2) } else { p.clone() };
        let disjoint = pi.domain().is_disjoint(&supp);
        rep.check(!disjoint || fix_sem(m, &pi, &x), || format!("{pi} avoids supp but moves {}", show(&x)));
    }
    rep.cases = n;
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// The law suite for every model, including ground terms modulo
/// associativity of `f`.
pub fn model_laws(seed: u64, n: usize) -> Vec<SuiteReport> {
    let cfg = GenConfig::default();
    let sig = Signature::builtin();
    let mut r = gen::rng(seed ^ 0x5eed_0011);
    let mut assoc_cfg = cfg.clone();
    assoc_cfg.symbols.push((Symbol::new("f"), 2));
    vec![
        laws_for(&Singleton, &mut r, &cfg, n, seed),
        laws_for(&PFin, &mut r, &cfg, n, seed),
        laws_for(&Words, &mut r, &cfg, n, seed),
        laws_for(&GroundMod::alpha(), &mut r, &cfg, n, seed),
        laws_for(&GroundMod::alpha_c(&sig), &mut r, &cfg, n, seed),
        laws_for(&GroundMod::alpha_a("f"), &mut r, &assoc_cfg, n, seed),
    ]
}
