//! Strong judgements `ν c̄. Υ ⊢ π ⋏ t` and `ν c̄. Υ ⊢ s ≈ t`, where every
//! context constraint is `ν c. (a c) ⋏ X`, and the translations between
//! these and freshness judgements.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::derivation::{Derivation, EqTheory, Verdict};
use crate::deriv_fresh::{FreshBody, FreshContext, FreshJudgement};
use crate::terms::{Atom, FreshSupply, Perm, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrongError {
    #[error("ill-formed strong context: {0}")]
    IllFormed(String),
    #[error("shape error on `{constraint}`: {reason}")]
    Shape { constraint: String, reason: String },
}

/// Constraints `ν c. (a c) ⋏ X`, stored as `(a, c, X)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StrongContext {
    nu: BTreeSet<Atom>,
    constraints: BTreeSet<(Atom, Atom, Var)>,
}

impl StrongContext {
    pub fn new() -> StrongContext {
        StrongContext::default()
    }

    /// Adds `(a c) ⋏ X` and records `c` as a ν-atom.
    pub fn insert(&mut self, a: Atom, c: Atom, x: Var) {
        self.nu.insert(c.clone());
        self.constraints.insert((a, c, x));
    }

    pub fn with(mut self, a: Atom, c: Atom, x: &str) -> StrongContext {
        self.insert(a, c, Var::new(x));
        self
    }

    /// `c̄₀`
    pub fn nu_atoms(&self) -> &BTreeSet<Atom> {
        &self.nu
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Atom, Atom, Var)> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// `{a | (a c) ⋏ X ∈ Υ}`
    pub fn dom_of(&self, x: &Var) -> BTreeSet<Atom> {
        self.constraints
            .iter()
            .filter(|(_, _, y)| y == x)
            .map(|(a, _, _)| a.clone())
            .collect()
    }

    /// The `A` atoms.
    pub fn plain_atoms(&self) -> BTreeSet<Atom> {
        self.constraints.iter().map(|(a, _, _)| a.clone()).collect()
    }

    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.plain_atoms();
        out.extend(self.nu.iter().cloned());
        out
    }

    pub fn validate(&self) -> Result<(), StrongError> {
        for (a, c, x) in &self.constraints {
            if self.nu.contains(a) {
                return Err(StrongError::IllFormed(format!(
                    "({a} {c}) fix {x}: {a} is also a new name"
                )));
            }
            if a == c {
                return Err(StrongError::IllFormed(format!("({a} {c}) fix {x} is trivial")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrongBody {
    Fix(Perm, Term),
    Alpha(Term, Term),
}

/// `ν c̄. Υ ⊢ body`, with the context's ν-atoms among `c̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NuJudgement {
    pub nu: BTreeSet<Atom>,
    pub context: StrongContext,
    pub body: StrongBody,
}

impl NuJudgement {
    pub fn new(nu: impl IntoIterator<Item = Atom>, context: StrongContext, body: StrongBody) -> NuJudgement {
        let mut nu: BTreeSet<Atom> = nu.into_iter().collect();
        nu.extend(context.nu_atoms().iter().cloned());
        NuJudgement { nu, context, body }
    }

    pub fn validate(&self) -> Result<(), StrongError> {
        self.context.validate()?;
        if let Some(c) = self.context.nu_atoms().iter().find(|c| !self.nu.contains(c)) {
            return Err(StrongError::IllFormed(format!("{c} is not bound by new")));
        }
        if let Some(a) = self.context.plain_atoms().iter().find(|a| self.nu.contains(a)) {
            return Err(StrongError::IllFormed(format!("{a} is constrained but bound by new")));
        }
        Ok(())
    }

    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.context.mentioned_atoms();
        out.extend(self.nu.iter().cloned());
        match &self.body {
            StrongBody::Fix(p, t) => {
                out.extend(p.atoms());
                out.extend(p.domain());
                out.extend(t.mentioned_atoms());
            }
            StrongBody::Alpha(s, t) => {
                out.extend(s.mentioned_atoms());
                out.extend(t.mentioned_atoms());
            }
        }
        out
    }

    /// Swaps each generated ν-atom `~c` with the plain `c`, so the judgement
    /// prints in the input syntax where `new c` rebinds the name.
    fn display_perm(&self) -> Perm {
        Perm::from_swaps(
            self.nu
                .iter()
                .filter(|c| c.is_fresh())
                .map(|c| (c.clone(), Atom::user(c.name()))),
        )
    }
}

impl fmt::Display for NuJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = self.display_perm();
        let atom = |a: &Atom| show.apply(a);
        let term = |t: &Term| t.rename_atoms(&atom);
        if !self.nu.is_empty() {
            let names: Vec<String> = self.nu.iter().map(|c| atom(c).to_string()).collect();
            write!(f, "new {}. ", names.join(" "))?;
        }
        let constraints: Vec<String> = self
            .context
            .iter()
            .map(|(a, c, x)| format!("({} {}) fix {x}", atom(a), atom(c)))
            .collect();
        if !constraints.is_empty() {
            write!(f, "{} ", constraints.join(", "))?;
        }
        match &self.body {
            StrongBody::Fix(p, t) => {
                write!(f, "|- {} fix {}", p.rename_atoms(&atom), term(t))
            }
            StrongBody::Alpha(s, t) => write!(f, "|- {} ~ {}", term(s), term(t)),
        }
    }
}

struct Engine {
    supply: FreshSupply,
}

impl Engine {
    fn new(j: &NuJudgement) -> Engine {
        let mut supply = FreshSupply::new("c");
        supply.avoid(&j.mentioned_atoms());
        Engine { supply }
    }

    fn fix(&mut self, nu: &BTreeSet<Atom>, ctx: &StrongContext, pi: &Perm, t: &Term) -> Result<Derivation, String> {
        let c = || concl_fix(nu, ctx, pi, t);
        match t {
            Term::Atom(a) => {
                if pi.apply(a) == *a {
                    Ok(Derivation::leaf("fix_a", c()))
                } else {
                    Err(format!("{pi} moves {a}"))
                }
            }
            Term::Susp(rho, x) => {
                let g = pi.conjugate(&rho.inverse());
                let rest: BTreeSet<Atom> = g.domain().difference(nu).cloned().collect();
                if rest.is_subset(&ctx.dom_of(x)) {
                    Ok(Derivation::leaf("fix_var", c()))
                } else {
                    Err(format!("dom({g}) minus the new names is not covered by the constraints on {x}"))
                }
            }
            Term::Abs(a, body) => {
                let c1 = self.supply.next_atom();
                let mut nu1 = nu.clone();
                nu1.insert(c1.clone());
                let renamed = body.act(&Perm::swap(a.clone(), c1));
                Ok(Derivation::node("fix_abs", c(), vec![self.fix(&nu1, ctx, pi, &renamed)?]))
            }
            Term::App(_, args) => {
                let premises = args
                    .iter()
                    .map(|u| self.fix(nu, ctx, pi, u))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Derivation::node("fix_f", c(), premises))
            }
        }
    }

    fn alpha(
        &mut self,
        nu: &BTreeSet<Atom>,
        ctx: &StrongContext,
        s: &Term,
        t: &Term,
        theory: &EqTheory,
    ) -> Result<Derivation, String> {
        let c = || concl_alpha(nu, ctx, s, t);
        match (s, t) {
            (Term::Atom(a), Term::Atom(b)) => {
                if a == b {
                    Ok(Derivation::leaf("~a", c()))
                } else {
                    Err(format!("distinct atoms {a} and {b}"))
                }
            }
            (Term::Susp(p, x), Term::Susp(q, y)) if x == y => {
                let g = q.inverse().compose(p);
                let rest: BTreeSet<Atom> = g.domain().difference(nu).cloned().collect();
                if rest.is_subset(&ctx.dom_of(x)) {
                    Ok(Derivation::leaf("~var", c()))
                } else {
                    Err(format!("{s} ~ {t}: dom({g}) minus the new names is not covered"))
                }
            }
            (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => {
                Ok(Derivation::node("~[a]", c(), vec![self.alpha(nu, ctx, s1, t1, theory)?]))
            }
            (Term::Abs(a, s1), Term::Abs(b, t1)) => {
                let left = self.alpha(nu, ctx, s1, &t1.act(&Perm::swap(a.clone(), b.clone())), theory)?;
                let c1 = self.supply.next_atom();
                let mut nu1 = nu.clone();
                nu1.insert(c1.clone());
                let right = self.fix(&nu1, ctx, &Perm::swap(a.clone(), c1), t1)?;
                Ok(Derivation::node("~ab", c(), vec![left, right]))
            }
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                let direct: Result<Vec<_>, String> = xs
                    .iter()
                    .zip(ys)
                    .map(|(u, v)| self.alpha(nu, ctx, u, v, theory))
                    .collect();
                match direct {
                    Ok(premises) => Ok(Derivation::node("~f", c(), premises)),
                    Err(e) if theory.is_commutative(f) && xs.len() == 2 => {
                        let l = self.alpha(nu, ctx, &xs[0], &ys[1], theory).map_err(|_| e.clone())?;
                        let r = self.alpha(nu, ctx, &xs[1], &ys[0], theory).map_err(|_| e.clone())?;
                        Ok(Derivation::node("~fC", c(), vec![l, r]))
                    }
                    Err(e) => Err(e),
                }
            }
            _ => Err(format!("{s} ~ {t}: different shapes")),
        }
    }
}

fn concl_fix(nu: &BTreeSet<Atom>, ctx: &StrongContext, pi: &Perm, t: &Term) -> String {
    NuJudgement {
        nu: nu.clone(),
        context: ctx.clone(),
        body: StrongBody::Fix(pi.clone(), t.clone()),
    }
    .to_string()
}

fn concl_alpha(nu: &BTreeSet<Atom>, ctx: &StrongContext, s: &Term, t: &Term) -> String {
    NuJudgement {
        nu: nu.clone(),
        context: ctx.clone(),
        body: StrongBody::Alpha(s.clone(), t.clone()),
    }
    .to_string()
}

/// Decides a strong judgement; `≈` bodies are read modulo `theory`.
pub fn check_strong(j: &NuJudgement, theory: &EqTheory) -> Result<Verdict, StrongError> {
    j.validate()?;
    let mut engine = Engine::new(j);
    Ok(Verdict::from_result(match &j.body {
        StrongBody::Fix(pi, t) => engine.fix(&j.nu, &j.context, pi, t),
        StrongBody::Alpha(s, t) => engine.alpha(&j.nu, &j.context, s, t, theory),
    }))
}

/// Decides `ν c̄. Υ ⊢ π ⋏ t`.
pub fn check_fix_strong(j: &NuJudgement) -> Result<Verdict, StrongError> {
    match j.body {
        StrongBody::Fix(..) => check_strong(j, &EqTheory::Core),
        StrongBody::Alpha(..) => Err(StrongError::IllFormed("expected a fixed-point body".into())),
    }
}

/// Decides `ν c̄. Υ ⊢ s ≈ t`.
pub fn check_alpha_strong(j: &NuJudgement, theory: &EqTheory) -> Result<Verdict, StrongError> {
    match j.body {
        StrongBody::Alpha(..) => check_strong(j, theory),
        StrongBody::Fix(..) => Err(StrongError::IllFormed("expected an α-equality body".into())),
    }
}

/// `a#X ↦ ν c. (a c) ⋏ X`, one new name per constraint, avoiding `avoid`.
pub fn fresh_to_fix_avoiding(delta: &FreshContext, avoid: &BTreeSet<Atom>) -> StrongContext {
    let mut supply = FreshSupply::new("c");
    supply.avoid(avoid);
    supply.avoid(&delta.atoms());
    let mut out = StrongContext::new();
    for (a, x) in delta.iter() {
        out.insert(a.clone(), supply.next_atom(), x.clone());
    }
    out
}

/// `[Δ]⋏`
pub fn translate_fresh_to_fix(delta: &FreshContext) -> StrongContext {
    fresh_to_fix_avoiding(delta, &BTreeSet::new())
}

/// `[Υ]#`: `ν c. (a c) ⋏ X ↦ a#X`.
pub fn translate_fix_to_fresh(ctx: &StrongContext) -> FreshContext {
    ctx.iter().map(|(a, _, x)| (a.clone(), x.clone())).collect()
}

/// Translates a freshness judgement: `Δ ⊢ a # t` becomes
/// `ν c̄, c'. [Δ]⋏ ⊢ (a c') ⋏ t`, and `Δ ⊢ s ≈ t` becomes `ν c̄. [Δ]⋏ ⊢ s ≈ t`.
pub fn translate_fresh_judgement(j: &FreshJudgement) -> NuJudgement {
    let mut avoid = j.context.atoms();
    match &j.body {
        FreshBody::Fresh(a, t) => {
            avoid.insert(a.clone());
            avoid.extend(t.mentioned_atoms());
        }
        FreshBody::Alpha(s, t) => {
            avoid.extend(s.mentioned_atoms());
            avoid.extend(t.mentioned_atoms());
        }
    }
    let ctx = fresh_to_fix_avoiding(&j.context, &avoid);
    match &j.body {
        FreshBody::Fresh(a, t) => {
            let mut supply = FreshSupply::new("c");
            supply.avoid(&avoid);
            supply.avoid(ctx.nu_atoms());
            let c = supply.next_atom();
            NuJudgement::new([c.clone()], ctx, StrongBody::Fix(Perm::swap(a.clone(), c), t.clone()))
        }
        FreshBody::Alpha(s, t) => NuJudgement::new([], ctx, StrongBody::Alpha(s.clone(), t.clone())),
    }
}

/// Translates a strong judgement back. A fixed-point body must be `(a c1)`
/// with `c1` bound by `new`, unused in the context and the term, and `a` not
/// bound; it becomes `[Υ]# ⊢ a # t`. An α-equality body becomes
/// `[Υ]#, c̄#vars(s,t) ⊢ s ≈ t`.
pub fn translate_strong_judgement(j: &NuJudgement) -> Result<FreshJudgement, StrongError> {
    j.validate()?;
    let base = translate_fix_to_fresh(&j.context);
    match &j.body {
        StrongBody::Fix(pi, t) => {
            let shape = |reason: &str| StrongError::Shape {
                constraint: format!("{pi} fix {t}"),
                reason: reason.to_string(),
            };
            let dom: Vec<Atom> = pi.domain().into_iter().collect();
            if dom.len() != 2 {
                return Err(shape("the permutation is not a single swap"));
            }
            let (a, c1) = match (j.nu.contains(&dom[0]), j.nu.contains(&dom[1])) {
                (false, true) => (dom[0].clone(), dom[1].clone()),
                (true, false) => (dom[1].clone(), dom[0].clone()),
                (false, false) => return Err(shape("neither atom of the swap is a new name")),
                (true, true) => return Err(shape("both atoms of the swap are new names")),
            };
            if j.context.nu_atoms().contains(&c1) {
                return Err(shape("the new name already occurs in the context"));
            }
            let term_atoms = t.atoms();
            if let Some(c) = j.nu.iter().find(|c| term_atoms.contains(c)) {
                return Err(shape(&format!("the new name {c} occurs in the term")));
            }
            Ok(FreshJudgement {
                context: base,
                body: FreshBody::Fresh(a, t.clone()),
            })
        }
        StrongBody::Alpha(s, t) => {
            let mut ctx = base;
            let mut vars = s.vars();
            vars.extend(t.vars());
            for c in &j.nu {
                for x in &vars {
                    ctx.insert(c.clone(), x.clone());
                }
            }
            Ok(FreshJudgement {
                context: ctx,
                body: FreshBody::Alpha(s.clone(), t.clone()),
            })
        }
    }
}

/// Renders a strong context in input syntax: `new c1. (a c1) fix X`.
pub fn render_strong_context(ctx: &StrongContext) -> String {
    let j = NuJudgement::new([], ctx.clone(), StrongBody::Alpha(Term::var("X"), Term::var("X")));
    let text = j.to_string();
    text.trim_end_matches("|- X ~ X").trim_end().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv_fresh::{check_alpha, check_fresh};
    use crate::terms::{parse_term, Signature};

    fn t(s: &str) -> Term {
        parse_term(s, &Signature::builtin()).unwrap()
    }

    fn a(n: &str) -> Atom {
        Atom::user(n)
    }

    fn nu(n: &str) -> Atom {
        Atom::fresh(n)
    }

    fn two_names() -> StrongContext {
        StrongContext::new()
            .with(a("a"), nu("c1"), "X")
            .with(a("b"), nu("c2"), "X")
    }

    #[test]
    fn two_new_names_fix_a_swap() {
        let fix = NuJudgement::new([], two_names(), StrongBody::Fix(Perm::swap(a("a"), a("b")), t("X")));
        assert!(check_fix_strong(&fix).unwrap().derivable);
        assert!(matches!(translate_strong_judgement(&fix), Err(StrongError::Shape { .. })));
        let alpha = NuJudgement::new([], two_names(), StrongBody::Alpha(t("(a b).X"), t("X")));
        assert!(check_alpha_strong(&alpha, &EqTheory::Core).unwrap().derivable);
        let back = translate_strong_judgement(&alpha).unwrap();
        assert!(check_alpha(&back.context, &t("(a b).X"), &t("X"), &EqTheory::Core).derivable);
    }

    #[test]
    fn fixed_point_examples() {
        let one = StrongContext::new().with(a("a"), nu("c1"), "X");
        let j = NuJudgement::new([], one, StrongBody::Fix(Perm::swap(a("a"), a("b")), t("X")));
        assert!(!check_fix_strong(&j).unwrap().derivable);
        let id = NuJudgement::new([nu("c")], StrongContext::new(), StrongBody::Fix(Perm::id(), t("[a]f(X, b)")));
        assert!(check_fix_strong(&id).unwrap().derivable);
        let ab = NuJudgement::new([], StrongContext::new(), StrongBody::Alpha(t("[a]a"), t("[b]b")));
        assert!(check_alpha_strong(&ab, &EqTheory::Core).unwrap().derivable);
        let no = NuJudgement::new([], StrongContext::new(), StrongBody::Alpha(t("a"), t("b")));
        assert!(!check_alpha_strong(&no, &EqTheory::Core).unwrap().derivable);
    }

    #[test]
    fn context_translations() {
        let delta = FreshContext::new().with("a", "X").with("a", "Y");
        let ctx = translate_fresh_to_fix(&delta);
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.nu_atoms().len(), 2);
        assert_eq!(translate_fix_to_fresh(&ctx), delta);
        let single = translate_fresh_to_fix(&FreshContext::new().with("a", "X"));
        assert_eq!(render_strong_context(&single), "new c1. (a c1) fix X");
        assert_eq!(render_strong_context(&StrongContext::new()), "");
    }

    #[test]
    fn freshness_translation_agrees() {
        let delta = FreshContext::new().with("a", "X");
        for (atom, term) in [("a", "f(X, [a]a)"), ("a", "(a b).X"), ("b", "(a b).X"), ("a", "[b]a")] {
            let fj = FreshJudgement {
                context: delta.clone(),
                body: FreshBody::Fresh(a(atom), t(term)),
            };
            let sj = translate_fresh_judgement(&fj);
            assert_eq!(
                check_fresh(&delta, &a(atom), &t(term)).derivable,
                check_fix_strong(&sj).unwrap().derivable,
                "{fj}"
            );
            assert_eq!(translate_strong_judgement(&sj).unwrap(), fj);
        }
    }

    #[test]
    fn display_prints_new_names_bare() {
        let j = NuJudgement::new([], two_names(), StrongBody::Fix(Perm::swap(a("a"), a("b")), t("X")));
        assert_eq!(j.to_string(), "new c1 c2. (a c1) fix X, (b c2) fix X |- (a b) fix X");
    }
}
