//! Fixed-point constraints `Υ ⊢ π ⋏ t` and equality `Υ ⊢ s = t`.
//!
//! [`check_fix`] is syntax-directed. [`check_eq_fix`] decides the
//! axiom-free equality generated by `perm`, congruence and reflexivity
//! (plus commutativity when asked), and returns a rule-level proof tree
//! that [`verify_proof`] accepts. The variable rule is selected by
//! [`VarRuleMode`]: the domain-inclusion rule, or membership in the group
//! generated by the context.

mod proof;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::derivation::{EqTheory, Verdict};
use crate::permgroups::{GenSet, GroupError, DEFAULT_CARRIER_BOUND};
use crate::terms::{Atom, FreshSupply, Perm, Subst, Term, Var};

pub use proof::{
    verify_proof, Axiom, ProofFormatError, ProofReport, ProofTree, Rule, RuleMismatch, Theory,
};

/// Which variable rule decides `π ⋏ ρ·X`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VarRuleMode {
    /// `dom(π^{ρ⁻¹}) ⊆ dom(perm(Υ|X))`
    #[default]
    SubsetDom,
    /// `π^{ρ⁻¹} ∈ ⟨perm(Υ|X)⟩`
    GroupGenerated,
}

impl VarRuleMode {
    pub fn name(self) -> &'static str {
        match self {
            VarRuleMode::SubsetDom => "subset-dom",
            VarRuleMode::GroupGenerated => "group-generated",
        }
    }
}

/// A finite set of primitive constraints `π ⋏ X`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixContext(BTreeSet<(Perm, Var)>);

impl FixContext {
    pub fn new() -> FixContext {
        FixContext::default()
    }

    pub fn insert(&mut self, pi: Perm, x: Var) {
        self.0.insert((pi, x));
    }

    pub fn with(mut self, pi: Perm, x: &str) -> FixContext {
        self.insert(pi, Var::new(x));
        self
    }

    pub fn contains(&self, pi: &Perm, x: &Var) -> bool {
        self.0.contains(&(pi.clone(), x.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Perm, Var)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `perm(Υ|X)`
    pub fn perms_of(&self, x: &Var) -> Vec<Perm> {
        self.0
            .iter()
            .filter(|(_, y)| y == x)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// `dom(perm(Υ|X))`, the union of the domains.
    pub fn dom_of(&self, x: &Var) -> BTreeSet<Atom> {
        self.0
            .iter()
            .filter(|(_, y)| y == x)
            .flat_map(|(p, _)| p.domain())
            .collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }

    /// Every atom written in the context.
    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        self.0
            .iter()
            .flat_map(|(p, _)| {
                let mut s = p.atoms();
                s.extend(p.domain());
                s
            })
            .collect()
    }

    /// `Υ ∪ {(c1 c2) ⋏ X | X ∈ vars}`
    pub fn extended(&self, c1: &Atom, c2: &Atom, vars: &BTreeSet<Var>) -> FixContext {
        let mut out = self.clone();
        let swap = Perm::swap(c1.clone(), c2.clone());
        for x in vars {
            out.insert(swap.clone(), x.clone());
        }
        out
    }

    pub fn union(&self, other: &FixContext) -> FixContext {
        FixContext(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &FixContext) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<(Perm, Var)> for FixContext {
    fn from_iter<I: IntoIterator<Item = (Perm, Var)>>(iter: I) -> Self {
        FixContext(iter.into_iter().collect())
    }
}

impl fmt::Display for FixContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, x)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p} fix {x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixBody {
    Fix(Perm, Term),
    Eq(Term, Term),
}

impl FixBody {
    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        match self {
            FixBody::Fix(p, t) => {
                let mut s = t.mentioned_atoms();
                s.extend(p.atoms());
                s.extend(p.domain());
                s
            }
            FixBody::Eq(s, t) => {
                let mut out = s.mentioned_atoms();
                out.extend(t.mentioned_atoms());
                out
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            FixBody::Fix(_, t) => t.vars(),
            FixBody::Eq(s, t) => {
                let mut out = s.vars();
                out.extend(t.vars());
                out
            }
        }
    }
}

impl fmt::Display for FixBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixBody::Fix(p, t) => write!(f, "{p} fix {t}"),
            FixBody::Eq(s, t) => write!(f, "{s} = {t}"),
        }
    }
}

/// `Υ ⊢ π ⋏ t` or `Υ ⊢ s = t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixJudgement {
    pub context: FixContext,
    pub body: FixBody,
}

impl FixJudgement {
    pub fn fix(context: FixContext, pi: Perm, t: Term) -> FixJudgement {
        FixJudgement {
            context,
            body: FixBody::Fix(pi, t),
        }
    }

    pub fn eq(context: FixContext, s: Term, t: Term) -> FixJudgement {
        FixJudgement {
            context,
            body: FixBody::Eq(s, t),
        }
    }

    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.context.mentioned_atoms();
        out.extend(self.body.mentioned_atoms());
        out
    }
}

impl fmt::Display for FixJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.body)
        } else {
            write!(f, "{} |- {}", self.context, self.body)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixOptions {
    pub mode: VarRuleMode,
    pub carrier_bound: usize,
    /// Prefix for generated atoms; verdicts do not depend on it.
    pub fresh_prefix: String,
}

impl Default for FixOptions {
    fn default() -> Self {
        FixOptions {
            mode: VarRuleMode::SubsetDom,
            carrier_bound: DEFAULT_CARRIER_BOUND,
            fresh_prefix: "c".to_string(),
        }
    }
}

impl FixOptions {
    pub fn mode(mode: VarRuleMode) -> FixOptions {
        FixOptions {
            mode,
            ..FixOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type FixVerdict = Verdict<ProofTree>;

enum Fail {
    No(String),
    Group(GroupError),
}

impl From<GroupError> for Fail {
    fn from(e: GroupError) -> Self {
        Fail::Group(e)
    }
}

struct Engine {
    mode: VarRuleMode,
    bound: usize,
    supply: FreshSupply,
}

impl Engine {
    fn new(opts: &FixOptions, judgement: &FixJudgement) -> Engine {
        let mut supply = FreshSupply::new(&opts.fresh_prefix);
        supply.avoid(&judgement.mentioned_atoms());
        Engine {
            mode: opts.mode,
            bound: opts.carrier_bound,
            supply,
        }
    }

    fn var_rule(&self, ctx: &FixContext, pi: &Perm, rho: &Perm, x: &Var) -> Result<bool, Fail> {
        let g = pi.conjugate(&rho.inverse());
        Ok(match self.mode {
            VarRuleMode::SubsetDom => g.domain().is_subset(&ctx.dom_of(x)),
            VarRuleMode::GroupGenerated => GenSet::new(ctx.perms_of(x))
                .with_bound(self.bound)
                .contains(&g)?,
        })
    }

    fn fix(&mut self, ctx: &FixContext, pi: &Perm, t: &Term) -> Result<ProofTree, Fail> {
        let conclusion = FixJudgement::fix(ctx.clone(), pi.clone(), t.clone());
        match t {
            Term::Atom(a) => {
                if pi.apply(a) == *a {
                    Ok(ProofTree::leaf(Rule::FixA, conclusion))
                } else {
                    Err(Fail::No(format!("{pi} moves the atom {a}")))
                }
            }
            Term::Susp(rho, x) => {
                if self.var_rule(ctx, pi, rho, x)? {
                    Ok(ProofTree::leaf(Rule::FixVar, conclusion))
                } else {
                    let g = pi.conjugate(&rho.inverse());
                    Err(Fail::No(match self.mode {
                        VarRuleMode::SubsetDom => format!(
                            "dom({g}) is not contained in dom(perm(Υ|{x})) = {{{}}}",
                            join(&ctx.dom_of(x))
                        ),
                        VarRuleMode::GroupGenerated => {
                            format!("{g} is not in the group generated by perm(Υ|{x})")
                        }
                    }))
                }
            }
            Term::Abs(a, body) => {
                let c1 = self.supply.next_atom();
                let c2 = self.supply.next_atom();
                let ext = ctx.extended(&c1, &c2, &body.vars());
                let renamed = body.act(&Perm::swap(a.clone(), c1.clone()));
                let premise = self.fix(&ext, pi, &renamed)?;
                Ok(ProofTree::node(
                    Rule::FixAbs { fresh: [c1, c2] },
                    conclusion,
                    vec![premise],
                ))
            }
            Term::App(_, args) => {
                let premises = args
                    .iter()
                    .map(|u| self.fix(ctx, pi, u))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ProofTree::node(Rule::FixF, conclusion, premises))
            }
        }
    }

    /// `Some(tree)` when a rule-by-rule derivation was built, `None` when
    /// the step is decided but has no such derivation in this mode.
    fn eq(
        &mut self,
        ctx: &FixContext,
        s: &Term,
        t: &Term,
        theory: &EqTheory,
    ) -> Result<Option<ProofTree>, Fail> {
        let tree = self.eq_inner(ctx, s, t, theory)?;
        Ok(tree.map(|tr| tr.with_conclusion(FixJudgement::eq(ctx.clone(), s.clone(), t.clone()))))
    }

    fn eq_inner(
        &mut self,
        ctx: &FixContext,
        s: &Term,
        t: &Term,
        theory: &EqTheory,
    ) -> Result<Option<ProofTree>, Fail> {
        if s == t {
            return Ok(Some(ProofTree::leaf(
                Rule::Refl,
                FixJudgement::eq(ctx.clone(), s.clone(), t.clone()),
            )));
        }
        match (s, t) {
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                match self.args_eq(ctx, s, xs, ys, theory) {
                    Ok(tree) => Ok(tree),
                    Err(Fail::No(e)) if theory.is_commutative(f) && xs.len() == 2 => {
                        let swapped = Term::App(f.clone(), vec![ys[1].clone(), ys[0].clone()]);
                        let first = match self.args_eq(ctx, s, xs, &[ys[1].clone(), ys[0].clone()], theory) {
                            Ok(tree) => tree,
                            Err(Fail::No(_)) => return Err(Fail::No(e)),
                            Err(other) => return Err(other),
                        };
                        let sigma = Subst::new()
                            .with("X", ys[1].clone())
                            .with("Y", ys[0].clone());
                        let ax = ProofTree::leaf(
                            Rule::Ax {
                                axiom: Theory::c_axiom_name(f),
                                pi: Perm::id(),
                                sigma,
                            },
                            FixJudgement::eq(ctx.clone(), swapped.clone(), t.clone()),
                        );
                        Ok(first.map(|first| {
                            if matches!(first.rule, Rule::Refl) {
                                ax
                            } else {
                                ProofTree::tran(ctx, first, ax)
                            }
                        }))
                    }
                    Err(e) => Err(e),
                }
            }
            (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => {
                let inner = self.eq(ctx, s1, t1, theory)?;
                Ok(inner.map(|p| {
                    ProofTree::node(
                        Rule::CongAbs,
                        FixJudgement::eq(ctx.clone(), s.clone(), t.clone()),
                        vec![p],
                    )
                }))
            }
            (Term::Abs(a, s1), Term::Abs(b, t1)) => {
                let ab = Perm::swap(a.clone(), b.clone());
                let swapped_body = t1.act(&ab);
                let body_eq = self.eq(ctx, s1, &swapped_body, theory)?;
                let c1 = self.supply.next_atom();
                let c2 = self.supply.next_atom();
                let ext = ctx.extended(&c1, &c2, &t1.vars());
                let ac1 = Perm::swap(a.clone(), c1.clone());
                self.fix(&ext, &ac1, t1)
                    .map_err(|e| match e {
                        Fail::No(why) => Fail::No(format!("{a} is not fresh for {t1}: {why}")),
                        other => other,
                    })?;
                let Some(body_eq) = body_eq else {
                    return Ok(None);
                };
                let Some(perm) = self.perm_step(ctx, a, b, t, Some((c1, c2)))? else {
                    return Ok(None);
                };
                if matches!(body_eq.rule, Rule::Refl) {
                    return Ok(Some(perm));
                }
                let mid = Term::Abs(a.clone(), Box::new(swapped_body));
                let cong = ProofTree::node(
                    Rule::CongAbs,
                    FixJudgement::eq(ctx.clone(), s.clone(), mid),
                    vec![body_eq],
                );
                Ok(Some(ProofTree::tran(ctx, cong, perm)))
            }
            (Term::Susp(p, x), Term::Susp(q, y)) if x == y => {
                let gamma = q.inverse().compose(p);
                if !self.var_rule(ctx, &gamma, &Perm::id(), x)? {
                    return Err(Fail::No(match self.mode {
                        VarRuleMode::SubsetDom => format!(
                            "{s} = {t}: dom({gamma}) is not contained in dom(perm(Υ|{x})) = {{{}}}",
                            join(&ctx.dom_of(x))
                        ),
                        VarRuleMode::GroupGenerated => format!(
                            "{s} = {t}: {gamma} is not in the group generated by perm(Υ|{x})"
                        ),
                    }));
                }
                if self.mode == VarRuleMode::GroupGenerated {
                    return Ok(None);
                }
                // p·X = q·X as a chain of perm steps, one per swap of q⁻¹∘p
                let swaps = Perm::from_map(gamma.mapping().clone())
                    .expect("normal forms are bijections")
                    .swaps()
                    .to_vec();
                let mut rho = q.clone();
                let mut steps = Vec::new();
                for (u, v) in swaps {
                    let before = Term::Susp(rho.clone(), x.clone());
                    let (a, b) = (rho.apply(&u), rho.apply(&v));
                    match self.perm_step(ctx, &a, &b, &before, None)? {
                        Some(step) => steps.push(step),
                        None => return Ok(None),
                    }
                    rho = rho.compose(&Perm::swap(u, v));
                }
                steps.reverse();
                Ok(Some(ProofTree::chain(ctx, steps)))
            }
            _ => Err(Fail::No(format!("{s} = {t}: the terms have different shapes"))),
        }
    }

    /// Argument-wise equality, as a chain of `cong_f` steps.
    fn args_eq(
        &mut self,
        ctx: &FixContext,
        s: &Term,
        xs: &[Term],
        ys: &[Term],
        theory: &EqTheory,
    ) -> Result<Option<ProofTree>, Fail> {
        let Term::App(f, _) = s else { unreachable!() };
        let mut current: Vec<Term> = xs.to_vec();
        let mut steps = Vec::new();
        let mut complete = true;
        for (i, (u, v)) in xs.iter().zip(ys).enumerate() {
            if u == v {
                continue;
            }
            let p = self.eq(ctx, u, v, theory)?;
            let before = Term::App(f.clone(), current.clone());
            current[i] = v.clone();
            let after = Term::App(f.clone(), current.clone());
            match p {
                Some(p) => steps.push(ProofTree::node(
                    Rule::CongF { position: i + 1 },
                    FixJudgement::eq(ctx.clone(), before, after),
                    vec![p],
                )),
                None => complete = false,
            }
        }
        if !complete {
            return Ok(None);
        }
        if steps.is_empty() {
            return Ok(Some(ProofTree::leaf(
                Rule::Refl,
                FixJudgement::eq(ctx.clone(), s.clone(), s.clone()),
            )));
        }
        Ok(Some(ProofTree::chain(ctx, steps)))
    }

    /// A `perm` node proving `(a b)·t = t`; `None` if a premise has no
    /// derivation in this mode.
    fn perm_step(
        &mut self,
        ctx: &FixContext,
        a: &Atom,
        b: &Atom,
        t: &Term,
        c: Option<(Atom, Atom)>,
    ) -> Result<Option<ProofTree>, Fail> {
        let (c1, c2) = match c {
            Some(pair) => pair,
            None => (self.supply.next_atom(), self.supply.next_atom()),
        };
        let d1 = self.supply.next_atom();
        let d2 = self.supply.next_atom();
        let vars = t.vars();
        let left = self.fix(&ctx.extended(&c1, &c2, &vars), &Perm::swap(a.clone(), c1.clone()), t);
        let right = self.fix(&ctx.extended(&d1, &d2, &vars), &Perm::swap(b.clone(), d1.clone()), t);
        match (left, right) {
            (Ok(l), Ok(r)) => Ok(Some(ProofTree::node(
                Rule::Perm {
                    a: a.clone(),
                    b: b.clone(),
                    fresh: [c1, c2, d1, d2],
                },
                FixJudgement::eq(ctx.clone(), t.act(&Perm::swap(a.clone(), b.clone())), t.clone()),
                vec![l, r],
            ))),
            (Err(Fail::Group(e)), _) | (_, Err(Fail::Group(e))) => Err(Fail::Group(e)),
            _ => Ok(None),
        }
    }
}

fn join(atoms: &BTreeSet<Atom>) -> String {
    atoms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn finish(result: Result<ProofTree, Fail>) -> Result<FixVerdict, FixError> {
    match result {
        Ok(tree) => Ok(Verdict::yes(Some(tree))),
        Err(Fail::No(why)) => Ok(Verdict::no(why)),
        Err(Fail::Group(e)) => Err(e.into()),
    }
}

/// Decides `Υ ⊢ π ⋏ t`.
pub fn check_fix(ctx: &FixContext, pi: &Perm, t: &Term, opts: &FixOptions) -> Result<FixVerdict, FixError> {
    let j = FixJudgement::fix(ctx.clone(), pi.clone(), t.clone());
    let mut engine = Engine::new(opts, &j);
    finish(engine.fix(ctx, pi, t))
}

/// Decides `Υ ⊢ s = t` without axioms, or modulo commutativity.
pub fn check_eq_fix(
    ctx: &FixContext,
    s: &Term,
    t: &Term,
    theory: &EqTheory,
    opts: &FixOptions,
) -> Result<FixVerdict, FixError> {
    let j = FixJudgement::eq(ctx.clone(), s.clone(), t.clone());
    let mut engine = Engine::new(opts, &j);
    match engine.eq(ctx, s, t, theory) {
        Ok(tree) => Ok(Verdict::yes(tree)),
        Err(Fail::No(why)) => Ok(Verdict::no(why)),
        Err(Fail::Group(e)) => Err(e.into()),
    }
}

/// Decides either judgement form.
pub fn check_judgement(j: &FixJudgement, theory: &EqTheory, opts: &FixOptions) -> Result<FixVerdict, FixError> {
    match &j.body {
        FixBody::Fix(pi, t) => check_fix(&j.context, pi, t, opts),
        FixBody::Eq(s, t) => check_eq_fix(&j.context, s, t, theory, opts),
    }
}
