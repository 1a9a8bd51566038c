use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::atom::{Atom, Symbol, Var};
use super::perm::Perm;
use super::TermError;

/// A nominal term.
///
/// A bare unknown `X` is `Susp(id, X)`; there is no separate variable case.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(Atom),
    Susp(Perm, Var),
    Abs(Atom, Box<Term>),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::user(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Susp(Perm::id(), Var::new(name))
    }

    pub fn susp(pi: Perm, x: Var) -> Term {
        Term::Susp(pi, x)
    }

    pub fn abs(a: Atom, body: Term) -> Term {
        Term::Abs(a, Box::new(body))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(f), args)
    }

    /// Permutation action: atoms are renamed, suspended permutations are
    /// composed on the left, binders are renamed like any other atom.
    pub fn act(&self, pi: &Perm) -> Term {
        if pi.is_id() {
            return self.clone();
        }
        match self {
            Term::Atom(a) => Term::Atom(pi.apply(a)),
            Term::Susp(p, x) => Term::Susp(pi.compose(p), x.clone()),
            Term::Abs(a, body) => Term::Abs(pi.apply(a), Box::new(body.act(pi))),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|t| t.act(pi)).collect()),
        }
    }

    /// Renames every written atom through `f`, keeping suspended swap lists
    /// in their written order. With a bijective `f` this agrees with `act`
    /// up to normal forms.
    pub fn rename_atoms(&self, f: &impl Fn(&Atom) -> Atom) -> Term {
        match self {
            Term::Atom(a) => Term::Atom(f(a)),
            Term::Susp(p, x) => Term::Susp(p.rename_atoms(f), x.clone()),
            Term::Abs(a, body) => Term::Abs(f(a), Box::new(body.rename_atoms(f))),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|t| t.rename_atoms(f)).collect()),
        }
    }

    /// Applies `sigma` once. Substitution may capture: `([a]X){X ↦ a}` is `[a]a`.
    pub fn subst(&self, sigma: &Subst) -> Term {
        match self {
            Term::Atom(_) => self.clone(),
            Term::Susp(p, x) => match sigma.get(x) {
                Some(t) => t.act(p),
                None => self.clone(),
            },
            Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(body.subst(sigma))),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|t| t.subst(sigma)).collect())
            }
        }
    }

    /// Atoms occurring in the term: free, bound, and those in the domain of
    /// any suspended permutation.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                out.insert(a.clone());
            }
            Term::Susp(p, _) => out.extend(p.domain()),
            Term::Abs(a, body) => {
                out.insert(a.clone());
                body.collect_atoms(out);
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_atoms(out)),
        }
    }

    /// Every atom mentioned anywhere, including ones in swap lists that
    /// cancel out. Used to pick fresh names.
    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_mentioned(&mut out);
        out
    }

    fn collect_mentioned(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                out.insert(a.clone());
            }
            Term::Susp(p, _) => {
                out.extend(p.atoms());
                out.extend(p.domain());
            }
            Term::Abs(a, body) => {
                out.insert(a.clone());
                body.collect_mentioned(out);
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_mentioned(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Atom(_) => {}
            Term::Susp(_, x) => {
                out.insert(x.clone());
            }
            Term::Abs(_, body) => body.collect_vars(out),
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Atom(_) => true,
            Term::Susp(..) => false,
            Term::Abs(_, body) => body.is_ground(),
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Free names of a ground term.
    pub fn free_names(&self) -> Result<BTreeSet<Atom>, TermError> {
        if !self.is_ground() {
            return Err(TermError::NotGround(self.to_string()));
        }
        Ok(self.free_names_unchecked())
    }

    fn free_names_unchecked(&self) -> BTreeSet<Atom> {
        match self {
            Term::Atom(a) => BTreeSet::from([a.clone()]),
            Term::Susp(..) => BTreeSet::new(),
            Term::Abs(a, body) => {
                let mut names = body.free_names_unchecked();
                names.remove(a);
                names
            }
            Term::App(_, args) => args.iter().flat_map(|t| t.free_names_unchecked()).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 0,
            Term::Abs(_, body) => 1 + body.depth(),
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 1,
            Term::Abs(_, body) => 1 + body.size(),
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        match self {
            Term::Atom(_) | Term::Susp(..) => BTreeSet::new(),
            Term::Abs(_, body) => body.symbols(),
            Term::App(f, args) => {
                let mut out: BTreeSet<Symbol> = args.iter().flat_map(Term::symbols).collect();
                out.insert(f.clone());
                out
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Susp(p, x) if p.is_id() => write!(f, "{x}"),
            Term::Susp(p, x) => write!(f, "{p}.{x}"),
            Term::Abs(a, body) => write!(f, "[{a}]{body}"),
            Term::App(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite map from unknowns to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<Var, Term>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn insert(&mut self, x: Var, t: Term) {
        self.0.insert(x, t);
    }

    pub fn with(mut self, x: &str, t: Term) -> Subst {
        self.insert(Var::new(x), t);
        self
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X ↦ π·σ(X)`: the substitution transported along `pi`.
    pub fn act(&self, pi: &Perm) -> Subst {
        Subst(self.0.iter().map(|(x, t)| (x.clone(), t.act(pi))).collect())
    }

    /// Sequential composition: apply `self`, then `then`.
    pub fn then(&self, then: &Subst) -> Subst {
        let mut out: BTreeMap<Var, Term> =
            self.0.iter().map(|(x, t)| (x.clone(), t.subst(then))).collect();
        for (x, t) in &then.0 {
            out.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Subst(out)
    }
}

impl FromIterator<(Var, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x} := {t}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Atom {
        Atom::user(s)
    }

    fn sw(a: &str, b: &str) -> Perm {
        Perm::swap(at(a), at(b))
    }

    #[test]
    fn action_renames_binders_and_atoms() {
        let t = Term::abs(at("a"), Term::atom("a"));
        assert_eq!(t.act(&sw("a", "b")), Term::abs(at("b"), Term::atom("b")));
        let f = Term::app("f", vec![Term::atom("a"), Term::atom("c")]);
        assert_eq!(
            f.act(&sw("a", "b")),
            Term::app("f", vec![Term::atom("b"), Term::atom("c")])
        );
    }

    #[test]
    fn action_composes_into_suspensions() {
        let x = Term::susp(sw("c", "d"), Var::new("X"));
        assert_eq!(
            x.act(&sw("a", "b")),
            Term::susp(sw("a", "b").compose(&sw("c", "d")), Var::new("X"))
        );
    }

    #[test]
    fn substitution_is_capturing_and_applies_suspended_perm() {
        let sigma = Subst::new().with("X", Term::atom("a"));
        assert_eq!(
            Term::susp(sw("a", "b"), Var::new("X")).subst(&sigma),
            Term::atom("b")
        );
        let t = Term::abs(at("a"), Term::var("X"));
        assert_eq!(t.subst(&sigma), Term::abs(at("a"), Term::atom("a")));
        let sigma_b = Subst::new().with("X", Term::atom("b"));
        assert_eq!(Term::atom("a").subst(&sigma_b), Term::atom("a"));
    }

    #[test]
    fn occurrence_sets() {
        let bound = Term::abs(at("a"), Term::atom("a"));
        assert!(bound.free_names().unwrap().is_empty());
        let f = Term::app(
            "f",
            vec![Term::atom("a"), Term::abs(at("b"), Term::atom("b"))],
        );
        assert_eq!(f.free_names().unwrap(), BTreeSet::from([at("a")]));
        let s = Term::susp(sw("a", "b"), Var::new("X"));
        assert_eq!(s.atoms(), BTreeSet::from([at("a"), at("b")]));
        assert_eq!(s.vars(), BTreeSet::from([Var::new("X")]));
        assert!(matches!(s.free_names(), Err(TermError::NotGround(_))));
    }

    #[test]
    fn identity_suspension_prints_bare() {
        assert_eq!(Term::var("X").to_string(), "X");
        assert_eq!(
            Term::susp(sw("a", "b"), Var::new("X")).to_string(),
            "(a b).X"
        );
    }
}
