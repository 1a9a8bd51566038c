//! Freshness and α-equivalence with freshness contexts, optionally modulo
//! commutativity.

use std::collections::BTreeSet;
use std::fmt;

use crate::derivation::{Derivation, EqTheory, Verdict};
use crate::permgroups::ds;
use crate::terms::{Atom, Perm, Term, Var};

/// A finite set of primitive constraints `a#X`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreshContext(BTreeSet<(Atom, Var)>);

impl FreshContext {
    pub fn new() -> FreshContext {
        FreshContext::default()
    }

    pub fn insert(&mut self, a: Atom, x: Var) {
        self.0.insert((a, x));
    }

    pub fn with(mut self, a: &str, x: &str) -> FreshContext {
        self.insert(Atom::user(a), Var::new(x));
        self
    }

    pub fn contains(&self, a: &Atom, x: &Var) -> bool {
        self.0.contains(&(a.clone(), x.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Atom, Var)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Atoms `a` with `a#X` in the context.
    pub fn fresh_for(&self, x: &Var) -> BTreeSet<Atom> {
        self.0
            .iter()
            .filter(|(_, y)| y == x)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.0.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }

    /// `{π(a)#X | a#X ∈ Δ}`.
    pub fn act(&self, pi: &Perm) -> FreshContext {
        self.0.iter().map(|(a, x)| (pi.apply(a), x.clone())).collect()
    }

    pub fn union(&self, other: &FreshContext) -> FreshContext {
        self.0.union(&other.0).cloned().collect()
    }
}

impl FromIterator<(Atom, Var)> for FreshContext {
    fn from_iter<I: IntoIterator<Item = (Atom, Var)>>(iter: I) -> Self {
        FreshContext(iter.into_iter().collect())
    }
}

impl fmt::Display for FreshContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, x)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}#{x}")?;
        }
        Ok(())
    }
}

/// Body of a freshness-system judgement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreshBody {
    Fresh(Atom, Term),
    Alpha(Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshJudgement {
    pub context: FreshContext,
    pub body: FreshBody,
}

impl fmt::Display for FreshBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreshBody::Fresh(a, t) => write!(f, "{a} # {t}"),
            FreshBody::Alpha(s, t) => write!(f, "{s} ~ {t}"),
        }
    }
}

impl fmt::Display for FreshJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.body)
        } else {
            write!(f, "{} |- {}", self.context, self.body)
        }
    }
}

fn concl(delta: &FreshContext, body: FreshBody) -> String {
    FreshJudgement {
        context: delta.clone(),
        body,
    }
    .to_string()
}

/// Decides `Δ ⊢ a # t`.
pub fn check_fresh(delta: &FreshContext, a: &Atom, t: &Term) -> Verdict {
    Verdict::from_result(fresh(delta, a, t))
}

fn fresh(delta: &FreshContext, a: &Atom, t: &Term) -> Result<Derivation, String> {
    let c = || concl(delta, FreshBody::Fresh(a.clone(), t.clone()));
    match t {
        Term::Atom(b) if b == a => Err(format!("{a} # {a}: an atom is never fresh for itself")),
        Term::Atom(_) => Ok(Derivation::leaf("#a", c())),
        Term::Susp(pi, x) => {
            let b = pi.inverse().apply(a);
            if delta.contains(&b, x) {
                Ok(Derivation::leaf("#var", c()))
            } else {
                Err(format!("{a} # {t}: {b}#{x} is not in the context"))
            }
        }
        Term::Abs(b, _) if b == a => Ok(Derivation::leaf("#[a]", c())),
        Term::Abs(_, body) => Ok(Derivation::node("#abs", c(), vec![fresh(delta, a, body)?])),
        Term::App(_, args) => {
            let premises = args
                .iter()
                .map(|u| fresh(delta, a, u))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Derivation::node("#f", c(), premises))
        }
    }
}

/// Decides `Δ ⊢ s ≈ t`, or `Δ ⊢ s ≈_C t` when `theory` is commutative.
pub fn check_alpha(delta: &FreshContext, s: &Term, t: &Term, theory: &EqTheory) -> Verdict {
    Verdict::from_result(alpha(delta, s, t, theory))
}

fn alpha(delta: &FreshContext, s: &Term, t: &Term, theory: &EqTheory) -> Result<Derivation, String> {
    let c = || concl(delta, FreshBody::Alpha(s.clone(), t.clone()));
    match (s, t) {
        (Term::Atom(a), Term::Atom(b)) => {
            if a == b {
                Ok(Derivation::leaf("~a", c()))
            } else {
                Err(format!("{a} ~ {b}: distinct atoms"))
            }
        }
        (Term::Susp(p, x), Term::Susp(q, y)) if x == y => {
            let missing: Vec<Atom> = ds(p, q)
                .into_iter()
                .filter(|a| !delta.contains(a, x))
                .collect();
            if missing.is_empty() {
                Ok(Derivation::leaf("~var", c()))
            } else {
                let names: Vec<String> = missing.iter().map(|a| format!("{a}#{x}")).collect();
                Err(format!("{s} ~ {t}: needs {}", names.join(", ")))
            }
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => {
            Ok(Derivation::node("~[a]", c(), vec![alpha(delta, s1, t1, theory)?]))
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) => {
            let swapped = t1.act(&Perm::swap(a.clone(), b.clone()));
            let left = alpha(delta, s1, &swapped, theory)?;
            let right = fresh(delta, a, t1)?;
            Ok(Derivation::node("~ab", c(), vec![left, right]))
        }
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            let direct: Result<Vec<_>, String> = xs
                .iter()
                .zip(ys)
                .map(|(u, v)| alpha(delta, u, v, theory))
                .collect();
            match direct {
                Ok(premises) => Ok(Derivation::node("~f", c(), premises)),
                Err(e) if theory.is_commutative(f) && xs.len() == 2 => {
                    let l = alpha(delta, &xs[0], &ys[1], theory).map_err(|_| e.clone())?;
                    let r = alpha(delta, &xs[1], &ys[0], theory).map_err(|_| e.clone())?;
                    Ok(Derivation::node("~fC", c(), vec![l, r]))
                }
                Err(e) => Err(e),
            }
        }
        _ => Err(format!("{s} ~ {t}: head symbols differ")),
    }
}
