//! Nominal Σ-algebras, interpretation of terms, and validity of judgements.

mod canon;
mod models;
mod strong_axioms;
mod support;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::deriv_fix::{FixBody, FixContext, FixJudgement};
use crate::deriv_fresh::{FreshBody, FreshContext, FreshJudgement};
use crate::terms::{Atom, Perm, Signature, Symbol, Term, Var};

pub use canon::{beta, canon, canon_alpha, canon_assoc, canon_c, CanonTheory};
pub use models::{parse_words, GroundMod, PFin, Singleton, Words};
pub use strong_axioms::{classify_axioms, is_strong_axiom, standard_axioms, var_positions, StrongAxiomVerdict};
pub use support::{strong_support_check, SupportCheck, DEFAULT_UNIVERSE_BOUND};
pub use text::{ModelKind, ValidityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("universe of {size} atoms exceeds the bound {bound}")]
    UniverseBoundExceeded { size: usize, bound: usize },
    #[error("bad value for model {model}: {reason}")]
    BadValue { model: String, reason: String },
    #[error("{0}")]
    Syntax(String),
    #[error("unknown model `{0}`; expected singleton, pfin, words, ground-alpha or ground-alpha-c")]
    UnknownModel(String),
}

/// A nominal Σ-algebra: a carrier with a permutation action and equivariant
/// interpretations of atoms, abstraction and term-formers.
pub trait SigmaAlgebra {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> &'static str;
    fn act(&self, pi: &Perm, x: &Self::Elem) -> Self::Elem;
    fn atom(&self, a: &Atom) -> Self::Elem;
    fn abs(&self, a: &Atom, x: &Self::Elem) -> Self::Elem;
    fn app(&self, f: &Symbol, args: &[Self::Elem]) -> Self::Elem;
    fn supp(&self, x: &Self::Elem) -> BTreeSet<Atom>;
    /// Whether every element's support is strong.
    fn is_strong(&self) -> bool;
    fn show(&self, x: &Self::Elem) -> String;
    fn parse_elem(&self, text: &str, sig: &Signature) -> Result<Self::Elem, SemError>;

    /// Value of unknowns missing from a lenient valuation.
    fn default_elem(&self) -> Self::Elem {
        self.atom(&Atom::user("a1"))
    }
}

/// Unknowns to carrier elements. A lenient valuation sends unmapped
/// unknowns to the model's default element; a strict one reports them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation<E> {
    map: BTreeMap<Var, E>,
    strict: bool,
}

impl<E: Clone> Default for Valuation<E> {
    fn default() -> Self {
        Valuation {
            map: BTreeMap::new(),
            strict: false,
        }
    }
}

impl<E: Clone> Valuation<E> {
    pub fn new() -> Valuation<E> {
        Valuation::default()
    }

    pub fn strict(mut self) -> Valuation<E> {
        self.strict = true;
        self
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn insert(&mut self, x: Var, e: E) {
        self.map.insert(x, e);
    }

    pub fn with(mut self, x: &str, e: E) -> Valuation<E> {
        self.insert(Var::new(x), e);
        self
    }

    pub fn get(&self, x: &Var) -> Option<&E> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &E)> {
        self.map.iter()
    }
}

impl<E: Clone> FromIterator<(Var, E)> for Valuation<E> {
    fn from_iter<I: IntoIterator<Item = (Var, E)>>(iter: I) -> Self {
        Valuation {
            map: iter.into_iter().collect(),
            strict: false,
        }
    }
}

fn lookup<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, x: &Var) -> Result<M::Elem, SemError> {
    match val.get(x) {
        Some(e) => Ok(e.clone()),
        None if val.is_strict() => Err(SemError::UnboundVariable(x.to_string())),
        None => Ok(m.default_elem()),
    }
}

/// `⟦t⟧ς`
pub fn interpret<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, t: &Term) -> Result<M::Elem, SemError> {
    Ok(match t {
        Term::Atom(a) => m.atom(a),
        Term::Susp(pi, x) => m.act(pi, &lookup(m, val, x)?),
        Term::Abs(a, body) => m.abs(a, &interpret(m, val, body)?),
        Term::App(f, args) => {
            let xs = args
                .iter()
                .map(|u| interpret(m, val, u))
                .collect::<Result<Vec<_>, _>>()?;
            m.app(f, &xs)
        }
    })
}

/// `π ⋏_sem x`
pub fn fix_sem<M: SigmaAlgebra>(m: &M, pi: &Perm, x: &M::Elem) -> bool {
    m.act(pi, x) == *x
}

/// `⟦Υ⟧ς` is valid when every `π ⋏ X` holds semantically.
pub fn context_valid<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, ctx: &FixContext) -> Result<bool, SemError> {
    for (pi, x) in ctx.iter() {
        if !fix_sem(m, pi, &lookup(m, val, x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truth of the body alone.
pub fn body_holds<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, body: &FixBody) -> Result<bool, SemError> {
    Ok(match body {
        FixBody::Fix(pi, t) => fix_sem(m, pi, &interpret(m, val, t)?),
        FixBody::Eq(s, t) => interpret(m, val, s)? == interpret(m, val, t)?,
    })
}

/// Validity of `Υ ⊢ body` under one valuation.
pub fn judgement_valid<M: SigmaAlgebra>(m: &M, val: &Valuation<M::Elem>, j: &FixJudgement) -> Result<bool, SemError> {
    Ok(!context_valid(m, val, &j.context)? || body_holds(m, val, &j.body)?)
}

/// Every `a # X` of `Δ` holds semantically.
pub fn fresh_context_valid<M: SigmaAlgebra>(
    m: &M,
    val: &Valuation<M::Elem>,
    delta: &FreshContext,
) -> Result<bool, SemError> {
    for (a, x) in delta.iter() {
        if m.supp(&lookup(m, val, x)?).contains(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validity of a freshness judgement, reading `a # x` as `a ∉ supp(x)`.
pub fn fresh_judgement_valid<M: SigmaAlgebra>(
    m: &M,
    val: &Valuation<M::Elem>,
    j: &FreshJudgement,
) -> Result<bool, SemError> {
    if !fresh_context_valid(m, val, &j.context)? {
        return Ok(true);
    }
    Ok(match &j.body {
        FreshBody::Fresh(a, t) => !m.supp(&interpret(m, val, t)?).contains(a),
        FreshBody::Alpha(s, t) => interpret(m, val, s)? == interpret(m, val, t)?,
    })
}
