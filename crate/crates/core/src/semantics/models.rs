use std::collections::BTreeSet;

use super::canon::{canon, CanonTheory};
use super::{SemError, SigmaAlgebra};
use crate::terms::{Atom, Parser, Perm, Signature, Symbol, Term};

/// The one-point algebra. Every theory holds in it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Singleton;

impl SigmaAlgebra for Singleton {
    type Elem = ();

    fn name(&self) -> &'static str {
        "singleton"
    }

    fn act(&self, _: &Perm, _: &()) {}

    fn atom(&self, _: &Atom) {}

    fn abs(&self, _: &Atom, _: &()) {}

    fn app(&self, _: &Symbol, _: &[()]) {}

    fn supp(&self, _: &()) -> BTreeSet<Atom> {
        BTreeSet::new()
    }

    fn is_strong(&self) -> bool {
        true
    }

    fn show(&self, _: &()) -> String {
        "⋆".into()
    }

    fn parse_elem(&self, text: &str, _: &Signature) -> Result<(), SemError> {
        match text.trim() {
            "⋆" | "*" => Ok(()),
            other => Err(bad("singleton", format!("expected ⋆, got `{other}`"))),
        }
    }
}

/// Finite sets of atoms. Abstraction removes the bound atom and every
/// term-former is intersection, so `f()` is the empty set.
///
/// Not strong: `(a b)` fixes `{a, b}` without fixing `a` or `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PFin;

impl SigmaAlgebra for PFin {
    type Elem = BTreeSet<Atom>;

    fn name(&self) -> &'static str {
        "pfin"
    }

    fn act(&self, pi: &Perm, x: &Self::Elem) -> Self::Elem {
        x.iter().map(|a| pi.apply(a)).collect()
    }

    fn atom(&self, a: &Atom) -> Self::Elem {
        BTreeSet::from([a.clone()])
    }

    fn abs(&self, a: &Atom, x: &Self::Elem) -> Self::Elem {
        let mut out = x.clone();
        out.remove(a);
        out
    }

    fn app(&self, _: &Symbol, args: &[Self::Elem]) -> Self::Elem {
        let Some((first, rest)) = args.split_first() else {
            return BTreeSet::new();
        };
        first
            .iter()
            .filter(|a| rest.iter().all(|b| b.contains(*a)))
            .cloned()
            .collect()
    }

    fn supp(&self, x: &Self::Elem) -> BTreeSet<Atom> {
        x.clone()
    }

    fn is_strong(&self) -> bool {
        false
    }

    fn show(&self, x: &Self::Elem) -> String {
        let names: Vec<String> = x.iter().map(Atom::to_string).collect();
        format!("{{{}}}", names.join(", "))
    }

    fn parse_elem(&self, text: &str, _: &Signature) -> Result<Self::Elem, SemError> {
        let text = text.trim();
        if text == "∅" {
            return Ok(BTreeSet::new());
        }
        let inner = text
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad("pfin", format!("expected a set like {{a, b}}, got `{text}`")))?;
        inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| user_atom("pfin", s))
            .collect()
    }
}

/// Words over pairwise-distinct atoms. Abstraction deletes the bound
/// letter; term-formers concatenate and drop later repeats.
///
/// Strong: a permutation fixes a word only if it fixes each letter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Words;

impl SigmaAlgebra for Words {
    type Elem = Vec<Atom>;

    fn name(&self) -> &'static str {
        "words"
    }

    fn act(&self, pi: &Perm, x: &Self::Elem) -> Self::Elem {
        x.iter().map(|a| pi.apply(a)).collect()
    }

    fn atom(&self, a: &Atom) -> Self::Elem {
        vec![a.clone()]
    }

    fn abs(&self, a: &Atom, x: &Self::Elem) -> Self::Elem {
        x.iter().filter(|b| *b != a).cloned().collect()
    }

    fn app(&self, _: &Symbol, args: &[Self::Elem]) -> Self::Elem {
        let mut seen = BTreeSet::new();
        args.iter()
            .flatten()
            .filter(|a| seen.insert((*a).clone()))
            .cloned()
            .collect()
    }

    fn supp(&self, x: &Self::Elem) -> BTreeSet<Atom> {
        x.iter().cloned().collect()
    }

    fn is_strong(&self) -> bool {
        true
    }

    fn show(&self, x: &Self::Elem) -> String {
        if x.is_empty() {
            return "ε".into();
        }
        let names: Vec<String> = x.iter().map(Atom::to_string).collect();
        if x.iter().all(|a| !a.is_fresh() && is_letter_digits(a.name())) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    fn parse_elem(&self, text: &str, _: &Signature) -> Result<Self::Elem, SemError> {
        parse_words(text)
    }
}

/// Reads `abc`, `a1a2b` (letter followed by digits) or space-separated
/// names. `ε` and the empty string are the empty word.
pub fn parse_words(text: &str) -> Result<Vec<Atom>, SemError> {
    let text = text.trim();
    let names: Vec<String> = if text.is_empty() || text == "ε" {
        Vec::new()
    } else if text.contains(char::is_whitespace) {
        text.split_whitespace().map(String::from).collect()
    } else {
        let mut names: Vec<String> = Vec::new();
        for c in text.chars() {
            if c.is_ascii_digit() {
                match names.last_mut() {
                    Some(last) => last.push(c),
                    None => return Err(bad("words", format!("`{text}` starts with a digit"))),
                }
            } else {
                names.push(c.to_string());
            }
        }
        names
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(names.len());
    for n in names {
        let a = user_atom("words", &n)?;
        if !seen.insert(a.clone()) {
            return Err(bad("words", format!("letter {a} repeats in `{text}`")));
        }
        out.push(a);
    }
    Ok(out)
}

fn is_letter_digits(name: &str) -> bool {
    let mut cs = name.chars();
    cs.next().is_some_and(|c| c.is_lowercase()) && cs.all(|c| c.is_ascii_digit())
}

fn user_atom(model: &str, name: &str) -> Result<Atom, SemError> {
    if name.chars().next().is_some_and(|c| c.is_lowercase())
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        Ok(Atom::user(name))
    } else {
        Err(bad(model, format!("`{name}` is not an atom")))
    }
}

fn bad(model: &str, reason: String) -> SemError {
    SemError::BadValue {
        model: model.into(),
        reason,
    }
}

/// Ground terms modulo α (and optionally C or A), represented by their
/// canonical forms. The support of a class is the free names of its
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundMod {
    theory: CanonTheory,
}

impl GroundMod {
    pub fn alpha() -> GroundMod {
        GroundMod {
            theory: CanonTheory::Alpha,
        }
    }

    /// Commutativity for the commutative symbols of `sig`.
    pub fn alpha_c(sig: &Signature) -> GroundMod {
        GroundMod {
            theory: CanonTheory::AlphaC(sig.clone()),
        }
    }

    /// Associativity of the binary symbol `f`.
    pub fn alpha_a(f: &str) -> GroundMod {
        GroundMod {
            theory: CanonTheory::AlphaA(Symbol::new(f)),
        }
    }

    pub fn theory(&self) -> &CanonTheory {
        &self.theory
    }

    pub fn canon(&self, g: &Term) -> Term {
        canon(&self.theory, g)
    }

    /// The class of a ground term.
    pub fn class_of(&self, g: &Term) -> Result<Term, SemError> {
        if !g.is_ground() {
            return Err(bad(self.name(), format!("`{g}` is not ground")));
        }
        Ok(self.canon(g))
    }
}

impl SigmaAlgebra for GroundMod {
    type Elem = Term;

    fn name(&self) -> &'static str {
        match self.theory {
            CanonTheory::Alpha => "ground-alpha",
            CanonTheory::AlphaC(_) => "ground-alpha-c",
            CanonTheory::AlphaA(_) => "ground-alpha-a",
        }
    }

    fn act(&self, pi: &Perm, x: &Term) -> Term {
        self.canon(&x.act(pi))
    }

    fn atom(&self, a: &Atom) -> Term {
        Term::Atom(a.clone())
    }

    fn abs(&self, a: &Atom, x: &Term) -> Term {
        self.canon(&Term::Abs(a.clone(), Box::new(x.clone())))
    }

    fn app(&self, f: &Symbol, args: &[Term]) -> Term {
        self.canon(&Term::App(f.clone(), args.to_vec()))
    }

    fn supp(&self, x: &Term) -> BTreeSet<Atom> {
        x.free_names().unwrap_or_default()
    }

    fn is_strong(&self) -> bool {
        !matches!(self.theory, CanonTheory::AlphaC(_))
    }

    fn show(&self, x: &Term) -> String {
        x.to_string()
    }

    fn parse_elem(&self, text: &str, sig: &Signature) -> Result<Term, SemError> {
        let parsed = Parser::new(text, sig).and_then(|p| {
            let mut p = p.allow_fresh(true);
            let t = p.term()?;
            p.finish()?;
            Ok(t)
        });
        let t = parsed.map_err(|e| bad(self.name(), e.to_string()))?;
        self.class_of(&t)
    }
}
