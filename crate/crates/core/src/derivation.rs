//! Verdicts and rule-labelled derivation trees shared by the engines.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::terms::{Signature, Symbol};

/// A derivation tree with textual conclusions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: String,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: &str, conclusion: impl Into<String>) -> Derivation {
        Derivation::node(rule, conclusion, Vec::new())
    }

    pub fn node(rule: &str, conclusion: impl Into<String>, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule: rule.to_string(),
            conclusion: conclusion.into(),
            premises,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Rule labels, pre-order.
    pub fn rules(&self) -> Vec<&str> {
        let mut out = vec![self.rule.as_str()];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// Indented rendering, conclusion first, premises below.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  ({})\n", self.conclusion, self.rule));
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Outcome of a decision procedure: the answer, a derivation when one was
/// built, and the first failing step otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<D = Derivation> {
    pub derivable: bool,
    pub derivation: Option<D>,
    pub failure: Option<String>,
}

impl<D> Verdict<D> {
    pub fn yes(derivation: Option<D>) -> Verdict<D> {
        Verdict {
            derivable: true,
            derivation,
            failure: None,
        }
    }

    pub fn no(reason: impl Into<String>) -> Verdict<D> {
        Verdict {
            derivable: false,
            derivation: None,
            failure: Some(reason.into()),
        }
    }

    pub fn from_result(r: Result<D, String>) -> Verdict<D> {
        match r {
            Ok(d) => Verdict::yes(Some(d)),
            Err(e) => Verdict::no(e),
        }
    }
}

/// Equational theory for α-equality: plain, or with commutativity of the
/// listed binary symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum EqTheory {
    #[default]
    Core,
    C(BTreeSet<Symbol>),
}

impl EqTheory {
    /// Commutativity for every commutative symbol of `sig`.
    pub fn c_of(sig: &Signature) -> EqTheory {
        EqTheory::C(sig.commutative_symbols().cloned().collect())
    }

    pub fn is_commutative(&self, f: &Symbol) -> bool {
        match self {
            EqTheory::Core => false,
            EqTheory::C(syms) => syms.contains(f),
        }
    }

    pub fn is_c(&self) -> bool {
        matches!(self, EqTheory::C(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            EqTheory::Core => "core",
            EqTheory::C(_) => "C",
        }
    }
}
