use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Which supply an atom was drawn from.
///
/// `Fresh` atoms are produced by engines (and by `new` binders in strong
/// judgements); ordinary input can never spell one, so they cannot collide
/// with user atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Namespace {
    User,
    Fresh,
}

/// An object-level name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    ns: Namespace,
    name: Arc<str>,
}

impl Atom {
    pub fn user(name: &str) -> Atom {
        Atom {
            ns: Namespace::User,
            name: Arc::from(name),
        }
    }

    pub fn fresh(name: &str) -> Atom {
        Atom {
            ns: Namespace::Fresh,
            name: Arc::from(name),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn namespace(&self) -> Namespace {
        self.ns
    }

    pub fn is_fresh(&self) -> bool {
        self.ns == Namespace::Fresh
    }
}

/// Fresh atoms print with a `~` sigil so they can never be confused with a
/// user atom of the same name.
impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ns {
            Namespace::User => f.write_str(&self.name),
            Namespace::Fresh => write!(f, "~{}", self.name),
        }
    }
}

/// A meta-level unknown.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A term-former name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Call-scoped generator of fresh-namespace atoms.
///
/// Names are `<prefix><n>`. A name already used by an avoided atom, in
/// either namespace, is never handed out, so generated atoms can be printed
/// without their namespace marker.
#[derive(Clone, Debug)]
pub struct FreshSupply {
    prefix: String,
    next: usize,
    avoid: BTreeSet<String>,
}

impl Default for FreshSupply {
    fn default() -> Self {
        FreshSupply::new("c")
    }
}

impl FreshSupply {
    pub fn new(prefix: &str) -> FreshSupply {
        FreshSupply {
            prefix: prefix.to_string(),
            next: 1,
            avoid: BTreeSet::new(),
        }
    }

    pub fn avoid<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Atom>) {
        self.avoid.extend(atoms.into_iter().map(|a| a.name().to_string()));
    }

    pub fn next_atom(&mut self) -> Atom {
        loop {
            let name = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.avoid.insert(name.clone()) {
                return Atom::fresh(&name);
            }
        }
    }
}
