use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::atom::Symbol;
use super::term::Term;
use super::TermError;

/// Declared term-formers. A name may be declared at several arities; each
/// `(name, arity)` pair is its own term-former.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Symbol, BTreeSet<usize>>,
    commutative: BTreeSet<Symbol>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// The signature used when no file is given: the lambda-calculus
    /// formers plus the symbols appearing in the worked examples.
    pub fn builtin() -> Signature {
        let mut sig = Signature::new();
        for (name, arity, comm) in [
            ("lam", 1, false),
            ("app", 2, false),
            ("+", 2, true),
            ("f^C", 2, true),
            ("f", 1, false),
            ("f", 2, false),
            ("g", 2, false),
            ("h", 1, false),
            ("*", 2, false),
            ("0", 0, false),
            ("pl", 2, false),
            ("pr", 2, false),
        ] {
            sig.declare(name, arity, comm).expect("builtin signature is well-formed");
        }
        sig
    }

    pub fn declare(&mut self, name: &str, arity: usize, commutative: bool) -> Result<(), TermError> {
        let sym = Symbol::new(name);
        if commutative {
            if arity != 2 {
                return Err(TermError::Signature(format!(
                    "commutative symbol {name} must have arity 2, not {arity}"
                )));
            }
            self.commutative.insert(sym.clone());
        }
        self.arities.entry(sym).or_default().insert(arity);
        Ok(())
    }

    /// Parses `symbol/arity [comm]` lines. Blank lines and lines starting
    /// with `--` are skipped.
    pub fn parse(text: &str) -> Result<Signature, TermError> {
        let mut sig = Signature::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with("--") {
                continue;
            }
            let bad = || TermError::Signature(format!("line {}: expected `symbol/arity [comm]`, got `{line}`", lineno + 1));
            let mut words = line.split_whitespace();
            let decl = words.next().ok_or_else(bad)?;
            let (name, arity) = decl.rsplit_once('/').ok_or_else(bad)?;
            let arity: usize = arity.parse().map_err(|_| bad())?;
            let comm = match words.next() {
                None => false,
                Some("comm") => true,
                Some(_) => return Err(bad()),
            };
            if name.is_empty() || words.next().is_some() {
                return Err(bad());
            }
            sig.declare(name, arity, comm)?;
        }
        Ok(sig)
    }

    pub fn has(&self, f: &Symbol, arity: usize) -> bool {
        self.arities.get(f).is_some_and(|a| a.contains(&arity))
    }

    pub fn is_symbol(&self, f: &Symbol) -> bool {
        self.arities.contains_key(f)
    }

    pub fn is_commutative(&self, f: &Symbol) -> bool {
        self.commutative.contains(f)
    }

    pub fn commutative_symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.commutative.iter()
    }

    pub fn formers(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.arities
            .iter()
            .flat_map(|(f, arities)| arities.iter().map(move |&n| (f, n)))
    }

    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::Atom(_) | Term::Susp(..) => Ok(()),
            Term::Abs(_, body) => self.check_term(body),
            Term::App(f, args) => {
                if !self.has(f, args.len()) {
                    return Err(TermError::Arity {
                        symbol: f.to_string(),
                        arity: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sym, arity) in self.formers() {
            if self.is_commutative(sym) {
                writeln!(f, "{sym}/{arity} comm")?;
            } else {
                writeln!(f, "{sym}/{arity}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declaration_lines() {
        let sig = Signature::parse("f/2\n-- comment\n\n+/2 comm\nzero/0\n").unwrap();
        assert!(sig.has(&Symbol::new("f"), 2));
        assert!(sig.is_commutative(&Symbol::new("+")));
        assert!(sig.has(&Symbol::new("zero"), 0));
        assert!(Signature::parse("g/1 comm").is_err());
        assert!(Signature::parse("g").is_err());
        let round = Signature::parse(&sig.to_string()).unwrap();
        assert_eq!(round, sig);
    }

    #[test]
    fn arity_is_checked() {
        let sig = Signature::builtin();
        assert!(sig.check_term(&Term::app("h", vec![Term::atom("a")])).is_ok());
        assert!(matches!(
            sig.check_term(&Term::app("h", vec![])),
            Err(TermError::Arity { .. })
        ));
    }
}
