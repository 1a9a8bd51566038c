use crate::terms::{Atom, Perm, Signature, Symbol, Term};

/// Which equational theory a ground representative is taken modulo.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonTheory {
    Alpha,
    /// Also modulo commutativity of the commutative symbols of the signature.
    AlphaC(Signature),
    /// Also modulo associativity of one binary symbol.
    AlphaA(Symbol),
}

/// The reserved binder for abstraction depth `d`.
pub fn beta(d: usize) -> Atom {
    Atom::fresh(&format!("bnd{d}"))
}

pub fn canon(theory: &CanonTheory, g: &Term) -> Term {
    match theory {
        CanonTheory::Alpha => canon_alpha(g),
        CanonTheory::AlphaC(sig) => canon_c(sig, g),
        CanonTheory::AlphaA(f) => canon_assoc(f, g),
    }
}

/// Renames the binder at abstraction depth `d` to `beta(d)`, outermost first.
pub fn canon_alpha(g: &Term) -> Term {
    rename(g, 0, &|_, args| args)
}

/// `canon_alpha`, then the arguments of every commutative symbol sorted.
pub fn canon_c(sig: &Signature, g: &Term) -> Term {
    rename(g, 0, &|f, mut args| {
        if sig.is_commutative(f) && args.len() == 2 {
            args.sort();
        }
        args
    })
}

/// `canon_alpha`, then every chain of `f` re-associated to the right.
pub fn canon_assoc(f: &Symbol, g: &Term) -> Term {
    let t = canon_alpha(g);
    reassoc(f, &t)
}

fn rename(g: &Term, depth: usize, post: &impl Fn(&Symbol, Vec<Term>) -> Vec<Term>) -> Term {
    match g {
        Term::Atom(_) | Term::Susp(..) => g.clone(),
        Term::Abs(a, body) => {
            let b = beta(depth);
            let body = body.act(&Perm::swap(a.clone(), b.clone()));
            Term::Abs(b, Box::new(rename(&body, depth + 1, post)))
        }
        Term::App(f, args) => {
            let args = args.iter().map(|t| rename(t, depth, post)).collect();
            Term::App(f.clone(), post(f, args))
        }
    }
}

fn reassoc(f: &Symbol, t: &Term) -> Term {
    match t {
        Term::Atom(_) | Term::Susp(..) => t.clone(),
        Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(reassoc(f, body))),
        Term::App(g, args) if g == f && args.len() == 2 => {
            let mut operands = Vec::new();
            flatten(f, t, &mut operands);
            let mut operands: Vec<Term> = operands.into_iter().map(|u| reassoc(f, u)).collect();
            let mut acc = operands.pop().expect("a chain has operands");
            while let Some(u) = operands.pop() {
                acc = Term::App(f.clone(), vec![u, acc]);
            }
            acc
        }
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|u| reassoc(f, u)).collect()),
    }
}

fn flatten<'t>(f: &Symbol, t: &'t Term, out: &mut Vec<&'t Term>) {
    match t {
        Term::App(g, args) if g == f && args.len() == 2 => {
            flatten(f, &args[0], out);
            flatten(f, &args[1], out);
        }
        _ => out.push(t),
    }
}
