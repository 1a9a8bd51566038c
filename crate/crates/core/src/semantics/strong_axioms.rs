use std::collections::BTreeSet;

use crate::deriv_fix::{Axiom, FixContext};
use crate::terms::{parse_term, Signature, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongAxiomVerdict {
    pub strong: bool,
    pub reason: String,
}

impl StrongAxiomVerdict {
    fn yes() -> StrongAxiomVerdict {
        StrongAxiomVerdict {
            strong: true,
            reason: "first-order, empty context, well-ordered and compatible".into(),
        }
    }

    fn no(reason: String) -> StrongAxiomVerdict {
        StrongAxiomVerdict { strong: false, reason }
    }
}

/// Occurrences of unknowns with their positions (1-based argument indices),
/// in leftmost-outermost order.
pub fn var_positions(t: &Term) -> Vec<(Var, Vec<usize>)> {
    let mut out = Vec::new();
    walk(t, &mut Vec::new(), &mut out);
    out
}

fn walk(t: &Term, pos: &mut Vec<usize>, out: &mut Vec<(Var, Vec<usize>)>) {
    match t {
        Term::Atom(_) => {}
        Term::Susp(_, x) => out.push((x.clone(), pos.clone())),
        Term::Abs(_, body) => {
            pos.push(1);
            walk(body, pos, out);
            pos.pop();
        }
        Term::App(_, args) => {
            for (i, u) in args.iter().enumerate() {
                pos.push(i + 1);
                walk(u, pos, out);
                pos.pop();
            }
        }
    }
}

/// `X <_t Y` for distinct unknowns.
fn order(t: &Term) -> BTreeSet<(Var, Var)> {
    let occ = var_positions(t);
    let mut out = BTreeSet::new();
    for (x, p) in &occ {
        for (y, q) in &occ {
            if x != y && p < q {
                out.insert((x.clone(), y.clone()));
            }
        }
    }
    out
}

fn first_order_violation(t: &Term) -> Option<String> {
    match t {
        Term::Atom(a) => Some(format!("atom {a} occurs")),
        Term::Susp(p, x) if !p.is_id() => Some(format!("suspension {p}.{x} occurs")),
        Term::Susp(..) => None,
        Term::Abs(a, _) => Some(format!("abstraction over {a} occurs")),
        Term::App(_, args) => args.iter().find_map(first_order_violation),
    }
}

fn well_order_violation(t: &Term) -> Option<(Var, Var)> {
    let ord = order(t);
    ord.iter()
        .find(|(x, y)| ord.contains(&(y.clone(), x.clone())))
        .cloned()
}

/// Classifies an axiom as strong or not, giving the first failed condition.
/// Repeated occurrences of one unknown do not break well-orderedness.
pub fn is_strong_axiom(ax: &Axiom) -> StrongAxiomVerdict {
    if !ax.context.is_empty() {
        return StrongAxiomVerdict::no(format!("condition 1: context {} is not empty", ax.context));
    }
    for (side, t) in [("left", &ax.lhs), ("right", &ax.rhs)] {
        if let Some(why) = first_order_violation(t) {
            return StrongAxiomVerdict::no(format!("condition 1: {side} side is not first-order ({why})"));
        }
    }
    for (side, t) in [("left", &ax.lhs), ("right", &ax.rhs)] {
        if let Some((x, y)) = well_order_violation(t) {
            return StrongAxiomVerdict::no(format!(
                "condition 2: {side} side is not well-ordered ({x} < {y} and {y} < {x})"
            ));
        }
    }
    let (lo, ro) = (order(&ax.lhs), order(&ax.rhs));
    if let Some((x, y)) = lo.iter().find(|(x, y)| ro.contains(&(y.clone(), x.clone()))) {
        return StrongAxiomVerdict::no(format!(
            "condition 3: {x} < {y} on the left but {y} < {x} on the right"
        ));
    }
    StrongAxiomVerdict::yes()
}

/// The axioms named in the strong-axiom discussion: six strong ones and
/// four that fail a condition.
pub fn standard_axioms() -> Vec<Axiom> {
    let sig = Signature::builtin();
    let ax = |name: &str, lhs: &str, rhs: &str| Axiom {
        name: name.into(),
        context: FixContext::new(),
        lhs: parse_term(lhs, &sig).expect("catalogue term parses"),
        rhs: parse_term(rhs, &sig).expect("catalogue term parses"),
    };
    vec![
        ax("A", "f(f(X, Y), Z)", "f(X, f(Y, Z))"),
        ax("Hom", "h(+(X, Y))", "+(h(X), h(Y))"),
        ax("I", "g(X, X)", "X"),
        ax("N", "*(X, 0)", "0"),
        ax("Lproj", "pl(X, Y)", "X"),
        ax("Rproj", "pr(X, Y)", "Y"),
        ax("C", "+(X, Y)", "+(Y, X)"),
        ax("D", "*(X, +(Y, Z))", "+(*(X, Y), *(X, Z))"),
        ax("ATOM", "a", "b"),
        ax("PermBinder", "f([a]X, [b]Y)", "g([b]X, [a]Y)"),
    ]
}

pub fn classify_axioms(axioms: &[Axiom]) -> Vec<(String, StrongAxiomVerdict)> {
    axioms.iter().map(|a| (a.name.clone(), is_strong_axiom(a))).collect()
}
