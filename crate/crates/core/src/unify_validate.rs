//! Checking proposed solutions of nominal (C-)unification problems.
//!
//! A problem is a list of equations `s =?= t`, each modulo α or modulo α
//! and commutativity, together with freshness goals `a #? t`. Candidates
//! come in three shapes: a freshness context with a substitution, the same
//! with deferred fixed-point equations `X = π·X`, or a fixed-point context
//! with a substitution.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::deriv_fix::{check_eq_fix, check_fix, FixContext, FixError, FixOptions};
use crate::deriv_fresh::{check_alpha, check_fresh, FreshContext};
use crate::derivation::EqTheory;
use crate::permgroups::ds;
use crate::syntax::{parse_fix_context, parse_fresh_context, parse_subst};
use crate::terms::{Atom, FreshSupply, ParseError, Parser, Perm, Signature, Subst, Term, Tok, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TheoryTag {
    Core,
    C,
}

impl TheoryTag {
    fn eq_theory(self, sig: &Signature) -> EqTheory {
        match self {
            TheoryTag::Core => EqTheory::Core,
            TheoryTag::C => EqTheory::c_of(sig),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub theory: TheoryTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub signature: Signature,
    pub equations: Vec<Equation>,
    pub freshness: Vec<(Atom, Term)>,
}

impl Problem {
    pub fn new(signature: Signature) -> Problem {
        Problem {
            signature,
            equations: Vec::new(),
            freshness: Vec::new(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for e in &self.equations {
            out.extend(e.lhs.vars());
            out.extend(e.rhs.vars());
        }
        for (_, t) in &self.freshness {
            out.extend(t.vars());
        }
        out
    }

    /// Commutativity is used for idempotency when any equation uses it.
    fn theory(&self) -> TheoryTag {
        if self.equations.iter().any(|e| e.theory == TheoryTag::C) {
            TheoryTag::C
        } else {
            TheoryTag::Core
        }
    }
}

/// A deferred fixed-point equation `X = π·X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Residual {
    pub var: Var,
    pub perm: Perm,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.var, Term::Susp(self.perm.clone(), self.var.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    FreshPair {
        delta: FreshContext,
        sigma: Subst,
    },
    FreshTriple {
        delta: FreshContext,
        sigma: Subst,
        residuals: Vec<Residual>,
    },
    FixPair {
        upsilon: FixContext,
        sigma: Subst,
    },
}

impl Candidate {
    pub fn format_name(&self) -> &'static str {
        match self {
            Candidate::FreshPair { .. } => "fresh-pair",
            Candidate::FreshTriple { .. } => "fresh-triple",
            Candidate::FixPair { .. } => "fix-pair",
        }
    }

    pub fn sigma(&self) -> &Subst {
        match self {
            Candidate::FreshPair { sigma, .. }
            | Candidate::FreshTriple { sigma, .. }
            | Candidate::FixPair { sigma, .. } => sigma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Valid,
    ValidWithResidual,
    Invalid,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Valid => "valid",
            Outcome::ValidWithResidual => "valid-with-residual",
            Outcome::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    /// `equation`, `freshness`, `idempotency` or `instance`.
    pub kind: String,
    pub constraint: String,
    pub ok: bool,
    pub residuals: Vec<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub format: String,
    pub outcome: Outcome,
    pub constraints: Vec<ConstraintReport>,
}

impl ValidationReport {
    fn from_constraints(format: &str, constraints: Vec<ConstraintReport>) -> ValidationReport {
        let outcome = if constraints.iter().any(|c| !c.ok) {
            Outcome::Invalid
        } else if constraints.iter().any(|c| !c.residuals.is_empty()) {
            Outcome::ValidWithResidual
        } else {
            Outcome::Valid
        };
        ValidationReport {
            format: format.into(),
            outcome,
            constraints,
        }
    }

    pub fn first_failure(&self) -> Option<&ConstraintReport> {
        self.constraints.iter().find(|c| !c.ok)
    }
}

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error(transparent)]
    Group(#[from] FixError),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("instance for {0} is missing or not ground")]
    NotGround(String),
}

fn report(kind: &str, constraint: String, ok: bool, detail: Option<String>) -> ConstraintReport {
    ConstraintReport {
        kind: kind.into(),
        constraint,
        ok,
        residuals: Vec::new(),
        detail: if ok { None } else { detail },
    }
}

/// Checks conditions (i) equations, (ii) freshness goals and (iii)
/// idempotency on the problem's unknowns.
pub fn validate(problem: &Problem, cand: &Candidate) -> Result<ValidationReport, ValidateError> {
    let sig = &problem.signature;
    let sigma = cand.sigma();
    let mut out = Vec::new();
    for e in &problem.equations {
        let (s, t) = (e.lhs.subst(sigma), e.rhs.subst(sigma));
        let theory = e.theory.eq_theory(sig);
        let label = format!("{} = {}", s, t);
        out.push(match cand {
            Candidate::FreshPair { delta, .. } => {
                let v = check_alpha(delta, &s, &t, &theory);
                report("equation", label, v.derivable, v.failure)
            }
            Candidate::FreshTriple { delta, residuals, .. } => {
                let v = check_alpha(delta, &s, &t, &theory);
                if v.derivable {
                    report("equation", label, true, None)
                } else {
                    match reduce_to_residuals(delta, &s, &t, &theory, residuals) {
                        Some(used) => ConstraintReport {
                            kind: "equation".into(),
                            constraint: label,
                            ok: true,
                            residuals: used.iter().map(ToString::to_string).collect(),
                            detail: None,
                        },
                        None => report("equation", label, false, v.failure),
                    }
                }
            }
            Candidate::FixPair { upsilon, .. } => {
                let v = check_eq_fix(upsilon, &s, &t, &theory, &FixOptions::default())?;
                report("equation", label, v.derivable, v.failure)
            }
        });
    }
    for (a, t) in &problem.freshness {
        let t = t.subst(sigma);
        let label = format!("{a} # {t}");
        out.push(match cand {
            Candidate::FreshPair { delta, .. } | Candidate::FreshTriple { delta, .. } => {
                let v = check_fresh(delta, a, &t);
                report("freshness", label, v.derivable, v.failure)
            }
            Candidate::FixPair { upsilon, .. } => {
                let c = fresh_atom_for(upsilon, a, &t);
                let v = check_fix(upsilon, &Perm::swap(a.clone(), c), &t, &FixOptions::default())?;
                report("freshness", label, v.derivable, v.failure)
            }
        });
    }
    let theory = problem.theory().eq_theory(sig);
    for x in problem.vars() {
        let once = Term::susp(Perm::id(), x.clone()).subst(sigma);
        let twice = once.subst(sigma);
        let label = format!("{once} = {twice}");
        out.push(match cand {
            Candidate::FreshPair { delta, .. } | Candidate::FreshTriple { delta, .. } => {
                let v = check_alpha(delta, &once, &twice, &theory);
                report("idempotency", label, v.derivable, v.failure)
            }
            Candidate::FixPair { upsilon, .. } => {
                let v = check_eq_fix(upsilon, &once, &twice, &theory, &FixOptions::default())?;
                report("idempotency", label, v.derivable, v.failure)
            }
        });
    }
    Ok(ValidationReport::from_constraints(cand.format_name(), out))
}

/// `a # t` is read as `(a c) ⋏ t` for a name `c` new to everything in sight.
fn fresh_atom_for(ctx: &FixContext, a: &Atom, t: &Term) -> Atom {
    let mut supply = FreshSupply::new("n");
    supply.avoid(&ctx.mentioned_atoms());
    supply.avoid(&t.mentioned_atoms());
    supply.avoid([a]);
    supply.next_atom()
}

/// Matches `s` against `t` structurally. Wherever both sides are
/// suspensions of one unknown that disagree, the pair must be one of the
/// deferred equations; every other leaf must be α-equal (modulo C).
/// Returns the deferred equations used.
fn reduce_to_residuals(
    delta: &FreshContext,
    s: &Term,
    t: &Term,
    theory: &EqTheory,
    residuals: &[Residual],
) -> Option<BTreeSet<Residual>> {
    if check_alpha(delta, s, t, theory).derivable {
        return Some(BTreeSet::new());
    }
    match (s, t) {
        (Term::Susp(p, x), Term::Susp(q, y)) if x == y => {
            let gamma = p.inverse().compose(q);
            let gamma_inv = gamma.inverse();
            residuals
                .iter()
                .find(|r| r.var == *x && (r.perm == gamma || r.perm == gamma_inv))
                .map(|r| BTreeSet::from([r.clone()]))
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => reduce_to_residuals(delta, s1, t1, theory, residuals),
        (Term::Abs(a, s1), Term::Abs(b, t1)) => {
            if !check_fresh(delta, a, t1).derivable {
                return None;
            }
            let t1 = t1.act(&Perm::swap(a.clone(), b.clone()));
            reduce_to_residuals(delta, s1, &t1, theory, residuals)
        }
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            let pairwise = |ys: &[&Term]| -> Option<BTreeSet<Residual>> {
                let mut used = BTreeSet::new();
                for (x, y) in xs.iter().zip(ys) {
                    used.extend(reduce_to_residuals(delta, x, y, theory, residuals)?);
                }
                Some(used)
            };
            let direct: Vec<&Term> = ys.iter().collect();
            pairwise(&direct).or_else(|| {
                if theory.is_commutative(f) && ys.len() == 2 {
                    pairwise(&[&ys[1], &ys[0]])
                } else {
                    None
                }
            })
        }
        _ => None,
    }
}

/// Checks that the ground instance `delta` satisfies every `π ⋏ X` of the
/// candidate's context modulo C, then validates `σδ` with an empty
/// freshness context.
pub fn instantiate_and_check(
    problem: &Problem,
    upsilon: &FixContext,
    sigma: &Subst,
    delta: &Subst,
) -> Result<ValidationReport, ValidateError> {
    let sig = &problem.signature;
    let c = EqTheory::c_of(sig);
    let mut out = Vec::new();
    for (pi, x) in upsilon.iter() {
        let g = delta
            .get(x)
            .filter(|g| g.is_ground())
            .ok_or_else(|| ValidateError::NotGround(x.to_string()))?;
        let moved = g.act(pi);
        let v = check_alpha(&FreshContext::new(), &moved, g, &c);
        out.push(report(
            "instance",
            format!("{pi} fix {g}"),
            v.derivable,
            Some(format!("{pi}·{g} = {moved} is not equal to {g}")),
        ));
    }
    let composed = sigma.then(delta);
    let rest = validate(
        problem,
        &Candidate::FreshPair {
            delta: FreshContext::new(),
            sigma: composed,
        },
    )?;
    out.extend(rest.constraints);
    Ok(ValidationReport::from_constraints("fix-pair-instance", out))
}

/// The rule `π·X = π'·X ⟹ ds(π, π') # X`, tested on a ground instance
/// `g` of `X`. `None` when the premise fails for `g`; otherwise whether the
/// conclusion holds.
pub fn ds_rule_on_instance(pi: &Perm, pi2: &Perm, g: &Term, theory: &EqTheory) -> Option<bool> {
    let empty = FreshContext::new();
    if !check_alpha(&empty, &g.act(pi), &g.act(pi2), theory).derivable {
        return None;
    }
    Some(ds(pi, pi2).iter().all(|a| check_fresh(&empty, a, g).derivable))
}

fn parse_line<T>(
    line_no: usize,
    text: &str,
    sig: &Signature,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ValidateError> {
    let wrap = |source| ValidateError::Parse { line: line_no, source };
    let mut p = Parser::new(text, sig).map_err(wrap)?;
    let v = f(&mut p).map_err(wrap)?;
    p.finish().map_err(wrap)?;
    Ok(v)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("--"))
}

/// One constraint per line: `s =?= t`, `s =?= t [C]` or `a #? t`. Lines
/// starting with `--` are comments.
pub fn parse_problem(text: &str, sig: &Signature) -> Result<Problem, ValidateError> {
    let mut problem = Problem::new(sig.clone());
    for (n, line) in content_lines(text) {
        let is_fresh = crate::terms::lex(line)
            .map_err(|source| ValidateError::Parse { line: n, source })?
            .iter()
            .any(|(t, _)| *t == Tok::HashQ);
        if is_fresh {
            let (a, t) = parse_line(n, line, sig, |p| {
                let a = p.atom()?;
                p.expect(&Tok::HashQ)?;
                Ok((a, p.term()?))
            })?;
            problem.freshness.push((a, t));
        } else {
            let eq = parse_line(n, line, sig, |p| {
                let lhs = p.term()?;
                p.expect(&Tok::EqQ)?;
                let rhs = p.term()?;
                let mut theory = TheoryTag::Core;
                if p.eat(&Tok::LBrack) {
                    match p.bump() {
                        Some(Tok::Ident(tag)) if tag == "C" => theory = TheoryTag::C,
                        Some(Tok::Ident(tag)) if tag == "CORE" => {}
                        _ => return Err(p.error("expected [C] or [CORE]")),
                    }
                    p.expect(&Tok::RBrack)?;
                }
                Ok(Equation { lhs, rhs, theory })
            })?;
            problem.equations.push(eq);
        }
    }
    Ok(problem)
}

/// `key: value` lines:
///
/// ```text
/// format: fix-pair
/// context: (a b) fix X
/// subst: Y := c
/// ```
///
/// `format` is `fresh-pair`, `fresh-triple` or `fix-pair`. A fresh-triple
/// adds one `residual: X = (a b).X` line per deferred equation. Missing
/// `context` and `subst` lines mean empty.
pub fn parse_candidate(text: &str, sig: &Signature) -> Result<Candidate, ValidateError> {
    let mut format = None;
    let mut context = (0, String::new());
    let mut subst = (0, String::new());
    let mut residuals = Vec::new();
    for (n, line) in content_lines(text) {
        let (key, value) = line.split_once(':').ok_or_else(|| ValidateError::Format {
            line: n,
            message: format!("expected `key: value`, got `{line}`"),
        })?;
        let value = value.trim();
        match key.trim() {
            "format" => format = Some((n, value.to_string())),
            "context" => context = (n, value.to_string()),
            "subst" => subst = (n, value.to_string()),
            "residual" => residuals.push(parse_line(n, value, sig, |p| {
                let x = p.var()?;
                if !(p.eat(&Tok::Eq) || p.eat(&Tok::Approx)) {
                    return Err(p.unexpected("`=`"));
                }
                let col = p.column();
                match p.term()? {
                    Term::Susp(pi, y) if y == x => Ok(Residual { var: x, perm: pi }),
                    _ => Err(ParseError::new(col, "a residual has the form X = π.X")),
                }
            })?),
            other => {
                return Err(ValidateError::Format {
                    line: n,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let (fline, format) = format.ok_or(ValidateError::Format {
        line: 0,
        message: "missing `format:` line".into(),
    })?;
    let sigma = parse_subst(&subst.1, sig).map_err(|source| ValidateError::Parse { line: subst.0, source })?;
    let fresh_ctx = || {
        parse_fresh_context(&context.1, sig).map_err(|source| ValidateError::Parse { line: context.0, source })
    };
    if format != "fresh-triple" && !residuals.is_empty() {
        return Err(ValidateError::Format {
            line: fline,
            message: "residuals need format fresh-triple".into(),
        });
    }
    match format.as_str() {
        "fresh-pair" => Ok(Candidate::FreshPair {
            delta: fresh_ctx()?,
            sigma,
        }),
        "fresh-triple" => Ok(Candidate::FreshTriple {
            delta: fresh_ctx()?,
            sigma,
            residuals,
        }),
        "fix-pair" => Ok(Candidate::FixPair {
            upsilon: parse_fix_context(&context.1, sig)
                .map_err(|source| ValidateError::Parse { line: context.0, source })?,
            sigma,
        }),
        other => Err(ValidateError::Format {
            line: fline,
            message: format!("unknown format `{other}`; expected fresh-pair, fresh-triple or fix-pair"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn sig() -> Signature {
        Signature::builtin()
    }

    fn t(s: &str) -> Term {
        parse_term(s, &sig()).unwrap()
    }

    fn problem() -> Problem {
        parse_problem("f^C(X, Y) =?= f^C(c, (a b).X) [C]", &sig()).unwrap()
    }

    fn outcome(text: &str) -> Outcome {
        let cand = parse_candidate(text, &sig()).unwrap();
        validate(&problem(), &cand).unwrap().outcome
    }

    #[test]
    fn the_three_solution_formats() {
        assert_eq!(outcome("format: fresh-pair\nsubst: X := c; Y := c"), Outcome::Valid);
        assert_eq!(
            outcome("format: fresh-triple\nsubst: Y := c\nresidual: X = (a b).X"),
            Outcome::ValidWithResidual
        );
        assert_eq!(outcome("format: fix-pair\ncontext: (a b) fix X\nsubst: Y := c"), Outcome::Valid);
        assert_eq!(outcome("format: fresh-pair\nsubst: Y := c"), Outcome::Invalid);
        assert_eq!(outcome("format: fix-pair\nsubst: Y := c"), Outcome::Invalid);
        assert_eq!(outcome("format: fresh-triple\nsubst: Y := c\nresidual: X = (a c).X"), Outcome::Invalid);
    }

    #[test]
    fn instances_of_the_fixed_point_solution() {
        let upsilon = parse_fix_context("(a b) fix X", &sig()).unwrap();
        let sigma = parse_subst("Y := c", &sig()).unwrap();
        let check = |g: &str| {
            let delta = Subst::new().with("X", t(g));
            instantiate_and_check(&problem(), &upsilon, &sigma, &delta).unwrap().outcome
        };
        assert_eq!(check("f^C(a, b)"), Outcome::Valid);
        assert_eq!(check("f^C(f^C(a, b), f^C(a, b))"), Outcome::Valid);
        assert_eq!(check("a"), Outcome::Invalid);
    }

    #[test]
    fn ds_rule_holds_without_axioms_and_fails_with_c() {
        let ab = Perm::swap(Atom::user("a"), Atom::user("b"));
        let g = t("f^C(a, b)");
        assert_eq!(ds_rule_on_instance(&ab, &Perm::id(), &g, &EqTheory::c_of(&sig())), Some(false));
        assert_eq!(ds_rule_on_instance(&ab, &Perm::id(), &g, &EqTheory::Core), None);
        assert_eq!(ds_rule_on_instance(&ab, &Perm::id(), &t("f^C(c, [a]a)"), &EqTheory::Core), Some(true));
    }

    #[test]
    fn freshness_goals_in_both_settings() {
        let mut p = Problem::new(sig());
        p.freshness.push((Atom::user("a"), t("f(X, [a]a)")));
        let fresh = Candidate::FreshPair {
            delta: parse_fresh_context("a # X", &sig()).unwrap(),
            sigma: Subst::new(),
        };
        assert_eq!(validate(&p, &fresh).unwrap().outcome, Outcome::Valid);
        let fix = Candidate::FixPair {
            upsilon: FixContext::new(),
            sigma: Subst::new(),
        };
        assert_eq!(validate(&p, &fix).unwrap().outcome, Outcome::Invalid);
        let fix = Candidate::FixPair {
            upsilon: FixContext::new(),
            sigma: Subst::new().with("X", t("b")),
        };
        assert_eq!(validate(&p, &fix).unwrap().outcome, Outcome::Valid);
    }

    #[test]
    fn idempotency_is_checked() {
        let p = parse_problem("X =?= X", &sig()).unwrap();
        let cand = Candidate::FreshPair {
            delta: FreshContext::new(),
            sigma: Subst::new().with("X", t("f(X)")),
        };
        let r = validate(&p, &cand).unwrap();
        assert_eq!(r.outcome, Outcome::Invalid);
        assert_eq!(r.first_failure().unwrap().kind, "idempotency");
    }

    #[test]
    fn file_errors_carry_lines() {
        let err = parse_problem("a =?= b\nf(a =?= b", &sig()).unwrap_err();
        assert!(matches!(err, ValidateError::Parse { line: 2, .. }));
        let err = parse_candidate("subst: X := a", &sig()).unwrap_err();
        assert!(err.to_string().contains("format"));
    }
}
