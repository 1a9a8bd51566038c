//! Judgement, context and substitution syntax.
//!
//! ```text
//! fresh judgement   [a#X, b#Y] |- a # t        |- s ~ t   (also ≈ or =)
//! fix judgement     [(a b) fix X, ...] |- π fix t     |- s = t
//! strong judgement  new c1 c2. [(a c1) fix X, ...] |- π fix t   (or s ~ t)
//! substitution      X := t; Y := u
//! ```
//!
//! `⊢`, `⋏`, `≈` and `ν` are accepted for `|-`, `fix`, `~` and `new`. In a
//! strong judgement the names after `new` denote generated atoms.

use std::fmt;

use crate::deriv_fix::{FixBody, FixContext, FixJudgement};
use crate::deriv_fresh::{FreshBody, FreshContext, FreshJudgement};
use crate::deriv_strong::{NuJudgement, StrongBody, StrongContext};
use crate::terms::{Atom, ParseError, Parser, Perm, Signature, Subst, Tok};

/// A parsed judgement of any of the three systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgement {
    Fresh(FreshJudgement),
    Fix(FixJudgement),
    Strong(NuJudgement),
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgement::Fresh(j) => j.fmt(f),
            Judgement::Fix(j) => j.fmt(f),
            Judgement::Strong(j) => j.fmt(f),
        }
    }
}

fn parser<'s>(text: &str, sig: &'s Signature, internal: bool) -> Result<Parser<'s>, ParseError> {
    Ok(Parser::new(text, sig)?.allow_fresh(internal))
}

fn fresh_entry(p: &mut Parser) -> Result<(Atom, crate::terms::Var), ParseError> {
    let a = p.atom()?;
    p.expect(&Tok::Hash)?;
    let x = p.var()?;
    Ok((a, x))
}

fn fix_entry(p: &mut Parser) -> Result<(Perm, crate::terms::Var), ParseError> {
    let pi = p.perm()?;
    p.expect(&Tok::Fix)?;
    let x = p.var()?;
    Ok((pi, x))
}

/// Comma-separated entries up to `|-` or end of input.
fn entries<T>(p: &mut Parser, mut entry: impl FnMut(&mut Parser) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    let mut out = Vec::new();
    if p.at_end() || p.peek() == Some(&Tok::Turnstile) {
        return Ok(out);
    }
    loop {
        out.push(entry(p)?);
        if !p.eat(&Tok::Comma) {
            return Ok(out);
        }
    }
}

fn fix_body(p: &mut Parser) -> Result<FixBody, ParseError> {
    if p.at_perm() {
        let mark = p.mark();
        let pi = p.perm()?;
        if p.eat(&Tok::Fix) {
            return Ok(FixBody::Fix(pi, p.term()?));
        }
        p.reset(mark);
    }
    let s = p.term()?;
    if !(p.eat(&Tok::Eq) || p.eat(&Tok::Approx)) {
        return Err(p.unexpected("`=` or `fix`"));
    }
    Ok(FixBody::Eq(s, p.term()?))
}

fn fix_judgement(text: &str, sig: &Signature, internal: bool) -> Result<FixJudgement, ParseError> {
    let mut p = parser(text, sig, internal)?;
    let context: FixContext = entries(&mut p, fix_entry)?.into_iter().collect();
    p.expect(&Tok::Turnstile)?;
    let body = fix_body(&mut p)?;
    p.finish()?;
    Ok(FixJudgement { context, body })
}

/// `Υ |- π fix t` or `Υ |- s = t`.
pub fn parse_fix_judgement(text: &str, sig: &Signature) -> Result<FixJudgement, ParseError> {
    fix_judgement(text, sig, false)
}

/// As [`parse_fix_judgement`], also accepting `~name` atoms as printed in
/// proof trees.
pub fn parse_fix_judgement_internal(text: &str, sig: &Signature) -> Result<FixJudgement, ParseError> {
    fix_judgement(text, sig, true)
}

/// `(a b) fix X, (c d) fix Y`
pub fn parse_fix_context(text: &str, sig: &Signature) -> Result<FixContext, ParseError> {
    let mut p = parser(text, sig, false)?;
    let ctx = entries(&mut p, fix_entry)?.into_iter().collect();
    p.finish()?;
    Ok(ctx)
}

/// `Δ |- a # t` or `Δ |- s ~ t`.
pub fn parse_fresh_judgement(text: &str, sig: &Signature) -> Result<FreshJudgement, ParseError> {
    let mut p = parser(text, sig, false)?;
    let context: FreshContext = entries(&mut p, fresh_entry)?.into_iter().collect();
    p.expect(&Tok::Turnstile)?;
    let body = if matches!(p.peek(), Some(Tok::Ident(_))) && p.peek_at(1) == Some(&Tok::Hash) {
        let a = p.atom()?;
        p.expect(&Tok::Hash)?;
        FreshBody::Fresh(a, p.term()?)
    } else {
        let s = p.term()?;
        if !(p.eat(&Tok::Approx) || p.eat(&Tok::Eq)) {
            return Err(p.unexpected("`#`, `~` or `≈`"));
        }
        FreshBody::Alpha(s, p.term()?)
    };
    p.finish()?;
    Ok(FreshJudgement { context, body })
}

/// `a#X, b#Y`
pub fn parse_fresh_context(text: &str, sig: &Signature) -> Result<FreshContext, ParseError> {
    let mut p = parser(text, sig, false)?;
    let ctx = entries(&mut p, fresh_entry)?.into_iter().collect();
    p.finish()?;
    Ok(ctx)
}

/// `new c1 c2.`, binding the names; returns the bound atoms.
fn nu_prefix(p: &mut Parser) -> Result<Vec<Atom>, ParseError> {
    let mut nu = Vec::new();
    if !p.eat(&Tok::Nu) {
        return Ok(nu);
    }
    loop {
        match p.peek().cloned() {
            Some(Tok::Ident(name)) if name.chars().next().is_some_and(char::is_lowercase) => {
                p.bump();
                nu.push(p.bind_nu(&name));
                p.eat(&Tok::Comma);
            }
            Some(Tok::Dot) => {
                p.bump();
                return Ok(nu);
            }
            _ => return Err(p.unexpected("a name or `.`")),
        }
    }
}

fn strong_entries(p: &mut Parser, nu: &[Atom]) -> Result<StrongContext, ParseError> {
    let mut ctx = StrongContext::new();
    let list = entries(p, |p| {
        let col = p.column();
        let (pi, x) = fix_entry(p)?;
        let swaps = pi.swaps();
        let dom = pi.domain();
        if swaps.len() != 1 || dom.len() != 2 {
            return Err(ParseError::new(col, "strong constraints have the form (a c) fix X"));
        }
        let (a, c) = swaps[0].clone();
        match (nu.contains(&a), nu.contains(&c)) {
            (false, true) => Ok((a, c, x)),
            (true, false) => Ok((c, a, x)),
            _ => Err(ParseError::new(
                col,
                format!("in ({a} {c}) fix {x} exactly one atom must be bound by new"),
            )),
        }
    })?;
    for (a, c, x) in list {
        ctx.insert(a, c, x);
    }
    Ok(ctx)
}

/// `new c1 c2. (a c1) fix X, ... |- π fix t` or `... |- s ~ t`.
pub fn parse_strong_judgement(text: &str, sig: &Signature) -> Result<NuJudgement, ParseError> {
    let mut p = parser(text, sig, false)?;
    let nu = nu_prefix(&mut p)?;
    let context = strong_entries(&mut p, &nu)?;
    p.expect(&Tok::Turnstile)?;
    let body = match fix_body(&mut p)? {
        FixBody::Fix(pi, t) => StrongBody::Fix(pi, t),
        FixBody::Eq(s, t) => StrongBody::Alpha(s, t),
    };
    p.finish()?;
    Ok(NuJudgement::new(nu, context, body))
}

/// `new c1. (a c1) fix X`; the `new` prefix may be omitted when empty.
pub fn parse_strong_context(text: &str, sig: &Signature) -> Result<StrongContext, ParseError> {
    let mut p = parser(text, sig, false)?;
    let nu = nu_prefix(&mut p)?;
    let ctx = strong_entries(&mut p, &nu)?;
    p.finish()?;
    Ok(ctx)
}

fn subst(text: &str, sig: &Signature, internal: bool) -> Result<Subst, ParseError> {
    let mut p = parser(text, sig, internal)?;
    let mut out = Subst::new();
    if p.eat(&Tok::LBrace) && p.eat(&Tok::RBrace) {
        p.finish()?;
        return Ok(out);
    }
    let mut p = parser(text.trim().trim_start_matches('{').trim_end_matches('}'), sig, internal)?;
    while !p.at_end() {
        let x = p.var()?;
        p.expect(&Tok::Assign)?;
        let t = p.term()?;
        out.insert(x, t);
        if !(p.eat(&Tok::Semi) || p.eat(&Tok::Comma)) {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

/// `X := t; Y := u`, optionally in braces; `;` or `,` separate bindings.
pub fn parse_subst(text: &str, sig: &Signature) -> Result<Subst, ParseError> {
    subst(text, sig, false)
}

pub(crate) fn parse_subst_internal(text: &str, sig: &Signature) -> Result<Subst, ParseError> {
    subst(text, sig, true)
}

/// Picks the system from the shape of the text: a `new` prefix means a
/// strong judgement, `#` or `~` a freshness judgement, anything else a
/// fixed-point judgement.
pub fn parse_judgement(text: &str, sig: &Signature) -> Result<Judgement, ParseError> {
    let toks = crate::terms::lex(text)?;
    if matches!(toks.first(), Some((Tok::Nu, _))) {
        return parse_strong_judgement(text, sig).map(Judgement::Strong);
    }
    if toks.iter().any(|(t, _)| matches!(t, Tok::Hash | Tok::Approx)) {
        return parse_fresh_judgement(text, sig).map(Judgement::Fresh);
    }
    parse_fix_judgement(text, sig).map(Judgement::Fix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Var;

    fn sig() -> Signature {
        Signature::builtin()
    }

    #[test]
    fn fix_judgements() {
        let j = parse_fix_judgement("⊢ [a]a = [b]b", &sig()).unwrap();
        assert!(j.context.is_empty());
        assert!(matches!(j.body, FixBody::Eq(..)));
        let j = parse_fix_judgement("(a b) fix X, (c d) fix X |- (a c) fix X", &sig()).unwrap();
        assert_eq!(j.context.len(), 2);
        assert!(matches!(j.body, FixBody::Fix(..)));
        let j = parse_fix_judgement("(b d') fix X |- (a b).[a]X = [a]X", &sig()).unwrap();
        assert_eq!(j.to_string(), "(b d') fix X |- [b](a b).X = [a]X");
        assert_eq!(parse_fix_judgement(&j.to_string(), &sig()).unwrap(), j);
    }

    #[test]
    fn fresh_judgements() {
        let j = parse_fresh_judgement("a#X, b#X |- (a b).X ~ X", &sig()).unwrap();
        assert_eq!(j.context.len(), 2);
        let j = parse_fresh_judgement("|- a # a", &sig()).unwrap();
        assert!(matches!(j.body, FreshBody::Fresh(..)));
        assert!(parse_fresh_judgement("⊢ [a]a ≈ [b]b", &sig()).is_ok());
    }

    #[test]
    fn strong_judgements() {
        let text = "new c1,c2. (a c1) fix X, (b c2) fix X |- (a b) fix X";
        let j = parse_strong_judgement(text, &sig()).unwrap();
        assert_eq!(j.nu.len(), 2);
        assert!(j.nu.iter().all(Atom::is_fresh));
        assert_eq!(j.to_string(), "new c1 c2. (a c1) fix X, (b c2) fix X |- (a b) fix X");
        assert_eq!(parse_strong_judgement(&j.to_string(), &sig()).unwrap(), j);
        assert!(parse_strong_judgement("new c. (a b) fix X |- a ~ a", &sig()).is_err());
    }

    #[test]
    fn substitutions() {
        let s = parse_subst("X := c; Y := (a b).X", &sig()).unwrap();
        assert_eq!(s.get(&Var::new("Y")).unwrap().to_string(), "(a b).X");
        assert!(parse_subst("{}", &sig()).unwrap().is_empty());
        assert!(parse_subst("", &sig()).unwrap().is_empty());
        assert_eq!(parse_subst("{X := a}", &sig()).unwrap().iter().count(), 1);
    }

    #[test]
    fn detection() {
        assert!(matches!(parse_judgement("|- a # a", &sig()).unwrap(), Judgement::Fresh(_)));
        assert!(matches!(parse_judgement("|- [a]a = [b]b", &sig()).unwrap(), Judgement::Fix(_)));
        assert!(matches!(
            parse_judgement("new c. (a c) fix X |- (a c) fix X", &sig()).unwrap(),
            Judgement::Strong(_)
        ));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_fix_judgement("|- (a b) fox X", &sig()).unwrap_err();
        assert!(e.column > 0);
    }
}
