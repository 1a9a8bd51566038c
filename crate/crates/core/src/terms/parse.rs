//! Lexer and recursive-descent parser for the textual term grammar.
//!
//! ```text
//! atom = lowercase ident      var = uppercase ident
//! swap = "(" atom atom ")"    perm = swap+ | "id"
//! susp = perm "." var | var   abs  = "[" atom "]" term
//! app  = symbol "(" term ("," term)* ")" | nullary symbol
//! ```
//!
//! `perm . term` is accepted for any term and is read as the permutation
//! action applied to it, so `(a b).[a]X` parses as `[b](a b).X`.

use std::collections::BTreeMap;

use super::atom::{Atom, Symbol, Var};
use super::perm::Perm;
use super::signature::Signature;
use super::term::Term;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `~name`, a fresh-namespace atom
    FreshName(String),
    Op(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Hash,
    /// `#?`
    HashQ,
    Eq,
    /// `=?=`
    EqQ,
    /// `≈` or `~`
    Approx,
    /// `⋏`
    Fix,
    Turnstile,
    Assign,
    Nu,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Op(s) => format!("`{s}`"),
            Tok::FreshName(s) => format!("`~{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Hash => "`#`".into(),
            Tok::HashQ => "`#?`".into(),
            Tok::Eq => "`=`".into(),
            Tok::EqQ => "`=?=`".into(),
            Tok::Approx => "`≈`".into(),
            Tok::Fix => "`fix`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Nu => "`new`".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '^'
}

const OP_CHARS: &str = "+*-/<>&|!?@$%";

pub fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let col = |i: usize, chars: &[(usize, char)]| {
        chars.get(i).map(|&(b, _)| text[..b].chars().count() + 1).unwrap_or(text.chars().count() + 1)
    };
    let starts_with = |i: usize, s: &str, chars: &[(usize, char)]| {
        let pat: Vec<char> = s.chars().collect();
        pat.iter().enumerate().all(|(k, &p)| chars.get(i + k).map(|&(_, c)| c) == Some(p))
    };
    while i < chars.len() {
        let (_, c) = chars[i];
        let pos = col(i, &chars);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let fixed: &[(&str, Tok)] = &[
            ("=?=", Tok::EqQ),
            ("|-", Tok::Turnstile),
            (":=", Tok::Assign),
            ("#?", Tok::HashQ),
        ];
        if let Some((s, tok)) = fixed.iter().find(|(s, _)| starts_with(i, s, &chars)) {
            out.push((tok.clone(), pos));
            i += s.chars().count();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' | '·' => Some(Tok::Dot),
            ';' => Some(Tok::Semi),
            '#' => Some(Tok::Hash),
            '=' => Some(Tok::Eq),
            '≈' => Some(Tok::Approx),
            '⋏' => Some(Tok::Fix),
            '⊢' => Some(Tok::Turnstile),
            'ν' => Some(Tok::Nu),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            i += 1;
            continue;
        }
        if c == '~' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            if j > start {
                let name: String = chars[start..j].iter().map(|&(_, c)| c).collect();
                out.push((Tok::FreshName(name), pos));
            } else {
                out.push((Tok::Approx, pos));
            }
            i = j.max(i + 1);
            continue;
        }
        if is_ident_char(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
            let tok = match word.as_str() {
                "fix" => Tok::Fix,
                "new" => Tok::Nu,
                _ => Tok::Ident(word),
            };
            out.push((tok, pos));
            i = j;
            continue;
        }
        if OP_CHARS.contains(c) {
            let mut j = i;
            while j < chars.len() && OP_CHARS.contains(chars[j].1) {
                j += 1;
            }
            let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
            out.push((Tok::Op(word), pos));
            i = j;
            continue;
        }
        return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Token-stream parser. The judgement syntax builds on the same instance.
pub struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    sig: &'s Signature,
    allow_fresh: bool,
    nu_names: BTreeMap<String, Atom>,
}

impl<'s> Parser<'s> {
    pub fn new(text: &str, sig: &'s Signature) -> Result<Parser<'s>, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end_col: text.chars().count() + 1,
            sig,
            allow_fresh: false,
            nu_names: BTreeMap::new(),
        })
    }

    /// Permits `~name` spellings. Only proof-tree conclusions need this;
    /// user judgements never name fresh atoms directly.
    pub fn allow_fresh(mut self, allow: bool) -> Self {
        self.allow_fresh = allow;
        self
    }

    /// Makes `name` denote the fresh atom `~name` for the rest of the input.
    pub fn bind_nu(&mut self, name: &str) -> Atom {
        let atom = Atom::fresh(name);
        self.nu_names.insert(name.to_string(), atom.clone());
        atom
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    pub fn column(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, c)| c).unwrap_or(self.end_col)
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.column(), msg)
    }

    /// Current position, for backtracking with [`Parser::reset`].
    pub fn mark(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, mark: usize) {
        self.pos = mark;
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) if starts_lower(&name) => {
                self.pos += 1;
                Ok(self.resolve_atom(&name))
            }
            Some(Tok::FreshName(name)) => {
                if !self.allow_fresh {
                    return Err(self.error(format!(
                        "`~{name}` names a generated atom; input atoms must be plain identifiers"
                    )));
                }
                self.pos += 1;
                Ok(Atom::fresh(&name))
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn resolve_atom(&self, name: &str) -> Atom {
        self.nu_names
            .get(name)
            .cloned()
            .unwrap_or_else(|| Atom::user(name))
    }

    pub fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) if starts_upper(&name) => {
                self.pos += 1;
                Ok(Var::new(&name))
            }
            _ => Err(self.unexpected("an unknown (uppercase identifier)")),
        }
    }

    /// True when the next tokens begin a permutation: a swap or `id` used
    /// as a prefix.
    pub fn at_perm(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen) => true,
            Some(Tok::Ident(s)) if s == "id" => {
                matches!(self.peek_at(1), Some(Tok::Dot) | Some(Tok::Fix))
            }
            _ => false,
        }
    }

    pub fn perm(&mut self) -> Result<Perm, ParseError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "id" {
                self.pos += 1;
                return Ok(Perm::id());
            }
        }
        let mut swaps = Vec::new();
        while self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let a = self.atom()?;
            let b = self.atom()?;
            self.expect(&Tok::RParen)?;
            swaps.push((a, b));
        }
        if swaps.is_empty() {
            return Err(self.unexpected("a permutation"));
        }
        Ok(Perm::from_swaps(swaps))
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        if self.at_perm() {
            let pi = self.perm()?;
            if !self.eat(&Tok::Dot) {
                return Err(self.unexpected("`.` after a permutation"));
            }
            let t = self.term()?;
            return Ok(match t {
                // keep the swap list as written on suspensions
                Term::Susp(p, x) if p.is_id() => Term::Susp(pi, x),
                other => other.act(&pi),
            });
        }
        match self.peek().cloned() {
            Some(Tok::LBrack) => {
                self.pos += 1;
                let a = self.atom()?;
                self.expect(&Tok::RBrack)?;
                let body = self.term()?;
                Ok(Term::Abs(a, Box::new(body)))
            }
            Some(Tok::FreshName(_)) => Ok(Term::Atom(self.atom()?)),
            Some(Tok::Ident(name)) | Some(Tok::Op(name)) => {
                let sym = Symbol::new(&name);
                if self.peek_at(1) == Some(&Tok::LParen) {
                    self.pos += 2;
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.expect(&Tok::RParen)?;
                    if !self.sig.has(&sym, args.len()) {
                        return Err(self.error(format!(
                            "`{name}` is not declared with arity {}",
                            args.len()
                        )));
                    }
                    return Ok(Term::App(sym, args));
                }
                if self.sig.has(&sym, 0) {
                    self.pos += 1;
                    return Ok(Term::App(sym, Vec::new()));
                }
                if starts_upper(&name) {
                    return Ok(Term::Susp(Perm::id(), self.var()?));
                }
                if starts_lower(&name) {
                    return Ok(Term::Atom(self.atom()?));
                }
                Err(self.error(format!("`{name}` is not a declared constant")))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_lowercase())
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_perm(text: &str) -> Result<Perm, ParseError> {
    let sig = Signature::new();
    let mut p = Parser::new(text, &sig)?;
    let pi = p.perm()?;
    p.finish()?;
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s, &Signature::builtin()).unwrap()
    }

    #[test]
    fn parses_core_forms() {
        assert_eq!(t("a"), Term::atom("a"));
        assert_eq!(t("X"), Term::var("X"));
        assert_eq!(t("[a]a"), Term::abs(Atom::user("a"), Term::atom("a")));
        assert_eq!(t("f(X, a)"), Term::app("f", vec![Term::var("X"), Term::atom("a")]));
        assert_eq!(t("0"), Term::app("0", vec![]));
        assert_eq!(
            t("+(a1, a2)"),
            Term::app("+", vec![Term::atom("a1"), Term::atom("a2")])
        );
        assert_eq!(t("f^C(a, b)").to_string(), "f^C(a, b)");
    }

    #[test]
    fn suspensions_keep_their_swap_list() {
        let s = t("(a b)(c d).X");
        assert_eq!(s.to_string(), "(a b)(c d).X");
        assert_eq!(t("id.X"), Term::var("X"));
        assert_eq!(t("(a b)·X").to_string(), "(a b).X");
    }

    #[test]
    fn perm_prefix_on_compound_term_acts() {
        assert_eq!(t("(a b).[a]X").to_string(), "[b](a b).X");
    }

    #[test]
    fn rejects_fresh_spellings_and_bad_arity() {
        let sig = Signature::builtin();
        assert!(parse_term("~c1", &sig).is_err());
        assert!(parse_term("h(a, b)", &sig).is_err());
        assert!(parse_term("f(a", &sig).is_err());
        let mut p = Parser::new("~c1", &sig).unwrap().allow_fresh(true);
        assert_eq!(p.term().unwrap(), Term::Atom(Atom::fresh("c1")));
    }

    #[test]
    fn errors_carry_a_column() {
        let err = parse_term("f(a, ]", &Signature::builtin()).unwrap_err();
        assert_eq!(err.column, 6);
    }
}
