//! Nominal term syntax: atoms, unknowns, permutations, terms,
//! substitutions, signatures, and the textual grammar.

mod atom;
mod parse;
mod perm;
mod signature;
mod term;

use thiserror::Error;

pub use atom::{Atom, FreshSupply, Namespace, Symbol, Var};
pub use parse::{lex, parse_perm, parse_term, Parser, Tok};
pub use perm::Perm;
pub use signature::Signature;
pub use term::{Subst, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("term `{0}` is not ground")]
    NotGround(String),
    #[error("symbol `{symbol}` is not declared with arity {arity}")]
    Arity { symbol: String, arity: usize },
    #[error("bad signature: {0}")]
    Signature(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            column,
            message: message.into(),
        }
    }
}
