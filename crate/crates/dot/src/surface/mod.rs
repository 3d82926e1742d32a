//! Concrete surface syntax: a lexer, a recursive-descent parser, a
//! pretty-printer that inverts the parser up to alpha-equivalence, and a
//! JSON reader/writer for derivation documents.

mod deriv;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use deriv::{derivation_from_json, derivation_to_json, DerivError};
pub use parser::{
    parse_context, parse_context_with, parse_defs, parse_defs_with, parse_term, parse_term_with,
    parse_type, parse_type_with, Resolver,
};
pub use printer::{print_context, print_defs, print_judgment, print_term, print_type};

/// A source location, in bytes and line/column (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at {span}")]
    UnexpectedChar { found: char, span: SourceSpan },
    #[error("expected {expected} but found {found} at {span}")]
    UnexpectedToken {
        expected: String,
        found: String,
        span: SourceSpan,
    },
    #[error("unexpected end of input; expected {expected}")]
    UnexpectedEof { expected: String },
    #[error("expected end of input but found {found} at {span}")]
    TrailingInput { found: String, span: SourceSpan },
    #[error("receivers must be variables; bind the inner term with let first (at {span})")]
    NotAnf { span: SourceSpan },
    #[error("type member {label} needs bounds, write {{{label}: S .. U}} (at {span})")]
    TypeMemberNeedsBounds { label: String, span: SourceSpan },
    #[error("variable {name} is bound twice in the context (at {span})")]
    DuplicateContextBinding { name: String, span: SourceSpan },
}
