//! Surface syntax: comments, tokens, the parse tree and its canonical printer.

mod ast;
mod lexer;
mod parser;
mod print;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use ast::{Label, SectionDecl, StoryAst, TransitionDecl};
pub use lexer::{strip_comments, tokenize, Keyword, Token, TokenKind};
pub use parser::parse;
pub use print::print_story;

/// A 1-based, inclusive source range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SourceSpan {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        SourceSpan { start_line, start_col, end_line, end_col }
    }

    /// Smallest span covering both.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unterminated block comment")]
    UnterminatedBlockComment { span: SourceSpan },
    #[error("invalid character {ch:?}: only printable ASCII and whitespace are allowed")]
    InvalidCharacter { ch: char, span: SourceSpan },
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String, span: SourceSpan },
    #[error("missing INITIAL declaration after the story name")]
    MissingInitial { span: SourceSpan },
    #[error("missing story name after STORY")]
    MissingStoryName { span: SourceSpan },
}

impl SyntaxError {
    pub fn span(&self) -> SourceSpan {
        match self {
            SyntaxError::UnterminatedBlockComment { span }
            | SyntaxError::InvalidCharacter { span, .. }
            | SyntaxError::Unexpected { span, .. }
            | SyntaxError::MissingInitial { span }
            | SyntaxError::MissingStoryName { span } => *span,
        }
    }

    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            SyntaxError::UnterminatedBlockComment { .. } => "UnterminatedBlockComment",
            SyntaxError::InvalidCharacter { .. } => "InvalidCharacter",
            SyntaxError::Unexpected { .. } => "SyntaxError",
            SyntaxError::MissingInitial { .. } => "MissingInitial",
            SyntaxError::MissingStoryName { .. } => "MissingStoryName",
        }
    }
}

/// Tokenizes and parses a whole script.
pub fn parse_source(source: &str) -> Result<StoryAst, SyntaxError> {
    parse(&tokenize(source)?)
}
