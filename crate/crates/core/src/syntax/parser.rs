//! Recursive-descent parser over the token stream. The first error aborts.

use super::ast::{Label, SectionDecl, StoryAst, TransitionDecl};
use super::lexer::{Keyword, Token, TokenKind};
use super::SyntaxError;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        // The stream always ends with Eof; never run past it.
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn bump(&mut self) -> &'t Token {
        let tok = self.peek();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: impl Into<String>) -> SyntaxError {
        let tok = self.peek();
        SyntaxError::Unexpected { expected: expected.into(), found: tok.describe(), span: tok.span }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&'t Token, SyntaxError> {
        if self.at(kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(kind.to_string()))
        }
    }

    /// One or more words, absorbed greedily.
    fn label(&mut self, what: &str) -> Result<Label, SyntaxError> {
        let first = self.peek();
        if first.kind != TokenKind::Word {
            return Err(self.unexpected(what));
        }
        let start = self.pos;
        while self.at(TokenKind::Word) {
            self.bump();
        }
        let words = &self.tokens[start..self.pos];
        let span = first.span.to(words[words.len() - 1].span);
        Ok(Label::from_words(words.iter().map(|t| t.lexeme.as_str()), span))
    }

    fn separated(&mut self, sep: Keyword, what: &str) -> Result<Vec<Label>, SyntaxError> {
        let mut out = vec![self.label(what)?];
        while self.at(TokenKind::Keyword(sep)) {
            self.bump();
            out.push(self.label(what)?);
        }
        Ok(out)
    }

    fn transition(&mut self) -> Result<TransitionDecl, SyntaxError> {
        let start = self.peek().span;
        let pre_nodes = self.separated(Keyword::Or, "a node label")?;
        self.expect(TokenKind::Keyword(Keyword::Goes)).map_err(|_| self.unexpected("`OR` or `GOES`"))?;
        let dest = self.label("a destination node label")?;
        self.expect(TokenKind::Keyword(Keyword::When))?;
        let events = self.separated(Keyword::And, "an event label")?;
        let end = events.last().map(|l| l.span).unwrap_or(start);
        Ok(TransitionDecl { pre_nodes, dest, events, span: start.to(end) })
    }

    fn transition_list(&mut self) -> Result<Vec<TransitionDecl>, SyntaxError> {
        let mut out = vec![self.transition()?];
        while self.at(TokenKind::Comma) {
            self.bump();
            out.push(self.transition()?);
        }
        Ok(out)
    }

    fn section(&mut self) -> Result<SectionDecl, SyntaxError> {
        let start = self.expect(TokenKind::Keyword(Keyword::Section))?.span;
        let name = self.label("a section name")?;
        self.expect(TokenKind::LBrace)?;
        let transitions = self.transition_list()?;
        let close = self.expect(TokenKind::RBrace).map_err(|_| self.unexpected("`,` or `}`"))?;
        Ok(SectionDecl { name, transitions, span: start.to(close.span) })
    }

    fn story(&mut self) -> Result<StoryAst, SyntaxError> {
        self.expect(TokenKind::Keyword(Keyword::Story))?;
        if !self.at(TokenKind::Word) {
            return Err(SyntaxError::MissingStoryName { span: self.peek().span });
        }
        let story_name = self.label("a story name")?;
        if !self.at(TokenKind::Keyword(Keyword::Initial)) {
            return Err(SyntaxError::MissingInitial { span: self.peek().span });
        }
        self.bump();
        let initial = self.label("an initial node label")?;

        let mut sections = vec![self.section()?];
        while self.at(TokenKind::Keyword(Keyword::Section)) {
            sections.push(self.section()?);
        }
        if !self.at(TokenKind::Keyword(Keyword::Where)) {
            return Err(self.unexpected("`SECTION` or `WHERE`"));
        }
        self.bump();
        let where_clauses = if self.at(TokenKind::Eof) { Vec::new() } else { self.transition_list()? };
        if !self.at(TokenKind::Eof) {
            return Err(self.unexpected("`,` or end of input"));
        }
        Ok(StoryAst { story_name, initial, sections, where_clauses })
    }
}

/// Parses a token stream produced by [`tokenize`](super::tokenize).
pub fn parse(tokens: &[Token]) -> Result<StoryAst, SyntaxError> {
    if tokens.last().map(|t| t.kind) != Some(TokenKind::Eof) {
        let span = tokens.last().map(|t| t.span).unwrap_or_default();
        return Err(SyntaxError::Unexpected {
            expected: "end of input".into(),
            found: "a token stream without EOF".into(),
            span,
        });
    }
    Parser { tokens, pos: 0 }.story()
}
