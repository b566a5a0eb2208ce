//! Parse tree. Equality is structural: spans are carried for diagnostics
//! but never compared.

use std::fmt;

use super::SourceSpan;

/// A multi-word phrase naming a story, section, node or event.
#[derive(Debug, Clone, Eq)]
pub struct Label {
    text: String,
    pub span: SourceSpan,
}

impl Label {
    /// Builds a label from its words. Callers must not pass empty words or
    /// words containing whitespace.
    pub fn from_words<I, S>(words: I, span: SourceSpan) -> Label
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut text = String::new();
        for w in words {
            if !text.is_empty() {
                text.push(' ');
            }
            text.push_str(w.as_ref());
        }
        Label { text, span }
    }

    /// Whitespace-normalizing constructor; handy for tests and tooling.
    pub fn new(phrase: &str) -> Label {
        Label::from_words(phrase.split_whitespace(), SourceSpan::default())
    }

    /// Words joined by single spaces.
    pub fn canonical(&self) -> &str {
        &self.text
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.text.split(' ')
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl std::hash::Hash for Label {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Eq)]
pub struct TransitionDecl {
    pub pre_nodes: Vec<Label>,
    pub dest: Label,
    pub events: Vec<Label>,
    pub span: SourceSpan,
}

impl PartialEq for TransitionDecl {
    fn eq(&self, other: &Self) -> bool {
        self.pre_nodes == other.pre_nodes && self.dest == other.dest && self.events == other.events
    }
}

impl TransitionDecl {
    /// Splits an `A OR B GOES C` declaration into one declaration per source,
    /// preserving source order.
    pub fn desugar_or(&self) -> Vec<TransitionDecl> {
        self.pre_nodes
            .iter()
            .map(|src| TransitionDecl {
                pre_nodes: vec![src.clone()],
                dest: self.dest.clone(),
                events: self.events.clone(),
                span: self.span,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Eq)]
pub struct SectionDecl {
    pub name: Label,
    pub transitions: Vec<TransitionDecl>,
    pub span: SourceSpan,
}

impl PartialEq for SectionDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.transitions == other.transitions
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryAst {
    pub story_name: Label,
    pub initial: Label,
    pub sections: Vec<SectionDecl>,
    pub where_clauses: Vec<TransitionDecl>,
}

impl StoryAst {
    /// The same story with every `OR` expanded in place.
    pub fn desugared(&self) -> StoryAst {
        let expand = |ts: &[TransitionDecl]| ts.iter().flat_map(TransitionDecl::desugar_or).collect();
        StoryAst {
            story_name: self.story_name.clone(),
            initial: self.initial.clone(),
            sections: self
                .sections
                .iter()
                .map(|s| SectionDecl { name: s.name.clone(), transitions: expand(&s.transitions), span: s.span })
                .collect(),
            where_clauses: expand(&self.where_clauses),
        }
    }
}
