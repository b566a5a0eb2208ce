//! Seeded generators.
//!
//! [`GenStory`] is a story kept in the generator's own terms (node indices,
//! label strings) so the oracles can walk it without touching the library's
//! model. Sections are contiguous runs of at least two nodes chained by
//! section transitions, which guarantees every node is owned by exactly one
//! section.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use saga::syntax::{Label, SectionDecl, SourceSpan, StoryAst, TransitionDecl};

use crate::Rng;

const LABEL_WORDS: &[&str] = &[
    "Dark", "Forest", "Old", "Temple", "Hero's", "Can't", "Escape", "Final", "Choice", "Battle", "Winding", "Down",
    "Gate", "River", "Tower", "King", "Won't", "x-1", "GOESx", "ORacle", "When", "and", "or", "Story", "initial",
    "WHEREVER", "ANDROID", "#3", "(p)", "[q]", "=", "@home", "$5", "~tilde", "a!b", "why?", "end.", "SECTIONS",
];

const EVENT_WORDS: &[&str] = &[
    "dawn", "hear rumor", "draw sword", "flee", "pray", "curse awakens", "meet stranger", "take blade",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenTransition {
    pub pres: Vec<usize>,
    pub dst: usize,
    pub events: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct GenStory {
    pub name: String,
    pub labels: Vec<String>,
    pub section_names: Vec<String>,
    pub section_of: Vec<usize>,
    pub events: Vec<String>,
    pub initial: usize,
    /// In textual order; each one is written into its own section or, when
    /// it crosses sections, into `WHERE`.
    pub transitions: Vec<GenTransition>,
}

#[derive(Debug, Clone, Copy)]
pub struct StoryOpts {
    pub max_nodes: usize,
    pub max_sections: usize,
    pub max_events: usize,
    /// Chance of each extra forward edge `u -> v`.
    pub edge_prob: f64,
    /// Chance of merging transitions with the same target and events into
    /// one `OR` transition.
    pub or_prob: f64,
    /// Cap on outgoing transitions per node (`usize::MAX` for none).
    pub max_out: usize,
}

impl Default for StoryOpts {
    fn default() -> Self {
        StoryOpts { max_nodes: 10, max_sections: 3, max_events: 4, edge_prob: 0.25, or_prob: 0.0, max_out: usize::MAX }
    }
}

fn pick_events(rng: &mut Rng, m: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=m.min(2));
    let mut all: Vec<usize> = (0..m).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

fn unique_labels(rng: &mut Rng, n: usize, prefix: &str) -> Vec<String> {
    (0..n)
        .map(|i| {
            let words = rng.gen_range(0..=2);
            let mut parts: Vec<String> =
                (0..words).map(|_| LABEL_WORDS.choose(rng).expect("nonempty").to_string()).collect();
            parts.push(format!("{prefix}{i}"));
            parts.shuffle(rng);
            parts.join(" ")
        })
        .collect()
}

impl GenStory {
    pub fn random(rng: &mut Rng, opts: StoryOpts) -> GenStory {
        let n = rng.gen_range(2..=opts.max_nodes.max(2));
        let k = rng.gen_range(1..=opts.max_sections.min(n / 2).max(1));
        let mut sizes = vec![2; k];
        for _ in 0..n - 2 * k {
            let i = rng.gen_range(0..k);
            sizes[i] += 1;
        }
        let mut section_of = Vec::with_capacity(n);
        for (s, size) in sizes.iter().enumerate() {
            section_of.extend(std::iter::repeat_n(s, *size));
        }
        let m = rng.gen_range(1..=opts.max_events.clamp(1, EVENT_WORDS.len()));
        let mut events: Vec<String> = EVENT_WORDS.to_vec().into_iter().map(String::from).collect();
        events.shuffle(rng);
        events.truncate(m);

        let mut out_degree = vec![0usize; n];
        let mut transitions = Vec::new();
        let mut add = |u: usize, v: usize, rng: &mut Rng, out_degree: &mut Vec<usize>| {
            out_degree[u] += 1;
            transitions.push(GenTransition { pres: vec![u], dst: v, events: pick_events(rng, m) });
        };
        for u in 0..n - 1 {
            if section_of[u] == section_of[u + 1] {
                add(u, u + 1, rng, &mut out_degree);
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if out_degree[u] < opts.max_out && rng.gen_bool(opts.edge_prob) {
                    add(u, v, rng, &mut out_degree);
                }
            }
        }
        transitions.shuffle(rng);

        let mut story = GenStory {
            name: unique_labels(rng, 1, "Tale ").remove(0),
            labels: unique_labels(rng, n, "N"),
            section_names: unique_labels(rng, k, "Part "),
            section_of,
            events,
            initial: if rng.gen_bool(0.8) { 0 } else { rng.gen_range(0..n) },
            transitions,
        };
        if opts.or_prob > 0.0 {
            story.merge_or(rng, opts.or_prob);
        }
        story
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Whether the transition belongs inside its target's section.
    pub fn is_internal(&self, t: &GenTransition) -> bool {
        t.pres.iter().all(|&p| self.section_of[p] == self.section_of[t.dst])
    }

    fn merge_or(&mut self, rng: &mut Rng, prob: f64) {
        let mut merged: Vec<GenTransition> = Vec::new();
        for t in std::mem::take(&mut self.transitions) {
            let internal = self.is_internal(&t);
            let target = merged.iter().position(|o| {
                o.dst == t.dst
                    && o.events == t.events
                    && !o.pres.contains(&t.pres[0])
                    && (internal && self.is_internal(o)
                        || !internal && o.pres.iter().all(|&p| self.section_of[p] != self.section_of[t.dst]))
            });
            match target {
                Some(i) if rng.gen_bool(prob) => merged[i].pres.push(t.pres[0]),
                _ => merged.push(t),
            }
        }
        self.transitions = merged;
    }

    pub fn has_or(&self) -> bool {
        self.transitions.iter().any(|t| t.pres.len() > 1)
    }

    /// Transitions after `OR` expansion, in the order the story declares
    /// them: section by section, then `WHERE`.
    pub fn declaration_order(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let expand = |t: &GenTransition| t.pres.iter().map(|&p| (p, t.dst, t.events.clone())).collect::<Vec<_>>();
        let mut out = Vec::new();
        for s in 0..self.section_names.len() {
            for t in self.transitions.iter().filter(|t| self.is_internal(t) && self.section_of[t.dst] == s) {
                out.extend(expand(t));
            }
        }
        for t in self.transitions.iter().filter(|t| !self.is_internal(t)) {
            out.extend(expand(t));
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.declaration_order().into_iter().map(|(u, v, _)| (u, v)).collect()
    }

    pub fn push_transition(&mut self, rng: &mut Rng, u: usize, v: usize) {
        let events = pick_events(rng, self.events.len());
        let at = rng.gen_range(0..=self.transitions.len());
        self.transitions.insert(at, GenTransition { pres: vec![u], dst: v, events });
    }

    fn transition_text(&self, t: &GenTransition, expand_or: bool) -> Vec<String> {
        let events = t.events.iter().map(|&e| self.events[e].as_str()).collect::<Vec<_>>().join(" AND ");
        let dst = &self.labels[t.dst];
        if expand_or {
            t.pres.iter().map(|&p| format!("{} GOES {dst} WHEN {events}", self.labels[p])).collect()
        } else {
            let pres = t.pres.iter().map(|&p| self.labels[p].as_str()).collect::<Vec<_>>().join(" OR ");
            vec![format!("{pres} GOES {dst} WHEN {events}")]
        }
    }

    /// The script text; with `expand_or` every `OR` is written out as
    /// separate transitions in the same place.
    pub fn to_source(&self, expand_or: bool) -> String {
        let mut out = format!("STORY {}\nINITIAL {}\n", self.name, self.labels[self.initial]);
        for (s, name) in self.section_names.iter().enumerate() {
            let lines: Vec<String> = self
                .transitions
                .iter()
                .filter(|t| self.is_internal(t) && self.section_of[t.dst] == s)
                .flat_map(|t| self.transition_text(t, expand_or))
                .collect();
            out.push_str(&format!("\nSECTION {name} {{\n    {}\n}}\n", lines.join(",\n    ")));
        }
        let lines: Vec<String> = self
            .transitions
            .iter()
            .filter(|t| !self.is_internal(t))
            .flat_map(|t| self.transition_text(t, expand_or))
            .collect();
        out.push_str("\nWHERE\n");
        if !lines.is_empty() {
            out.push_str(&format!("    {}\n", lines.join(",\n    ")));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Syntax-level scripts: well-formed by the grammar, not necessarily valid
// stories.

fn random_label(rng: &mut Rng) -> Label {
    let words = rng.gen_range(1..=3);
    let text: Vec<&str> = (0..words).map(|_| *LABEL_WORDS.choose(rng).expect("nonempty")).collect();
    Label::new(&text.join(" "))
}

fn random_transition(rng: &mut Rng) -> TransitionDecl {
    let pres = rng.gen_range(1..=3);
    let events = rng.gen_range(1..=3);
    TransitionDecl {
        pre_nodes: (0..pres).map(|_| random_label(rng)).collect(),
        dest: random_label(rng),
        events: (0..events).map(|_| random_label(rng)).collect(),
        span: SourceSpan::default(),
    }
}

/// A random parse tree, built directly rather than by parsing.
pub fn random_ast(rng: &mut Rng) -> StoryAst {
    let sections = rng.gen_range(1..=3);
    StoryAst {
        story_name: random_label(rng),
        initial: random_label(rng),
        sections: (0..sections)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                SectionDecl {
                    name: random_label(rng),
                    transitions: (0..n).map(|_| random_transition(rng)).collect(),
                    span: SourceSpan::default(),
                }
            })
            .collect(),
        where_clauses: (0..rng.gen_range(0..=2)).map(|_| random_transition(rng)).collect(),
    }
}

fn label_tokens(l: &Label, out: &mut Vec<String>) {
    out.extend(l.canonical().split(' ').map(String::from));
}

fn transition_tokens(t: &TransitionDecl, out: &mut Vec<String>) {
    for (i, p) in t.pre_nodes.iter().enumerate() {
        if i > 0 {
            out.push("OR".into());
        }
        label_tokens(p, out);
    }
    out.push("GOES".into());
    label_tokens(&t.dest, out);
    out.push("WHEN".into());
    for (i, e) in t.events.iter().enumerate() {
        if i > 0 {
            out.push("AND".into());
        }
        label_tokens(e, out);
    }
}

fn list_tokens(ts: &[TransitionDecl], out: &mut Vec<String>) {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            out.push(",".into());
        }
        transition_tokens(t, out);
    }
}

/// The token sequence a script for `ast` consists of.
pub fn ast_tokens(ast: &StoryAst) -> Vec<String> {
    let mut out = vec!["STORY".to_string()];
    label_tokens(&ast.story_name, &mut out);
    out.push("INITIAL".into());
    label_tokens(&ast.initial, &mut out);
    for s in &ast.sections {
        out.push("SECTION".into());
        label_tokens(&s.name, &mut out);
        out.push("{".into());
        list_tokens(&s.transitions, &mut out);
        out.push("}".into());
    }
    out.push("WHERE".into());
    list_tokens(&ast.where_clauses, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    /// Single spaces.
    None,
    /// Random runs of spaces, tabs and newlines, and no space at all next to
    /// punctuation.
    Whitespace,
    /// Like `Whitespace`, with line and block comments mixed in.
    Comments,
}

fn is_punct(tok: &str) -> bool {
    matches!(tok, "{" | "}" | ",")
}

const COMMENTS: &[&str] = &["/* note */", "// line note\n", "/* two\nlines */", "/**/", "/* GOES { , } */", "//\n"];
const SPACES: &[&str] = &[" ", "  ", "\t", "\n", " \n\t ", "\r\n", "\n\n"];

/// Joins tokens into script text with the requested amount of noise between
/// them.
pub fn join_tokens(rng: &mut Rng, tokens: &[String], noise: Noise) -> String {
    let mut out = String::new();
    for (i, tok) in tokens.iter().enumerate() {
        if i > 0 {
            let needs_gap = !is_punct(tok) && !is_punct(&tokens[i - 1]);
            match noise {
                Noise::None => out.push(' '),
                Noise::Whitespace | Noise::Comments => {
                    let mut gap = String::new();
                    if needs_gap || rng.gen_bool(0.5) {
                        gap.push_str(SPACES.choose(rng).expect("nonempty"));
                    }
                    if noise == Noise::Comments && rng.gen_bool(0.3) {
                        gap.push_str(COMMENTS.choose(rng).expect("nonempty"));
                        if rng.gen_bool(0.5) {
                            gap.push_str(SPACES.choose(rng).expect("nonempty"));
                        }
                    }
                    out.push_str(&gap);
                }
            }
        }
        out.push_str(tok);
    }
    if noise == Noise::Comments && rng.gen_bool(0.3) {
        out.push_str(" // trailing");
    }
    out
}

/// Raw text for tokenizer fuzzing: keywords, keyword look-alikes,
/// punctuation and comments glued together in arbitrary order.
pub fn random_token_soup(rng: &mut Rng) -> String {
    const PIECES: &[&str] = &[
        "STORY", "INITIAL", "SECTION", "WHERE", "GOES", "WHEN", "AND", "OR", "GOESx", "xGOES", "goes", "ANDOR", "OR2",
        "Can't", "Hero's", "{", "}", ",", "a,b", "{x}", "/* c */", "// c\n", "/*\n*/", "word", "x-1", "@", "!?",
        "Won't",
    ];
    let n = rng.gen_range(1..=30);
    let mut out = String::new();
    for _ in 0..n {
        out.push_str(PIECES.choose(rng).expect("nonempty"));
        if rng.gen_bool(0.6) {
            out.push_str(SPACES.choose(rng).expect("nonempty"));
        }
    }
    out
}

/// Distinct event-label subsets used as signal alphabets.
pub fn event_alphabet(story: &GenStory, extra_unknown: bool) -> Vec<String> {
    let mut set: BTreeSet<String> = story.events.iter().cloned().collect();
    if extra_unknown {
        set.insert("thunder".into());
    }
    set.into_iter().collect()
}
