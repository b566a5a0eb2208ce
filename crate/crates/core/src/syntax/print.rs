use std::fmt::Write;

use super::ast::{Label, StoryAst, TransitionDecl};

fn join(labels: &[Label], sep: &str) -> String {
    labels.iter().map(Label::canonical).collect::<Vec<_>>().join(sep)
}

fn transition(t: &TransitionDecl) -> String {
    format!("{} GOES {} WHEN {}", join(&t.pre_nodes, " OR "), t.dest, join(&t.events, " AND "))
}

fn transition_list(out: &mut String, ts: &[TransitionDecl]) {
    for (i, t) in ts.iter().enumerate() {
        let sep = if i + 1 < ts.len() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", transition(t));
    }
}

/// Prints a story in canonical layout. Parsing the result gives back an
/// equal [`StoryAst`].
pub fn print_story(ast: &StoryAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "STORY {}", ast.story_name);
    let _ = writeln!(out, "INITIAL {}", ast.initial);
    for s in &ast.sections {
        let _ = writeln!(out, "\nSECTION {} {{", s.name);
        transition_list(&mut out, &s.transitions);
        out.push_str("}\n");
    }
    out.push_str("\nWHERE\n");
    transition_list(&mut out, &ast.where_clauses);
    out
}
