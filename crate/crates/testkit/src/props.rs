//! Property checks. Each returns the number of checks made, or the first
//! counterexample.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng as _;
use saga::model::{reachability_report, resolve, validate_dag, StoryGraph};
use saga::syntax::{parse_source, print_story, tokenize, TokenKind};
use saga::StoryState;

use crate::gen::{ast_tokens, join_tokens, random_ast, random_token_soup, GenStory, Noise, StoryOpts};
use crate::{oracle, rng};

pub type PropResult = Result<usize, String>;

/// Parses and resolves a generated story, without the DAG check.
pub fn build_graph(src: &str) -> Result<StoryGraph, String> {
    let ast = parse_source(src).map_err(|e| format!("parse error {e}\n{src}"))?;
    let (graph, _) = resolve(&ast).map_err(|d| {
        let lines: Vec<_> = d.iter().map(|d| d.to_line("gen")).collect();
        format!("resolve failed: {}\n{src}", lines.join("; "))
    })?;
    Ok(graph)
}

fn kind_name(k: TokenKind) -> &'static str {
    match k {
        TokenKind::Keyword(_) => "Keyword",
        TokenKind::Word => "Word",
        TokenKind::LBrace => "LBrace",
        TokenKind::RBrace => "RBrace",
        TokenKind::Comma => "Comma",
        TokenKind::Eof => "Eof",
    }
}

/// The tokenizer agrees with the two-pass oracle, and every token's span
/// covers exactly its lexeme.
pub fn tokenizer_matches_oracle(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    for case in 0..cases {
        let src = random_token_soup(&mut r);
        let expected = oracle::tokens(&src);
        let got = tokenize(&src);
        match (expected, got) {
            (None, Err(_)) => continue,
            (Some(exp), Ok(toks)) => {
                let got: Vec<_> = toks
                    .iter()
                    .filter(|t| t.kind != TokenKind::Eof)
                    .map(|t| (kind_name(t.kind), t.lexeme.clone()))
                    .collect();
                if got != exp {
                    return Err(format!("case {case}: {src:?}\n  oracle {exp:?}\n  lexer  {got:?}"));
                }
                let lines: Vec<&str> = src.split('\n').collect();
                for t in toks.iter().filter(|t| t.kind != TokenKind::Eof) {
                    let s = t.span;
                    let line = lines[(s.start_line - 1) as usize];
                    let text = &line[(s.start_col - 1) as usize..s.end_col as usize];
                    if s.start_line != s.end_line || text != t.lexeme {
                        return Err(format!("case {case}: span {s:?} covers {text:?}, lexeme {:?}", t.lexeme));
                    }
                }
            }
            (exp, got) => return Err(format!("case {case}: {src:?}: oracle {exp:?}, lexer {got:?}")),
        }
    }
    Ok(cases)
}

/// Printing then parsing gives back the same tree; so does any amount of
/// extra whitespace or comments between tokens.
pub fn parse_print_invariance(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    for case in 0..cases {
        let ast = random_ast(&mut r);
        let printed = print_story(&ast);
        match parse_source(&printed) {
            Ok(back) if back == ast => {}
            other => return Err(format!("case {case}: round trip failed for\n{printed}\n{other:?}")),
        }
        if print_story(&parse_source(&printed).expect("checked")) != printed {
            return Err(format!("case {case}: printing is not stable\n{printed}"));
        }
        let tokens = ast_tokens(&ast);
        for noise in [Noise::None, Noise::Whitespace, Noise::Comments] {
            let src = join_tokens(&mut r, &tokens, noise);
            match parse_source(&src) {
                Ok(back) if back == ast => {}
                other => return Err(format!("case {case}: {noise:?} changed the parse of\n{src}\n{other:?}")),
            }
        }
    }
    Ok(cases)
}

/// Damaged scripts fail with a span that lies inside the input.
pub fn error_spans_in_input(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    let mut errors = 0;
    for case in 0..cases {
        let mut tokens = ast_tokens(&random_ast(&mut r));
        let i = r.gen_range(0..tokens.len());
        match r.gen_range(0..3) {
            0 => {
                tokens.remove(i);
            }
            1 => {
                let t = tokens[i].clone();
                tokens.insert(i, t);
            }
            _ => tokens[i] = ["{", "}", ",", "GOES", "/* open"].choose(&mut r).expect("nonempty").to_string(),
        }
        let src = join_tokens(&mut r, &tokens, Noise::Whitespace);
        if let Err(e) = parse_source(&src) {
            errors += 1;
            let s = e.span();
            let lines: Vec<&str> = src.split('\n').collect();
            let line_ok = s.start_line >= 1 && (s.start_line as usize) <= lines.len();
            let col_ok = line_ok && s.start_col >= 1 && (s.start_col as usize) <= lines[s.start_line as usize - 1].len() + 1;
            if !col_ok {
                return Err(format!("case {case}: span {s:?} outside input\n{src}"));
            }
        }
    }
    Ok(errors)
}

/// Validation agrees with the depth-first cycle oracle; every DAG's order is
/// topological; a back edge along a known path is always rejected.
pub fn dag_matches_dfs(cases: usize, seed: u64, max_nodes: usize) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes, max_sections: 4, edge_prob: 0.2, ..StoryOpts::default() };
    let mut checks = 0;
    for case in 0..cases {
        let story = GenStory::random(&mut r, opts);

        // Forward edges only: must validate with a topological order.
        let graph = build_graph(&story.to_source(false))?;
        match validate_dag(&graph) {
            Ok(order) => {
                let pos: Vec<usize> = {
                    let mut p = vec![usize::MAX; order.len()];
                    for (i, v) in order.iter().enumerate() {
                        p[v.index()] = i;
                    }
                    p
                };
                let seen: HashSet<_> = order.iter().collect();
                if seen.len() != graph.nodes.len() {
                    return Err(format!("case {case}: order is not a permutation"));
                }
                for (_, t) in graph.transitions() {
                    if pos[t.src.index()] >= pos[t.dst.index()] {
                        return Err(format!("case {case}: order puts dst before src"));
                    }
                }
            }
            Err(c) => return Err(format!("case {case}: forward-only story rejected: {:?}\n{}", c.cycle, story.to_source(false))),
        }
        checks += 1;

        // One back edge inside a section: the chain guarantees a path.
        let mut cyclic = story.clone();
        let s = r.gen_range(0..story.section_names.len());
        let members: Vec<usize> = (0..story.node_count()).filter(|&v| story.section_of[v] == s).collect();
        let a = r.gen_range(0..members.len() - 1);
        let b = r.gen_range(a + 1..members.len());
        cyclic.push_transition(&mut r, members[b], members[a]);
        let graph = build_graph(&cyclic.to_source(false))?;
        match validate_dag(&graph) {
            Err(c) => check_cycle(&graph, &c.cycle).map_err(|e| format!("case {case}: {e}"))?,
            Ok(_) => return Err(format!("case {case}: back edge accepted\n{}", cyclic.to_source(false))),
        }
        checks += 1;

        // Random extra edges anywhere; the oracle decides.
        let mut mixed = story.clone();
        for _ in 0..r.gen_range(1..=3) {
            let u = r.gen_range(0..story.node_count());
            let v = r.gen_range(0..story.node_count());
            if u != v {
                mixed.push_transition(&mut r, u, v);
            }
        }
        let Ok(graph) = build_graph(&mixed.to_source(false)) else {
            // An extra edge may merge sections or cross them illegally;
            // those scripts are not graphs to compare on.
            continue;
        };
        let edges: Vec<(usize, usize)> = graph.transitions().map(|(_, t)| (t.src.index(), t.dst.index())).collect();
        let expected = oracle::has_cycle(graph.nodes.len(), &edges);
        match (expected, validate_dag(&graph)) {
            (false, Ok(_)) => {}
            (true, Err(c)) => check_cycle(&graph, &c.cycle).map_err(|e| format!("case {case}: {e}"))?,
            (exp, got) => {
                return Err(format!("case {case}: oracle cycle={exp}, validate_dag {got:?}\n{}", mixed.to_source(false)))
            }
        }
        checks += 1;
    }
    Ok(checks)
}

fn check_cycle(graph: &StoryGraph, cycle: &[saga::model::NodeId]) -> Result<(), String> {
    if cycle.len() < 3 || cycle.first() != cycle.last() {
        return Err(format!("reported cycle {cycle:?} is not closed"));
    }
    for w in cycle.windows(2) {
        if !graph.transitions().any(|(_, t)| t.src == w[0] && t.dst == w[1]) {
            return Err(format!("reported cycle uses missing edge {:?} -> {:?}", w[0], w[1]));
        }
    }
    Ok(())
}

/// Unreachable warnings name exactly the nodes breadth-first search from the
/// initial node misses.
pub fn reachability_matches_bfs(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes: 14, max_sections: 4, edge_prob: 0.1, ..StoryOpts::default() };
    for case in 0..cases {
        let story = GenStory::random(&mut r, opts);
        let graph = build_graph(&story.to_source(false))?;
        let seen = oracle::reachable(story.node_count(), &story.edges(), story.initial);
        let expected: BTreeSet<String> =
            (0..story.node_count()).filter(|&v| !seen[v]).map(|v| story.labels[v].clone()).collect();
        let got: BTreeSet<String> = reachability_report(&graph)
            .into_iter()
            .filter(|d| d.code == "Unreachable")
            .map(|d| d.message.split('`').nth(1).unwrap_or_default().to_string())
            .collect();
        if got != expected {
            return Err(format!("case {case}: unreachable {got:?}, oracle {expected:?}\n{}", story.to_source(false)));
        }
    }
    Ok(cases)
}

fn notes_text(notes: &[saga::Notification]) -> Vec<String> {
    notes.iter().map(|n| n.to_string()).collect()
}

/// Runs every event sequence up to `depth` over `alphabet` on both graphs,
/// sharing prefixes, and compares notifications step by step.
fn compare_all_sequences(
    a: &StoryGraph,
    b: &StoryGraph,
    alphabet: &[String],
    depth: usize,
) -> Result<usize, Vec<String>> {
    fn go(
        a: &StoryGraph,
        b: &StoryGraph,
        sa: &StoryState,
        sb: &StoryState,
        alphabet: &[String],
        depth: usize,
        prefix: &mut Vec<String>,
    ) -> Result<usize, Vec<String>> {
        if depth == 0 {
            return Ok(0);
        }
        let mut count = 0;
        for e in alphabet {
            let (mut na, mut nb) = (sa.clone(), sb.clone());
            let (xa, xb) = (na.signal(a, e), nb.signal(b, e));
            prefix.push(e.clone());
            if notes_text(&xa) != notes_text(&xb) {
                return Err(prefix.clone());
            }
            count += 1 + go(a, b, &na, &nb, alphabet, depth - 1, prefix)?;
            prefix.pop();
        }
        Ok(count)
    }
    go(a, b, &StoryState::new(a), &StoryState::new(b), alphabet, depth, &mut Vec::new())
}

/// An `OR` story and its hand-expanded twin notify identically on every
/// event sequence up to length `depth`.
pub fn or_desugaring_equivalence(cases: usize, seed: u64, max_nodes: usize, depth: usize) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes, max_sections: 2, max_events: 3, edge_prob: 0.6, or_prob: 0.9, max_out: usize::MAX };
    let mut sequences = 0;
    for case in 0..cases {
        let story = loop {
            let s = GenStory::random(&mut r, opts);
            if s.has_or() {
                break s;
            }
        };
        let or_form = story.to_source(false);
        let expanded = story.to_source(true);
        let a = build_graph(&or_form)?;
        let b = build_graph(&expanded)?;
        if a.canonical_text() != b.canonical_text() {
            return Err(format!("case {case}: desugared graphs differ\n{or_form}\n{expanded}"));
        }
        let alphabet: Vec<String> = story.events.clone();
        sequences += compare_all_sequences(&a, &b, &alphabet, depth)
            .map_err(|seq| format!("case {case}: notifications differ after {seq:?}\n{or_form}\n{expanded}"))?;
    }
    Ok(sequences)
}

fn random_sequence(r: &mut crate::Rng, story: &GenStory) -> Vec<String> {
    let len = r.gen_range(1..=15);
    (0..len)
        .map(|_| if r.gen_bool(0.1) { "thunder".to_string() } else { story.events.choose(r).expect("nonempty").clone() })
        .collect()
}

/// Over random event sequences: events only accumulate, no node is entered
/// twice, one signal fires at most `nodes - 1` transitions, replays are
/// identical, and the notifications match the reference walk.
pub fn runtime_laws(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes: 12, max_sections: 3, edge_prob: 0.3, ..StoryOpts::default() };
    for case in 0..cases {
        let story = GenStory::random(&mut r, opts);
        let graph = build_graph(&story.to_source(false))?;
        let seq = random_sequence(&mut r, &story);
        let fail = |what: &str| Err(format!("case {case}: {what} on {seq:?}\n{}", story.to_source(false)));

        let mut state = StoryState::new(&graph);
        let mut before: BTreeSet<String> = BTreeSet::new();
        let mut visited = HashSet::from([graph.initial]);
        let mut transcript = Vec::new();
        for e in &seq {
            let notes = state.signal(&graph, e);
            if notes.len() >= graph.nodes.len().max(1) {
                return fail("too many hops in one signal");
            }
            let after: BTreeSet<String> = state.happened_labels(&graph).into_iter().collect();
            if !before.is_subset(&after) || !after.contains(e) {
                return fail("event set shrank or lost the signal");
            }
            before = after;
            transcript.push(notes_text(&notes));
        }
        for h in &state.history {
            if !visited.insert(h.resulting_node) {
                return fail("node revisited");
            }
        }
        let mut replay = StoryState::new(&graph);
        let again: Vec<_> = seq.iter().map(|e| notes_text(&replay.signal(&graph, e))).collect();
        if again != transcript || replay != state {
            return fail("replay differs");
        }
        if transcript != oracle::walk(&story, &seq) {
            return fail("differs from the reference walk");
        }
        if graph.node_label(state.current) != story.labels[oracle::final_node(&story, &seq)] {
            return fail("final node differs from the reference walk");
        }
    }
    Ok(cases)
}

/// Before each signal, the transition that fires first is the first
/// candidate whose only missing events are the one being signalled.
pub fn enabled_predicts_signal(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes: 10, edge_prob: 0.35, ..StoryOpts::default() };
    let mut checks = 0;
    for case in 0..cases {
        let story = GenStory::random(&mut r, opts);
        let graph = build_graph(&story.to_source(false))?;
        let mut state = StoryState::new(&graph);
        for e in random_sequence(&mut r, &story) {
            let candidates = state.enabled_transitions(&graph);
            if candidates.iter().any(|c| c.is_ready()) {
                return Err(format!("case {case}: a ready transition was left unfired"));
            }
            let id = graph.event_id(&e);
            let predicted = candidates.iter().find(|c| id.is_some() && c.missing.iter().all(|m| Some(*m) == id));
            let fired_before = state.history.len();
            state.signal(&graph, &e);
            let first = state.history.get(fired_before).map(|h| h.transition);
            if first != predicted.map(|c| c.transition) {
                return Err(format!("case {case}: predicted {predicted:?}, fired {first:?} on `{e}`"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// On stories where each node has at most one way out, the node reached
/// from a set of events does not depend on the order they arrive in.
pub fn permutation_invariance(cases: usize, seed: u64) -> PropResult {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes: 8, max_events: 5, edge_prob: 0.3, max_out: 1, ..StoryOpts::default() };
    let mut checks = 0;
    for case in 0..cases {
        let story = GenStory::random(&mut r, opts);
        let graph = build_graph(&story.to_source(false))?;
        let mut set = story.events.clone();
        set.shuffle(&mut r);
        set.truncate(r.gen_range(1..=set.len().min(5)));
        let mut finals = BTreeSet::new();
        for perm in permutations(&set) {
            let mut state = StoryState::new(&graph);
            for e in &perm {
                state.signal(&graph, e);
            }
            finals.insert(state.current);
            checks += 1;
        }
        if finals.len() != 1 {
            return Err(format!("case {case}: events {set:?} reach {finals:?}\n{}", story.to_source(false)));
        }
    }
    Ok(checks)
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}
