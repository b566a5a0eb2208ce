//! Reference implementations. None of these call into the library beyond
//! reading its output types.

use std::collections::{HashSet, VecDeque};

use crate::gen::GenStory;

/// Three-colour depth-first search.
pub fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let mut colour = vec![Colour::White; n];
    for root in 0..n {
        if colour[root] != Colour::White {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = Colour::Grey;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                match colour[w] {
                    Colour::Grey => return true,
                    Colour::White => {
                        colour[w] = Colour::Grey;
                        stack.push((w, 0));
                    }
                    Colour::Black => {}
                }
            } else {
                colour[v] = Colour::Black;
                stack.pop();
            }
        }
    }
    false
}

/// Breadth-first reachability from `start`.
pub fn reachable(n: usize, edges: &[(usize, usize)], start: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &(a, b) in edges {
            if a == v && !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// A token as the oracle sees it: kind name and text.
pub type OracleToken = (&'static str, String);

/// Tokenizer written as two passes (blank out comments, then split), unlike
/// the library's single scan.
pub fn tokens(src: &str) -> Option<Vec<OracleToken>> {
    let mut text = String::new();
    let mut rest = src;
    loop {
        let line = rest.find("//");
        let block = rest.find("/*");
        let (at, is_line) = match (line, block) {
            (None, None) => break,
            (Some(l), None) => (l, true),
            (None, Some(b)) => (b, false),
            (Some(l), Some(b)) => (l.min(b), l < b),
        };
        text.push_str(&rest[..at]);
        text.push(' ');
        let after = &rest[at + 2..];
        if is_line {
            rest = match after.find('\n') {
                Some(i) => &after[i..],
                None => "",
            };
        } else {
            let end = after.find("*/")?;
            rest = &after[end + 2..];
        }
    }
    text.push_str(rest);

    let mut out = Vec::new();
    for chunk in text.split(|c: char| c.is_ascii_whitespace()) {
        let mut word = String::new();
        for ch in chunk.chars() {
            if matches!(ch, '{' | '}' | ',') {
                if !word.is_empty() {
                    out.push(classify(std::mem::take(&mut word)));
                }
                let kind = match ch {
                    '{' => "LBrace",
                    '}' => "RBrace",
                    _ => "Comma",
                };
                out.push((kind, ch.to_string()));
            } else {
                word.push(ch);
            }
        }
        if !word.is_empty() {
            out.push(classify(word));
        }
    }
    Some(out)
}

fn classify(word: String) -> OracleToken {
    const KEYWORDS: [&str; 8] = ["STORY", "INITIAL", "SECTION", "WHERE", "GOES", "WHEN", "AND", "OR"];
    if KEYWORDS.contains(&word.as_str()) {
        ("Keyword", word)
    } else {
        ("Word", word)
    }
}

/// Walks a generated story directly. Returns, per signalled event, the
/// notification lines in `-> node [section] via e AND f` form.
pub fn walk(story: &GenStory, events: &[String]) -> Vec<Vec<String>> {
    let order = story.declaration_order();
    let known: HashSet<&str> = story.events.iter().map(String::as_str).collect();
    let mut current = story.initial;
    let mut happened: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    for e in events {
        let mut notes = Vec::new();
        if known.contains(e.as_str()) {
            happened.insert(e.clone());
            loop {
                let next = order
                    .iter()
                    .find(|(src, _, evs)| *src == current && evs.iter().all(|&x| happened.contains(&story.events[x])));
                let Some((_, dst, evs)) = next else { break };
                current = *dst;
                let via: Vec<&str> = evs.iter().map(|&x| story.events[x].as_str()).collect();
                notes.push(format!(
                    "-> {} [{}] via {}",
                    story.labels[current],
                    story.section_names[story.section_of[current]],
                    via.join(" AND ")
                ));
            }
        }
        out.push(notes);
    }
    out
}

/// Final node of [`walk`].
pub fn final_node(story: &GenStory, events: &[String]) -> usize {
    let order = story.declaration_order();
    let mut current = story.initial;
    let mut happened: HashSet<&str> = HashSet::new();
    for e in events {
        happened.insert(e);
        while let Some((_, dst, _)) = order
            .iter()
            .find(|(src, _, evs)| *src == current && evs.iter().all(|&x| happened.contains(story.events[x].as_str())))
        {
            current = *dst;
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_oracle() {
        assert!(!has_cycle(3, &[(0, 1), (1, 2), (0, 2)]));
        assert!(has_cycle(3, &[(0, 1), (1, 2), (2, 0)]));
        assert!(has_cycle(2, &[(1, 1)]));
    }

    #[test]
    fn bfs_oracle() {
        assert_eq!(reachable(4, &[(0, 1), (2, 3)], 0), vec![true, true, false, false]);
    }

    #[test]
    fn token_oracle() {
        let t = tokens("A/*x*/B{c,d}// e\nGOESx GOES").unwrap();
        let kinds: Vec<_> = t.iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds, ["Word", "Word", "LBrace", "Word", "Comma", "Word", "RBrace", "Word", "Keyword"]);
        assert!(tokens("a /* open").is_none());
    }
}
