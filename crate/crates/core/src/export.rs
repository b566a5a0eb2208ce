//! Graphviz and JSON views of a story graph.

use serde::{Deserialize, Serialize};

use crate::model::StoryGraph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

fn edge_label(graph: &StoryGraph, events: &[crate::model::EventId]) -> String {
    events.iter().map(|e| graph.event_label(*e)).collect::<Vec<_>>().join(" AND ")
}

/// One cluster per section, the initial node double-circled, `WHERE`
/// transitions dashed. Clusters and edges follow declaration order.
pub fn to_dot(graph: &StoryGraph) -> String {
    let mut out = format!("digraph {} {{\n", quote(&graph.name));
    out.push_str("    node [shape=ellipse];\n");
    for (i, s) in graph.sections.iter().enumerate() {
        out.push_str(&format!("    subgraph cluster_{i} {{\n"));
        out.push_str(&format!("        label={};\n", quote(&s.name)));
        for n in &s.nodes {
            let shape = if *n == graph.initial { ", shape=doublecircle" } else { "" };
            out.push_str(&format!("        n{} [label={}{shape}];\n", n.index(), quote(graph.node_label(*n))));
        }
        out.push_str("    }\n");
    }
    for (r, t) in graph.transitions() {
        let style = if r.is_section() { ", style=dashed" } else { "" };
        out.push_str(&format!(
            "    n{} -> n{} [label={}{style}];\n",
            t.src.index(),
            t.dst.index(),
            quote(&edge_label(graph, &t.events))
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub story: String,
    pub initial: String,
    pub sections: Vec<SectionEntry>,
    pub transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionEntry {
    pub name: String,
    pub nodes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionKind {
    Node,
    Section,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionEntry {
    pub src: String,
    pub dst: String,
    pub events: Vec<String>,
    pub kind: TransitionKind,
}

pub fn graph_document(graph: &StoryGraph) -> GraphDocument {
    GraphDocument {
        story: graph.name.clone(),
        initial: graph.node_label(graph.initial).to_string(),
        sections: graph
            .sections
            .iter()
            .map(|s| SectionEntry {
                name: s.name.clone(),
                nodes: s.nodes.iter().map(|n| graph.node_label(*n).to_string()).collect(),
            })
            .collect(),
        transitions: graph
            .transitions()
            .map(|(r, t)| TransitionEntry {
                src: graph.node_label(t.src).to_string(),
                dst: graph.node_label(t.dst).to_string(),
                events: t.events.iter().map(|e| graph.event_label(*e).to_string()).collect(),
                kind: if r.is_section() { TransitionKind::Section } else { TransitionKind::Node },
            })
            .collect(),
    }
}

pub fn to_graph_json(graph: &StoryGraph) -> String {
    serde_json::to_string_pretty(&graph_document(graph)).expect("graph document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Story;

    #[test]
    fn single_edge() {
        let s = Story::from_source("STORY T INITIAL A SECTION S { A GOES B WHEN e } WHERE").unwrap();
        let dot = to_dot(&s.graph);
        assert_eq!(dot.matches("subgraph cluster_").count(), 1);
        assert!(dot.contains("n0 [label=\"A\", shape=doublecircle];"));
        assert!(dot.contains("n0 -> n1 [label=\"e\"];"));
        let doc = graph_document(&s.graph);
        assert_eq!(doc.transitions.len(), 1);
        assert_eq!(doc.transitions[0].kind, TransitionKind::Node);
    }

    #[test]
    fn where_edges_are_dashed() {
        let src = "STORY T INITIAL A SECTION X { A GOES B WHEN e } SECTION Y { C GOES D WHEN f } \
                   WHERE B GOES C WHEN g AND h";
        let s = Story::from_source(src).unwrap();
        assert!(to_dot(&s.graph).contains("n1 -> n2 [label=\"g AND h\", style=dashed];"));
        let json: serde_json::Value = serde_json::from_str(&to_graph_json(&s.graph)).unwrap();
        assert_eq!(json["transitions"][2]["kind"], "section");
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
    }
}
