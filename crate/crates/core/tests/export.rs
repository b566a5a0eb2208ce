use std::collections::BTreeMap;

use saga::export::{graph_document, to_dot, to_graph_json, GraphDocument, TransitionKind};
use saga::{Story, StoryGraph};
use saga_testkit::gen::{GenStory, StoryOpts};
use saga_testkit::rng;

fn graphs() -> Vec<StoryGraph> {
    let mut r = rng(31);
    let mut out = vec![Story::from_source(saga::SAMPLE_STORY).unwrap().graph];
    for _ in 0..100 {
        let g = GenStory::random(&mut r, StoryOpts { or_prob: 0.3, ..StoryOpts::default() });
        out.push(Story::from_source(&g.to_source(false)).unwrap().graph);
    }
    out
}

#[test]
fn dot_has_one_edge_per_transition_and_one_cluster_per_node() {
    for g in graphs() {
        let dot = to_dot(&g);
        assert_eq!(dot.lines().filter(|l| l.contains(" -> ")).count(), g.transition_count());
        assert_eq!(dot.matches("subgraph cluster_").count(), g.sections.len());

        // Each node is declared exactly once, inside some cluster.
        let mut declared: BTreeMap<String, usize> = BTreeMap::new();
        let mut depth = 0;
        for line in dot.lines() {
            let t = line.trim();
            if t.ends_with('{') {
                depth += 1;
            } else if t == "}" {
                depth -= 1;
            } else if t.starts_with('n') && t.contains(" [label=") && !t.contains(" -> ") {
                assert_eq!(depth, 2, "node outside a cluster: {t}");
                *declared.entry(t.split(' ').next().unwrap().to_string()).or_default() += 1;
            }
        }
        assert_eq!(depth, 0);
        assert_eq!(declared.len(), g.nodes.len());
        assert!(declared.values().all(|&n| n == 1));
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches("style=dashed").count(), g.section_transitions.len());
    }
}

#[test]
fn dot_labels_are_quoted() {
    let g = Story::from_source(saga::SAMPLE_STORY).unwrap().graph;
    let dot = to_dot(&g);
    assert!(dot.starts_with("digraph \"Sealed Fate\" {\n"));
    assert!(dot.contains("[label=\"Good Won't Save You\"]"));
    assert!(dot.contains("[label=\"use power AND harm innocent\"]"));
    // Quote characters balance on every line.
    for line in dot.lines() {
        assert_eq!(line.replace("\\\"", "").matches('"').count() % 2, 0, "{line}");
    }
}

#[test]
fn json_round_trips_and_mirrors_the_graph() {
    for g in graphs() {
        let text = to_graph_json(&g);
        let doc: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, graph_document(&g));
        assert_eq!(doc.story, g.name);
        assert_eq!(doc.initial, g.node_label(g.initial));
        assert_eq!(doc.transitions.len(), g.transition_count());
        let nodes: usize = doc.sections.iter().map(|s| s.nodes.len()).sum();
        assert_eq!(nodes, g.nodes.len());
        let section_kind = doc.transitions.iter().filter(|t| t.kind == TransitionKind::Section).count();
        assert_eq!(section_kind, g.section_transitions.len());
        for t in &doc.transitions {
            assert!(g.node_id(&t.src).is_some() && g.node_id(&t.dst).is_some());
            assert!(t.events.iter().all(|e| g.event_id(e).is_some()));
        }
    }
}
