//! Resolution of a parse tree into a validated story graph.
//!
//! Nodes are never declared; a node belongs to the one section whose
//! transitions mention it. `WHERE` transitions may only connect nodes that
//! some section already owns, and must cross a section boundary. Events are
//! global to the story.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::diag::Diagnostic;
use crate::runtime::StoryState;
use crate::syntax::{self, Label, SourceSpan, StoryAst, TransitionDecl};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(NodeId);
id_type!(SectionId);
id_type!(EventId);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub section: SectionId,
    pub span: SourceSpan,
}

/// One event-triggered edge. Node transitions and `WHERE` transitions share
/// this shape; [`TransitionRef`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub src: NodeId,
    pub dst: NodeId,
    /// Distinct events in the order they were written.
    pub events: Vec<EventId>,
    pub span: SourceSpan,
}

impl Transition {
    fn event_set(&self) -> BTreeSet<EventId> {
        self.events.iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub id: SectionId,
    pub name: String,
    /// In order of first mention.
    pub nodes: Vec<NodeId>,
    pub transitions: Vec<Transition>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionRef {
    Node { section: SectionId, index: usize },
    Section { index: usize },
}

impl TransitionRef {
    pub fn is_section(self) -> bool {
        matches!(self, TransitionRef::Section { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryGraph {
    pub name: String,
    pub initial: NodeId,
    pub nodes: Vec<Node>,
    pub events: Vec<String>,
    pub sections: Vec<Section>,
    pub section_transitions: Vec<Transition>,
    outgoing: Vec<Vec<TransitionRef>>,
}

impl StoryGraph {
    pub fn node_label(&self, id: NodeId) -> &str {
        &self.nodes[id.index()].label
    }

    pub fn node_section(&self, id: NodeId) -> SectionId {
        self.nodes[id.index()].section
    }

    pub fn section(&self, id: SectionId) -> &Section {
        &self.sections[id.index()]
    }

    pub fn event_label(&self, id: EventId) -> &str {
        &self.events[id.index()]
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label).map(|i| NodeId(i as u32))
    }

    pub fn event_id(&self, label: &str) -> Option<EventId> {
        self.events.iter().position(|e| e == label).map(|i| EventId(i as u32))
    }

    pub fn section_id(&self, name: &str) -> Option<SectionId> {
        self.sections.iter().position(|s| s.name == name).map(|i| SectionId(i as u32))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn transition(&self, r: TransitionRef) -> &Transition {
        match r {
            TransitionRef::Node { section, index } => &self.sections[section.index()].transitions[index],
            TransitionRef::Section { index } => &self.section_transitions[index],
        }
    }

    /// Every transition in declaration order: section bodies in textual
    /// order, then the `WHERE` list.
    pub fn transitions(&self) -> impl Iterator<Item = (TransitionRef, &Transition)> {
        let inner = self.sections.iter().flat_map(|s| {
            s.transitions
                .iter()
                .enumerate()
                .map(move |(index, t)| (TransitionRef::Node { section: s.id, index }, t))
        });
        let outer = self
            .section_transitions
            .iter()
            .enumerate()
            .map(|(index, t)| (TransitionRef::Section { index }, t));
        inner.chain(outer)
    }

    /// Transitions leaving `node`, in declaration order.
    pub fn outgoing(&self, node: NodeId) -> &[TransitionRef] {
        &self.outgoing[node.index()]
    }

    pub fn transition_count(&self) -> usize {
        self.sections.iter().map(|s| s.transitions.len()).sum::<usize>() + self.section_transitions.len()
    }

    /// Line-oriented canonical form of the labels and transitions. Source
    /// layout, comments and spans do not contribute.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        let trans = |out: &mut String, kind: &str, t: &Transition| {
            let _ = write!(out, "{kind}\t{}\t{}", self.node_label(t.src), self.node_label(t.dst));
            for e in &t.events {
                let _ = write!(out, "\t{}", self.event_label(*e));
            }
            out.push('\n');
        };
        let _ = writeln!(out, "story\t{}", self.name);
        let _ = writeln!(out, "initial\t{}", self.node_label(self.initial));
        for s in &self.sections {
            let _ = writeln!(out, "section\t{}", s.name);
            for n in &s.nodes {
                let _ = writeln!(out, "node\t{}", self.node_label(*n));
            }
            for t in &s.transitions {
                trans(&mut out, "trans", t);
            }
        }
        for t in &self.section_transitions {
            trans(&mut out, "where", t);
        }
        out
    }

    /// Hex SHA-256 of [`canonical_text`](Self::canonical_text).
    pub fn structural_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

struct Resolver {
    nodes: Vec<Node>,
    node_ids: HashMap<String, NodeId>,
    events: Vec<String>,
    event_ids: HashMap<String, EventId>,
    errors: Vec<Diagnostic>,
    warnings: Vec<Diagnostic>,
    reported_conflicts: BTreeSet<(NodeId, SectionId)>,
}

impl Resolver {
    fn event(&mut self, label: &Label) -> EventId {
        if let Some(id) = self.event_ids.get(label.canonical()) {
            return *id;
        }
        let id = EventId(self.events.len() as u32);
        self.events.push(label.canonical().to_string());
        self.event_ids.insert(label.canonical().to_string(), id);
        id
    }

    /// Claims `label` for `section`, reporting a conflict if another section
    /// owns it already.
    fn claim(&mut self, label: &Label, section: SectionId, section_names: &[String]) -> NodeId {
        if let Some(&id) = self.node_ids.get(label.canonical()) {
            let owner = self.nodes[id.index()].section;
            if owner != section && self.reported_conflicts.insert((id, section)) {
                self.errors.push(Diagnostic::error(
                    "NodeInMultipleSections",
                    format!(
                        "node `{label}` is used in sections `{}` and `{}`",
                        section_names[owner.index()],
                        section_names[section.index()]
                    ),
                    Some(label.span),
                ));
            }
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { label: label.canonical().to_string(), section, span: label.span });
        self.node_ids.insert(label.canonical().to_string(), id);
        id
    }

    fn transition(&mut self, decl: &TransitionDecl, src: NodeId, dst: NodeId) -> Option<Transition> {
        if src == dst {
            self.errors.push(Diagnostic::error(
                "SelfLoop",
                format!("node `{}` transitions to itself", decl.dest),
                Some(decl.span),
            ));
            return None;
        }
        let mut events = Vec::new();
        for e in &decl.events {
            let id = self.event(e);
            if events.contains(&id) {
                self.warnings.push(Diagnostic::warning(
                    "DuplicateEvent",
                    format!("event `{e}` is listed more than once"),
                    Some(e.span),
                ));
            } else {
                events.push(id);
            }
        }
        Some(Transition { src, dst, events, span: decl.span })
    }
}

/// Resolves a parse tree. On success returns the graph together with any
/// warnings; otherwise every error found.
pub fn resolve(ast: &StoryAst) -> Result<(StoryGraph, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut r = Resolver {
        nodes: Vec::new(),
        node_ids: HashMap::new(),
        events: Vec::new(),
        event_ids: HashMap::new(),
        errors: Vec::new(),
        warnings: Vec::new(),
        reported_conflicts: BTreeSet::new(),
    };

    let mut section_names: Vec<String> = Vec::new();
    for s in &ast.sections {
        if section_names.iter().any(|n| n == s.name.canonical()) {
            r.errors.push(Diagnostic::error(
                "DuplicateSectionName",
                format!("section `{}` is defined more than once", s.name),
                Some(s.name.span),
            ));
        }
        section_names.push(s.name.canonical().to_string());
    }

    // Ownership first, so WHERE endpoints can be checked regardless of order.
    let mut sections = Vec::new();
    for (i, s) in ast.sections.iter().enumerate() {
        let sid = SectionId(i as u32);
        let mut nodes = Vec::new();
        let mut pending = Vec::new();
        for decl in s.transitions.iter().flat_map(TransitionDecl::desugar_or) {
            let src = r.claim(&decl.pre_nodes[0], sid, &section_names);
            let dst = r.claim(&decl.dest, sid, &section_names);
            for n in [src, dst] {
                if r.nodes[n.index()].section == sid && !nodes.contains(&n) {
                    nodes.push(n);
                }
            }
            pending.push((decl, src, dst));
        }
        sections.push((sid, s, nodes, pending));
    }

    let mut built = Vec::new();
    for (sid, s, nodes, pending) in sections {
        let transitions = pending
            .into_iter()
            .filter_map(|(decl, src, dst)| r.transition(&decl, src, dst))
            .collect();
        built.push(Section { id: sid, name: s.name.canonical().to_string(), nodes, transitions, span: s.span });
    }

    let mut section_transitions = Vec::new();
    for decl in ast.where_clauses.iter().flat_map(TransitionDecl::desugar_or) {
        let mut endpoints = Vec::new();
        for label in [&decl.pre_nodes[0], &decl.dest] {
            match r.node_ids.get(label.canonical()) {
                Some(id) => endpoints.push(*id),
                None => r.errors.push(Diagnostic::error(
                    "WhereEndpointUnowned",
                    format!("node `{label}` appears only in WHERE clauses; it must belong to a section"),
                    Some(label.span),
                )),
            }
        }
        let [src, dst] = endpoints[..] else { continue };
        if src != dst && r.nodes[src.index()].section == r.nodes[dst.index()].section {
            r.errors.push(Diagnostic::error(
                "WhereWithinSingleSection",
                format!(
                    "WHERE transition `{} GOES {}` stays inside section `{}`; move it into that section",
                    decl.pre_nodes[0],
                    decl.dest,
                    section_names[r.nodes[src.index()].section.index()]
                ),
                Some(decl.span),
            ));
            continue;
        }
        if let Some(t) = r.transition(&decl, src, dst) {
            section_transitions.push(t);
        }
    }

    let initial = match r.node_ids.get(ast.initial.canonical()) {
        Some(id) => Some(*id),
        None => {
            r.errors.push(Diagnostic::error(
                "UnknownInitialNode",
                format!("initial node `{}` is not used by any section", ast.initial),
                Some(ast.initial.span),
            ));
            None
        }
    };

    if !r.errors.is_empty() {
        return Err(r.errors);
    }

    let mut graph = StoryGraph {
        name: ast.story_name.canonical().to_string(),
        initial: initial.expect("checked above"),
        nodes: r.nodes,
        events: r.events,
        sections: built,
        section_transitions,
        outgoing: Vec::new(),
    };
    let mut outgoing = vec![Vec::new(); graph.nodes.len()];
    for (tref, t) in graph.transitions() {
        outgoing[t.src.index()].push(tref);
    }
    graph.outgoing = outgoing;

    let mut warnings = r.warnings;
    warnings.extend(overlap_warnings(&graph));
    Ok((graph, warnings))
}

/// Duplicate transitions, and pairs out of one node that a single event can
/// enable together.
fn overlap_warnings(graph: &StoryGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for node in graph.node_ids() {
        let outs = graph.outgoing(node);
        for (i, &a) in outs.iter().enumerate() {
            for &b in &outs[i + 1..] {
                let (ta, tb) = (graph.transition(a), graph.transition(b));
                let (ea, eb) = (ta.event_set(), tb.event_set());
                if ta.dst == tb.dst && ea == eb {
                    out.push(Diagnostic::warning(
                        "DuplicateTransition",
                        format!(
                            "transition `{} GOES {}` is declared more than once",
                            graph.node_label(node),
                            graph.node_label(ta.dst)
                        ),
                        Some(tb.span),
                    ));
                } else if !ea.is_disjoint(&eb) {
                    let shadow = if ea.is_subset(&eb) { "; the later one can never fire" } else { "" };
                    out.push(Diagnostic::warning(
                        "Nondeterminism",
                        format!(
                            "transitions from `{}` to `{}` and `{}` can be enabled by the same event; \
                             the one declared first wins{shadow}",
                            graph.node_label(node),
                            graph.node_label(ta.dst),
                            graph.node_label(tb.dst)
                        ),
                        Some(tb.span),
                    ));
                }
            }
        }
    }
    out
}

/// A cycle found by [`validate_dag`], written `[a, b, ..., a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDiagnostic {
    pub cycle: Vec<NodeId>,
    pub span: Option<SourceSpan>,
}

impl CycleDiagnostic {
    pub fn to_diagnostic(&self, graph: &StoryGraph) -> Diagnostic {
        let path: Vec<_> = self.cycle.iter().map(|n| format!("`{}`", graph.node_label(*n))).collect();
        Diagnostic::error("Cycle", format!("story graph has a cycle: {}", path.join(" -> ")), self.span)
    }
}

/// Topological order over all nodes (ties broken by node id), or one
/// explicit cycle.
pub fn validate_dag(graph: &StoryGraph) -> Result<Vec<NodeId>, CycleDiagnostic> {
    let n = graph.nodes.len();
    let mut indegree = vec![0usize; n];
    for (_, t) in graph.transitions() {
        indegree[t.dst.index()] += 1;
    }
    let mut ready: BTreeSet<NodeId> = graph.node_ids().filter(|v| indegree[v.index()] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &r in graph.outgoing(v) {
            let d = graph.transition(r).dst;
            indegree[d.index()] -= 1;
            if indegree[d.index()] == 0 {
                ready.insert(d);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every leftover node has a leftover predecessor; walk backwards until a
    // node repeats.
    let mut preds: Vec<Vec<(NodeId, SourceSpan)>> = vec![Vec::new(); n];
    for (_, t) in graph.transitions() {
        if indegree[t.src.index()] > 0 && indegree[t.dst.index()] > 0 {
            preds[t.dst.index()].push((t.src, t.span));
        }
    }
    let start = graph.node_ids().find(|v| indegree[v.index()] > 0).expect("leftover node");
    let mut path = vec![start];
    let mut spans = Vec::new();
    loop {
        let last = *path.last().expect("nonempty");
        let (p, span) = preds[last.index()][0];
        spans.push(span);
        if let Some(i) = path.iter().position(|&v| v == p) {
            let mut cycle = path[i..].to_vec();
            cycle.push(p);
            cycle.reverse();
            return Err(CycleDiagnostic { cycle, span: spans.last().copied() });
        }
        path.push(p);
    }
}

/// Nodes unreachable from the initial node (warnings) and nodes without
/// outgoing transitions (informational).
pub fn reachability_report(graph: &StoryGraph) -> Vec<Diagnostic> {
    let mut seen = vec![false; graph.nodes.len()];
    let mut queue = VecDeque::from([graph.initial]);
    seen[graph.initial.index()] = true;
    while let Some(v) = queue.pop_front() {
        for &r in graph.outgoing(v) {
            let d = graph.transition(r).dst;
            if !seen[d.index()] {
                seen[d.index()] = true;
                queue.push_back(d);
            }
        }
    }
    let mut out = Vec::new();
    for v in graph.node_ids() {
        let node = &graph.nodes[v.index()];
        if !seen[v.index()] {
            out.push(Diagnostic::warning(
                "Unreachable",
                format!("node `{}` cannot be reached from the initial node", node.label),
                Some(node.span),
            ));
        }
    }
    for v in graph.node_ids() {
        let node = &graph.nodes[v.index()];
        if graph.outgoing(v).is_empty() {
            out.push(Diagnostic::info(
                "Terminal",
                format!("node `{}` has no outgoing transitions", node.label),
                Some(node.span),
            ));
        }
    }
    out
}

/// A fully checked story: parsed, resolved and acyclic.
#[derive(Debug, Clone)]
pub struct Story {
    pub graph: StoryGraph,
    pub topo_order: Vec<NodeId>,
    /// Warnings and informational notes; never errors.
    pub diagnostics: Vec<Diagnostic>,
}

impl Story {
    pub fn from_ast(ast: &StoryAst) -> Result<Story, Vec<Diagnostic>> {
        let (graph, mut diagnostics) = resolve(ast)?;
        let topo_order = validate_dag(&graph).map_err(|c| vec![c.to_diagnostic(&graph)])?;
        diagnostics.extend(reachability_report(&graph));
        Ok(Story { graph, topo_order, diagnostics })
    }

    pub fn from_source(source: &str) -> Result<Story, Vec<Diagnostic>> {
        let ast = syntax::parse_source(source).map_err(|e| vec![Diagnostic::from(&e)])?;
        Story::from_ast(&ast)
    }

    pub fn new_state(&self) -> StoryState {
        StoryState::new(&self.graph)
    }
}
