//! The reference story manager: a Moore machine over a [`StoryGraph`].
//!
//! The state is the current node plus the set of events seen so far. Events
//! never un-happen. After each signal, transitions out of the current node
//! whose events have all happened fire one after another (first in
//! declaration order wins) until none is enabled; every hop produces one
//! [`Notification`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EventId, NodeId, SectionId, StoryGraph, TransitionRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiredTransition {
    pub transition: TransitionRef,
    /// The signalled event that started the cascade this hop belongs to.
    pub triggering_event: String,
    pub resulting_node: NodeId,
    pub resulting_section: SectionId,
}

/// Output of the machine: the story entered a new node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Notification {
    pub new_node: String,
    pub new_section: String,
    pub via_events: Vec<String>,
}

impl fmt::Display for Notification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-> {} [{}] via {}", self.new_node, self.new_section, self.via_events.join(" AND "))
    }
}

/// A transition out of the current node and the events it still waits for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub transition: TransitionRef,
    pub dst: NodeId,
    pub missing: Vec<EventId>,
}

impl Candidate {
    pub fn is_ready(&self) -> bool {
        self.missing.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryState {
    pub current: NodeId,
    /// Events that appear in the story.
    pub happened: BTreeSet<EventId>,
    /// Signalled labels the story never mentions; kept so saves and the
    /// walker can show them.
    pub unmatched: BTreeSet<String>,
    pub history: Vec<FiredTransition>,
}

impl StoryState {
    pub fn new(graph: &StoryGraph) -> StoryState {
        StoryState {
            current: graph.initial,
            happened: BTreeSet::new(),
            unmatched: BTreeSet::new(),
            history: Vec::new(),
        }
    }

    pub fn current_section(&self, graph: &StoryGraph) -> SectionId {
        graph.node_section(self.current)
    }

    /// All signalled labels: story events in id order, then unknown ones.
    pub fn happened_labels(&self, graph: &StoryGraph) -> Vec<String> {
        self.happened
            .iter()
            .map(|e| graph.event_label(*e).to_string())
            .chain(self.unmatched.iter().cloned())
            .collect()
    }

    /// Transitions out of the current node, in declaration order.
    pub fn enabled_transitions(&self, graph: &StoryGraph) -> Vec<Candidate> {
        graph
            .outgoing(self.current)
            .iter()
            .map(|&r| {
                let t = graph.transition(r);
                Candidate {
                    transition: r,
                    dst: t.dst,
                    missing: t.events.iter().copied().filter(|e| !self.happened.contains(e)).collect(),
                }
            })
            .collect()
    }

    /// Records `event` and runs the cascade in place.
    pub fn signal(&mut self, graph: &StoryGraph, event: &str) -> Vec<Notification> {
        match graph.event_id(event) {
            Some(id) => {
                self.happened.insert(id);
            }
            None => {
                self.unmatched.insert(event.to_string());
                return Vec::new();
            }
        }
        let mut notes = Vec::new();
        // A DAG never revisits a node, so this bound only bites on graphs
        // that skipped validation.
        for _ in 0..graph.nodes.len() {
            let Some(ready) = self.enabled_transitions(graph).into_iter().find(Candidate::is_ready) else { break };
            let t = graph.transition(ready.transition);
            let section = graph.node_section(t.dst);
            self.current = t.dst;
            self.history.push(FiredTransition {
                transition: ready.transition,
                triggering_event: event.to_string(),
                resulting_node: t.dst,
                resulting_section: section,
            });
            notes.push(Notification {
                new_node: graph.node_label(t.dst).to_string(),
                new_section: graph.section(section).name.clone(),
                via_events: t.events.iter().map(|e| graph.event_label(*e).to_string()).collect(),
            });
        }
        notes
    }

    pub fn save(&self, graph: &StoryGraph) -> SaveBlob {
        SaveBlob {
            version: SAVE_VERSION,
            story_hash: graph.structural_hash(),
            current: graph.node_label(self.current).to_string(),
            happened: self.happened_labels(graph),
            history: self
                .history
                .iter()
                .map(|f| {
                    let t = graph.transition(f.transition);
                    SavedTransition {
                        kind: if f.transition.is_section() { "section".into() } else { "node".into() },
                        src: graph.node_label(t.src).to_string(),
                        dst: graph.node_label(t.dst).to_string(),
                        events: t.events.iter().map(|e| graph.event_label(*e).to_string()).collect(),
                        trigger: f.triggering_event.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn load(graph: &StoryGraph, blob: &SaveBlob) -> Result<StoryState, SaveError> {
        if blob.version != SAVE_VERSION {
            return Err(SaveError::MalformedBlob(format!("unsupported version {}", blob.version)));
        }
        let expected = graph.structural_hash();
        if blob.story_hash != expected {
            return Err(SaveError::StoryMismatch { expected_hash: expected, found_hash: blob.story_hash.clone() });
        }
        let node = |label: &str| {
            graph.node_id(label).ok_or_else(|| SaveError::MalformedBlob(format!("unknown node `{label}`")))
        };
        let mut state = StoryState::new(graph);
        for label in &blob.happened {
            match graph.event_id(label) {
                Some(id) => state.happened.insert(id),
                None => state.unmatched.insert(label.clone()),
            };
        }
        for saved in &blob.history {
            let (src, dst) = (node(&saved.src)?, node(&saved.dst)?);
            if src != state.current {
                return Err(SaveError::MalformedBlob(format!(
                    "history leaves `{}` but the story is at `{}`",
                    saved.src,
                    graph.node_label(state.current)
                )));
            }
            let tref = graph
                .outgoing(src)
                .iter()
                .copied()
                .find(|&r| {
                    let t = graph.transition(r);
                    let events: Vec<_> = t.events.iter().map(|e| graph.event_label(*e)).collect();
                    t.dst == dst && r.is_section() == (saved.kind == "section") && events == saved.events
                })
                .ok_or_else(|| {
                    SaveError::MalformedBlob(format!("no transition `{} GOES {}`", saved.src, saved.dst))
                })?;
            if !blob.happened.contains(&saved.trigger) {
                return Err(SaveError::MalformedBlob(format!("trigger `{}` never happened", saved.trigger)));
            }
            state.current = dst;
            state.history.push(FiredTransition {
                transition: tref,
                triggering_event: saved.trigger.clone(),
                resulting_node: dst,
                resulting_section: graph.node_section(dst),
            });
        }
        if state.current != node(&blob.current)? {
            return Err(SaveError::MalformedBlob(format!("history does not end at `{}`", blob.current)));
        }
        Ok(state)
    }
}

/// Pure form of [`StoryState::signal`].
pub fn signal_event(state: &StoryState, graph: &StoryGraph, event: &str) -> (StoryState, Vec<Notification>) {
    let mut next = state.clone();
    let notes = next.signal(graph, event);
    (next, notes)
}

pub const SAVE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavedTransition {
    pub kind: String,
    pub src: String,
    pub dst: String,
    pub events: Vec<String>,
    pub trigger: String,
}

/// Versioned save document bound to the story's structural hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaveBlob {
    pub version: u32,
    pub story_hash: String,
    pub current: String,
    pub happened: Vec<String>,
    pub history: Vec<SavedTransition>,
}

impl SaveBlob {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("save blob serializes")
    }

    pub fn from_json(text: &str) -> Result<SaveBlob, SaveError> {
        serde_json::from_str(text).map_err(|e| SaveError::MalformedBlob(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaveError {
    #[error("save belongs to a different story (expected hash {expected_hash}, found {found_hash})")]
    StoryMismatch { expected_hash: String, found_hash: String },
    #[error("malformed save: {0}")]
    MalformedBlob(String),
}
