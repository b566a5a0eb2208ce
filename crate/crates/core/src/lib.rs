//! Compiler and runtime for SAGA story scripts.
//!
//! A script names a story, its initial node, a list of sections holding
//! event-triggered transitions, and a `WHERE` list of transitions between
//! sections:
//!
//! ```
//! let src = "STORY Tiny INITIAL Dark SECTION Night { Dark GOES Light WHEN dawn } WHERE";
//! let story = saga::Story::from_source(src).unwrap();
//! let mut state = story.new_state();
//! let notes = state.signal(&story.graph, "dawn");
//! assert_eq!(notes[0].new_node, "Light");
//! ```
//!
//! The pipeline is [`syntax`] (text to parse tree), [`model`] (resolution and
//! validation into a [`StoryGraph`]), [`runtime`] (the reference story
//! manager), [`codegen`] (story graph to the [`code`] IR), [`render`] (IR to
//! Java, C# or C++ text) and [`export`] (dot and JSON views).

pub mod code;
pub mod codegen;
pub mod diag;
pub mod export;
pub mod model;
pub mod render;
pub mod runtime;
pub mod syntax;

pub use diag::{Diagnostic, Severity};
pub use model::{Story, StoryGraph};
pub use runtime::{Notification, StoryState};

/// The "Sealed Fate" script bundled with the crate.
pub const SAMPLE_STORY: &str = include_str!("../stories/sealed_fate.saga");
