//! Terminal walker: a numbered menu of events, hints for what the current
//! node is waiting for, and save/load of the walk.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use saga::runtime::{SaveBlob, StoryState};
use saga::Story;

use crate::{load_story, read_script, CliError, CliResult, Style};

/// Event labels compare in canonical form, so stray spaces are harmless.
fn canonical(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Replays `events` from the initial node. One line per notification, in
/// the runtime's own format.
pub fn transcript<'a>(story: &Story, events: impl IntoIterator<Item = &'a str>) -> String {
    let mut state = story.new_state();
    let mut out = String::new();
    for e in events.into_iter().map(canonical).filter(|e| !e.is_empty()) {
        for n in state.signal(&story.graph, &e) {
            out.push_str(&n.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn cmd_walk(path: &Path, script: Option<&Path>, style: Style) -> CliResult<()> {
    let story = load_story(path)?;
    let stdout = io::stdout();
    let write_err = |source| CliError::Io { path: "<stdout>".into(), source };
    match script {
        Some(file) => {
            let events = read_script(file)?;
            stdout.lock().write_all(transcript(&story, events.lines()).as_bytes()).map_err(write_err)
        }
        None => Walker::new(&story, style).run(io::stdin().lock(), stdout.lock()).map_err(write_err),
    }
}

pub struct Walker<'s> {
    story: &'s Story,
    state: StoryState,
    style: Style,
}

impl<'s> Walker<'s> {
    pub fn new(story: &'s Story, style: Style) -> Self {
        Walker { story, state: story.new_state(), style }
    }

    pub fn state(&self) -> &StoryState {
        &self.state
    }

    /// Runs until `quit` or end of input.
    pub fn run(&mut self, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
        let s = self.style;
        writeln!(out, "{}", s.bold(&self.story.graph.name))?;
        self.show_position(&mut out)?;
        self.show_menu(&mut out)?;
        write!(out, "> ")?;
        out.flush()?;
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line == "quit" || line == "exit" {
                return Ok(());
            }
            self.command(line, &mut out)?;
            write!(out, "> ")?;
            out.flush()?;
        }
        writeln!(out)
    }

    fn command(&mut self, line: &str, out: &mut impl Write) -> io::Result<()> {
        let graph = &self.story.graph;
        let (word, arg) = match line.split_once(' ') {
            Some((w, a)) => (w, a.trim()),
            None => (line, ""),
        };
        match word {
            "" => Ok(()),
            "events" | "menu" => self.show_menu(out),
            "state" => self.show_position(out),
            "history" => self.show_history(out),
            "help" => writeln!(out, "enter an event number or label; commands: events, state, history, save <file>, load <file>, quit"),
            "save" if !arg.is_empty() => match fs::write(arg, self.state.save(graph).to_json()) {
                Ok(()) => writeln!(out, "saved to {arg}"),
                Err(e) => writeln!(out, "cannot save: {e}"),
            },
            "load" if !arg.is_empty() => {
                let loaded = fs::read_to_string(arg)
                    .map_err(|e| e.to_string())
                    .and_then(|text| SaveBlob::from_json(&text).map_err(|e| e.to_string()))
                    .and_then(|blob| StoryState::load(graph, &blob).map_err(|e| e.to_string()));
                match loaded {
                    Ok(state) => {
                        self.state = state;
                        writeln!(out, "loaded {arg}")?;
                        self.show_position(out)
                    }
                    Err(e) => writeln!(out, "cannot load: {e}"),
                }
            }
            _ => match self.event_for(line) {
                Some(event) => self.signal(&event, out),
                None => writeln!(out, "unknown choice `{line}`; type help for commands"),
            },
        }
    }

    /// A menu number or an event label from the story.
    fn event_for(&self, input: &str) -> Option<String> {
        let events = &self.story.graph.events;
        if let Ok(n) = input.parse::<usize>() {
            return n.checked_sub(1).and_then(|i| events.get(i)).cloned();
        }
        let label = canonical(input);
        events.contains(&label).then_some(label)
    }

    fn signal(&mut self, event: &str, out: &mut impl Write) -> io::Result<()> {
        let notes = self.state.signal(&self.story.graph, event);
        if notes.is_empty() {
            writeln!(out, "{}", self.style.dim(&format!("{event}: nothing moves")))?;
        }
        for n in notes {
            writeln!(out, "{}", self.style.green(&n.to_string()))?;
        }
        self.show_position(out)
    }

    fn show_position(&self, out: &mut impl Write) -> io::Result<()> {
        let graph = &self.story.graph;
        let section = graph.section(self.state.current_section(graph));
        writeln!(out, "At {} [{}]", self.style.bold(graph.node_label(self.state.current)), section.name)?;
        let candidates = self.state.enabled_transitions(graph);
        if candidates.is_empty() {
            return writeln!(out, "  the story ends here");
        }
        for c in candidates {
            let missing: Vec<_> = c.missing.iter().map(|e| graph.event_label(*e)).collect();
            writeln!(out, "  {} needs {}", graph.node_label(c.dst), missing.join(" AND "))?;
        }
        Ok(())
    }

    fn show_menu(&self, out: &mut impl Write) -> io::Result<()> {
        let graph = &self.story.graph;
        for (i, e) in graph.events.iter().enumerate() {
            let seen = graph.event_id(e).is_some_and(|id| self.state.happened.contains(&id));
            let mark = if seen { " (happened)" } else { "" };
            writeln!(out, "  {:>2}) {e}{}", i + 1, self.style.dim(mark))?;
        }
        Ok(())
    }

    fn show_history(&self, out: &mut impl Write) -> io::Result<()> {
        let blob = self.state.save(&self.story.graph);
        if blob.history.is_empty() {
            return writeln!(out, "  no transitions yet");
        }
        for (i, h) in blob.history.iter().enumerate() {
            writeln!(out, "  {}. {} -> {} on {} ({})", i + 1, h.src, h.dst, h.trigger, h.kind)?;
        }
        Ok(())
    }
}
