use saga::Story;
use saga_cli::walk::{transcript, Walker};
use saga_cli::Style;
use tempfile::TempDir;

fn sample() -> Story {
    Story::from_source(saga::SAMPLE_STORY).unwrap()
}

fn run(story: &Story, input: &str) -> (String, saga::StoryState) {
    let mut w = Walker::new(story, Style::PLAIN);
    let mut out = Vec::new();
    w.run(input.as_bytes(), &mut out).unwrap();
    (String::from_utf8(out).unwrap(), w.state().clone())
}

#[test]
fn menu_numbers_and_labels_both_work() {
    let story = sample();
    let (out, state) = run(&story, "1\nhear   rumor\nquit\n");
    assert!(out.contains("   1) leave house"));
    assert!(out.contains("-> Village Square [The Beginning] via leave house"));
    assert!(out.contains("-> Crossroads [The Beginning] via hear rumor"));
    assert_eq!(story.graph.node_label(state.current), "Crossroads");
}

#[test]
fn bad_input_reprompts() {
    let story = sample();
    let (out, state) = run(&story, "99\nfly away\n0\n");
    assert_eq!(out.matches("unknown choice").count(), 3);
    assert_eq!(state, story.new_state());
}

#[test]
fn hints_show_missing_events() {
    let story = sample();
    let (out, _) = run(&story, "leave house\nhear rumor\nchoose shadow\nharm innocent\nstate\n");
    assert!(out.contains("harm innocent: nothing moves"));
    assert!(out.contains("  Cursed Blade needs take blade"));
    assert!(out.contains("  Shadow Pact needs meet stranger"));
}

#[test]
fn save_and_load_resume_identically() {
    let story = sample();
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("walk.json");
    let f = file.display();
    let (_, saved) = run(&story, &format!("leave house\nhear rumor\nchoose light\nsave {f}\n"));
    let (out, loaded) = run(&story, &format!("load {f}\nhistory\n"));
    assert_eq!(loaded, saved);
    assert!(out.contains("  3. Crossroads -> Old Temple on choose light (section)"));

    let rest = "pray\nreturn to village\nhelp elder\n";
    let (_, a) = run(&story, &format!("leave house\nhear rumor\nchoose light\n{rest}"));
    let (_, b) = run(&story, &format!("load {f}\n{rest}"));
    assert_eq!(a, b);

    let (out, _) = run(&story, "load /nonexistent/walk.json\n");
    assert!(out.contains("cannot load"));
}

#[test]
fn transcript_matches_runtime_log() {
    let story = sample();
    let events = ["leave house", "hear rumor", "choose shadow", "meet stranger", "harm innocent", "use power", "curse awakens"];
    let mut state = story.new_state();
    let mut log = String::new();
    for e in events {
        for n in state.signal(&story.graph, e) {
            log += &format!("{n}\n");
        }
    }
    assert_eq!(transcript(&story, events), log);
    assert_eq!(transcript(&story, events), transcript(&story, events));
}
