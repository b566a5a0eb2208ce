//! Acceptance checks, one PASS/FAIL line each. Exits non-zero if any fails.
//! Run with `cargo test -p saga-cli --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use saga::code::{Declaration, Function, Literal, Statement, Value};
use saga::codegen::{compile, mangle, DRIVER_FUNCTION, DRIVER_MODULE};
use saga::render::{render_package, Dialect, OutputFile};
use saga::Story;
use saga_testkit::props;

const JAVA_GOLDEN: &str = include_str!("../../core/tests/golden/NodeTransition.java");
const H_GOLDEN: &str = include_str!("../../core/tests/golden/NodeTransition.h.fragment");
const CPP_GOLDEN: &str = include_str!("../../core/tests/golden/NodeTransition.cpp.fragment");

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 2024;

const FATE_DECIDES: [&str; 5] = ["Good Won't Save You", "Winding Down", "Final Choice", "Battle", "Can't Escape"];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn render_sample(dialect: Dialect) -> Result<Vec<OutputFile>, String> {
    let story = Story::from_source(saga::SAMPLE_STORY).map_err(|d| format!("{d:?}"))?;
    let code = compile(&story.graph).map_err(|e| e.to_string())?;
    render_package(dialect, &code).map_err(|e| e.to_string())
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail} in {took:.2?}"))
}

fn golden_java() -> Check {
    timed(GOLDEN_LIMIT, || {
        let files = render_sample(Dialect::Java)?;
        let f = files.iter().find(|f| f.path == "StoryDSL/NodeTransition.java").ok_or("no NodeTransition.java")?;
        ensure(f.content.trim_end_matches('\n') == JAVA_GOLDEN.trim_end_matches('\n'), "NodeTransition.java differs")?;
        Ok(format!("{} lines identical", JAVA_GOLDEN.lines().count()))
    })
}

fn golden_cxx() -> Check {
    timed(GOLDEN_LIMIT, || {
        let files = render_sample(Dialect::Cxx)?;
        ensure(files.len() == 2, format!("{} files", files.len()))?;
        let header = &files.iter().find(|f| f.path.ends_with(".h")).ok_or("no header")?.content;
        let source = &files.iter().find(|f| f.path.ends_with(".cpp")).ok_or("no source")?.content;
        let forward = ["Node", "NodeTransition", "Section", "SectionTransition", "Story", "StoryManager"]
            .map(|c| format!("    class {c};\n"))
            .concat();
        ensure(header.contains(&forward), "forward declarations missing or out of order")?;
        let split = H_GOLDEN.find("    class NodeTransition {").ok_or("bad header fragment")?;
        let (head, class) = H_GOLDEN.split_at(split);
        ensure(header.contains(head), "namespace opening differs")?;
        ensure(header.contains(class), "NodeTransition declaration differs")?;
        ensure(source.contains(CPP_GOLDEN.trim_end_matches('\n')), "NodeTransition definitions differ")?;
        Ok("2 files, declaration and definition fragments identical".into())
    })
}

fn mangling() -> Check {
    let a = mangle("node", "Good Won't Save You");
    let b = mangle("nodes", "Fate Decides");
    ensure(a == "node__Good_Won_t_Save_You", format!("got {a}"))?;
    ensure(b == "nodes__Fate_Decides", format!("got {b}"))?;
    Ok(format!("{a}, {b}"))
}

fn sample_structure() -> Check {
    let story = Story::from_source(saga::SAMPLE_STORY).map_err(|d| format!("{d:?}"))?;
    let g = &story.graph;
    let sect = g.section(g.section_id("Fate Decides").ok_or("no Fate Decides section")?);
    let names: Vec<_> = sect.nodes.iter().map(|n| g.node_label(*n)).collect();
    ensure(names == FATE_DECIDES, format!("nodes {names:?}"))?;

    let code = compile(g).map_err(|e| e.to_string())?;
    let main = code.package.modules.iter().find(|m| m.name == DRIVER_MODULE).ok_or("no Main")?;
    let f = main.funcs.iter().find(|f| f.name == DRIVER_FUNCTION).ok_or("no CreateStoryManager")?;
    let stmts: Vec<&Statement> = f.body.iter().flat_map(|b| &b.0).collect();
    let list = mangle("nodes", "Fate Decides");
    let at = stmts
        .iter()
        .position(|s| matches!(s, Statement::Decl(Declaration::ListDec { name, .. }) if *name == list))
        .ok_or("no node list")?;
    let Statement::Decl(Declaration::ListDec { capacity, .. }) = stmts[at] else { unreachable!() };
    ensure(*capacity == 5, format!("capacity {capacity}"))?;
    for (i, label) in FATE_DECIDES.iter().enumerate() {
        let want = Statement::Value(Value::ObjAccess(
            Box::new(Value::Var(list.clone())),
            Function::ListInsert(Box::new(Value::Lit(Literal::Int(i as i64))), Box::new(Value::Var(mangle("node", label)))),
        ));
        ensure(stmts.get(at + 1 + i) == Some(&&want), format!("insert {i} differs"))?;
    }
    let cs = render_sample(Dialect::CSharp)?;
    let main_cs = &cs.iter().find(|f| f.path == "StoryDSL/Main.cs").ok_or("no Main.cs")?.content;
    ensure(main_cs.contains("List<Node> nodes__Fate_Decides = new List<Node>(5);"), "C# list declaration missing")?;
    Ok("5 nodes, capacity 5, inserts at 0..4".into())
}

fn property_suite() -> Check {
    timed(PROPERTY_LIMIT, || {
        let a = props::dag_matches_dfs(500, SEED, 20)?;
        let b = props::or_desugaring_equivalence(100, SEED, 5, 6)?;
        let c = props::runtime_laws(1000, SEED)?;
        let d = props::parse_print_invariance(500, SEED)?;
        Ok(format!("(a) {a} DAG checks, (b) {b} sequence comparisons, (c) {c} walks, (d) {d} scripts"))
    })
}

fn differential_walk() -> Check {
    let story = Story::from_source(saga::SAMPLE_STORY).map_err(|d| format!("{d:?}"))?;
    let events = [
        "leave house", "sneeze", "hear rumor", "choose shadow", "harm innocent", "meet stranger", "use power",
        "curse awakens", "time passes", "reach the gate", "flee", "draw sword",
    ];
    let mut state = story.new_state();
    let mut log = String::new();
    for e in events {
        for n in state.signal(&story.graph, e) {
            log.push_str(&format!("{n}\n"));
        }
    }
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let script = dir.path().join("events.txt");
    let path = dir.path().join("sealed_fate.saga");
    std::fs::write(&script, events.join("\n")).map_err(|e| e.to_string())?;
    std::fs::write(&path, saga::SAMPLE_STORY).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_saga"))
        .arg("walk")
        .arg(&path)
        .arg("--script")
        .arg(&script)
        .env("SAGA_NO_COLOR", "1")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("exit {:?}", out.status.code()))?;
    ensure(out.stdout == log.as_bytes(), "transcript differs from runtime log")?;
    Ok(format!("{} notification lines identical", log.lines().count()))
}

/// Nothing in the workspace builds or loads the browser UI: no build
/// scripts, and `serve` falls back to its placeholder page.
fn no_secondary() -> Check {
    let crates = Path::new(env!("CARGO_MANIFEST_DIR")).join("..");
    for entry in std::fs::read_dir(&crates).map_err(|e| e.to_string())? {
        let dir = entry.map_err(|e| e.to_string())?.path();
        ensure(!dir.join("build.rs").exists(), format!("{} has a build script", dir.display()))?;
        ensure(!dir.join("package.json").exists(), format!("{} has a package.json", dir.display()))?;
    }
    Ok("no build scripts or UI packages in the workspace".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden render, java", golden_java),
        ("golden render, cxx", golden_cxx),
        ("mangling", mangling),
        ("sample-story structure", sample_structure),
        ("property suite", property_suite),
        ("differential walk", differential_walk),
        ("no secondary component", no_secondary),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
