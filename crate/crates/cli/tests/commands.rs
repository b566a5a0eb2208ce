use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn saga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saga")).args(args).env("SAGA_NO_COLOR", "1").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn sample(dir: &Path) -> String {
    write(dir, "sealed_fate.saga", saga::SAMPLE_STORY).display().to_string()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = saga(&["check", &sample(dir.path())]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("INFO"));

    let cyclic = write(dir.path(), "c.saga", "STORY S INITIAL A SECTION X { A GOES B WHEN e, B GOES A WHEN f } WHERE");
    let out = saga(&["check", cyclic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("ERROR "), "{err}");
    assert!(err.contains(" Cycle story graph has a cycle: `A` -> `B` -> `A`"), "{err}");

    let missing = saga(&["check", dir.path().join("nope.saga").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn check_json_lists_diagnostics() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.saga", "STORY S INITIAL A SECTION X { A GOES WHEN e } WHERE");
    let out = saga(&["check", "--json", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v[0]["level"], "error");
    assert_eq!(v[0]["code"], "SyntaxError");
    assert_eq!(v[0]["line"], 1);
}

#[test]
fn graph_to_stdout_and_file() {
    let dir = TempDir::new().unwrap();
    let src = sample(dir.path());
    let out = saga(&["graph", &src]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph \"Sealed Fate\" {"));

    let json = dir.path().join("g.json");
    let out = saga(&["graph", &src, "--format", "json", "--out", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: saga::export::GraphDocument = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(doc.initial, "Awakening");
}

#[test]
fn compile_writes_files_and_refuses_to_overwrite() {
    let dir = TempDir::new().unwrap();
    let src = sample(dir.path());
    let out_dir = dir.path().join("java");
    let out = saga(&["compile", &src, "--target", "java", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let listed = String::from_utf8(out.stdout).unwrap();
    assert_eq!(listed.lines().count(), 7);
    assert!(out_dir.join("StoryDSL/NodeTransition.java").exists());

    let again = saga(&["compile", &src, "--target", "java", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(3));
    let forced = saga(&["compile", &src, "--target", "java", "--out", out_dir.to_str().unwrap(), "--force"]);
    assert_eq!(forced.status.code(), Some(0));

    let cxx = dir.path().join("cxx");
    let out = saga(&["compile", &src, "--target", "cxx", "--out", cxx.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
    assert_eq!(fs::read_dir(&cxx).unwrap().count(), 2);
}

#[test]
fn compile_rejects_invalid_story() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.saga", "STORY S INITIAL Z SECTION X { A GOES B WHEN e } WHERE");
    let out = saga(&["compile", bad.to_str().unwrap(), "--target", "cxx", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("StoryDSL.h").exists());
}

#[test]
fn scripted_walk_prints_transitions() {
    let dir = TempDir::new().unwrap();
    let story = write(dir.path(), "chain.saga", "STORY Chain INITIAL A SECTION S { A GOES B WHEN e, B GOES C WHEN f } WHERE");
    let script = write(dir.path(), "events.txt", "e\n\nf\n");
    let out = saga(&["walk", story.to_str().unwrap(), "--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "-> B [S] via e\n-> C [S] via f\n");
}

#[test]
fn no_color_means_no_escapes() {
    let dir = TempDir::new().unwrap();
    let out = saga(&["check", &sample(dir.path())]);
    assert!(!out.stderr.contains(&0x1b));
}
