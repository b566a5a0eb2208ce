//! The `saga` command line: `check`, `graph`, `compile`, `walk` and `serve`.
//!
//! Every subcommand is also callable as a function so the tests can run
//! them without spawning a process.

pub mod serve;
mod style;
pub mod walk;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use saga::codegen::compile;
use saga::export::{to_dot, to_graph_json};
use saga::render::{render_package, Dialect};
use saga::{Diagnostic, Story};
use thiserror::Error;

pub use style::Style;

#[derive(Debug, Parser)]
#[command(name = "saga", version, about = "Compile and explore SAGA story scripts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a script, printing diagnostics.
    Check {
        path: PathBuf,
        /// Print diagnostics as a JSON array.
        #[arg(long)]
        json: bool,
    },
    /// Export the story graph.
    Graph {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate source code for the story manager.
    Compile {
        path: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
        /// Overwrite existing files.
        #[arg(long)]
        force: bool,
    },
    /// Walk through the story from the terminal.
    Walk {
        path: PathBuf,
        /// Replay newline-separated events and print the transcript.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Serve the walker UI and its JSON API.
    Serve {
        path: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory holding the built walker UI.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Java,
    Csharp,
    Cxx,
}

impl From<Target> for Dialect {
    fn from(t: Target) -> Dialect {
        match t {
            Target::Java => Dialect::Java,
            Target::Csharp => Dialect::CSharp,
            Target::Cxx => Dialect::Cxx,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{} has errors", path.display())]
    Invalid { path: PathBuf, diagnostics: Vec<Diagnostic> },
    #[error("{} already exists (use --force to overwrite)", .0.display())]
    WouldOverwrite(PathBuf),
    #[error("code generation failed: {0}")]
    Codegen(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } | CliError::Codegen(_) => 1,
            CliError::Io { .. } => 2,
            CliError::WouldOverwrite(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn read_script(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// Reads and validates a script. Errors carry every diagnostic.
pub fn load_story(path: &Path) -> CliResult<Story> {
    let src = read_script(path)?;
    Story::from_source(&src).map_err(|diagnostics| CliError::Invalid { path: path.to_path_buf(), diagnostics })
}

fn print_diagnostics(err: &mut dyn Write, diags: &[Diagnostic], path: &Path, json: bool, style: Style) {
    let file = path.display().to_string();
    if json {
        let _ = writeln!(err, "{}", saga::diag::to_json(diags, &file));
    } else {
        for d in diags {
            let _ = writeln!(err, "{}", style.diagnostic(d, &file));
        }
    }
}

/// `saga check`: returns the exit code.
pub fn cmd_check(path: &Path, json: bool, err: &mut dyn Write, style: Style) -> u8 {
    match load_story(path) {
        Ok(story) => {
            print_diagnostics(err, &story.diagnostics, path, json, style);
            0
        }
        Err(CliError::Invalid { diagnostics, .. }) => {
            print_diagnostics(err, &diagnostics, path, json, style);
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn cmd_graph(path: &Path, format: GraphFormat, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    let story = load_story(path)?;
    let text = match format {
        GraphFormat::Dot => to_dot(&story.graph),
        GraphFormat::Json => to_graph_json(&story.graph) + "\n",
    };
    match out {
        Some(file) => fs::write(file, text).map_err(io_err(file)),
        None => stdout.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>"))),
    }
}

/// Writes every rendered file under `out` and returns the paths written.
/// Nothing is written when any target exists and `force` is off.
pub fn cmd_compile(path: &Path, target: Target, out: &Path, force: bool) -> CliResult<Vec<PathBuf>> {
    let story = load_story(path)?;
    let code = compile(&story.graph).map_err(|e| CliError::Codegen(e.to_string()))?;
    let files = render_package(target.into(), &code).map_err(|e| CliError::Codegen(e.to_string()))?;
    let targets: Vec<PathBuf> = files.iter().map(|f| out.join(&f.path)).collect();
    if !force {
        if let Some(existing) = targets.iter().find(|p| p.exists()) {
            return Err(CliError::WouldOverwrite(existing.clone()));
        }
    }
    for (file, dest) in files.iter().zip(&targets) {
        if let Some(dir) = dest.parent() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        fs::write(dest, &file.content).map_err(io_err(dest))?;
    }
    Ok(targets)
}

/// Entry point shared by the binary.
pub fn run(cli: Cli) -> ExitCode {
    let style = Style::detect();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let result = match cli.command {
        Command::Check { path, json } => return ExitCode::from(cmd_check(&path, json, &mut stderr.lock(), style)),
        Command::Graph { path, format, out } => cmd_graph(&path, format, out.as_deref(), &mut stdout.lock()),
        Command::Compile { path, target, out, force } => cmd_compile(&path, target, &out, force).map(|written| {
            let mut o = stdout.lock();
            for p in written {
                let _ = writeln!(o, "{}", p.display());
            }
        }),
        Command::Walk { path, script } => walk::cmd_walk(&path, script.as_deref(), style),
        Command::Serve { path, port, ui } => serve::cmd_serve(&path, port, ui),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut err = stderr.lock();
            if let CliError::Invalid { path, diagnostics } = &e {
                print_diagnostics(&mut err, diagnostics, path, false, style);
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
