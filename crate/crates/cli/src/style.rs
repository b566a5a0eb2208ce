use std::io::IsTerminal;

use saga::{Diagnostic, Severity};

/// ANSI styling, off when `SAGA_NO_COLOR` is set or stdout is not a
/// terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub const PLAIN: Style = Style { color: false };

    pub fn detect() -> Style {
        Style { color: std::env::var_os("SAGA_NO_COLOR").is_none() && std::io::stdout().is_terminal() }
    }

    fn paint(self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn bold(self, text: &str) -> String {
        self.paint("1", text)
    }

    pub fn dim(self, text: &str) -> String {
        self.paint("2", text)
    }

    pub fn green(self, text: &str) -> String {
        self.paint("32", text)
    }

    pub fn diagnostic(self, d: &Diagnostic, file: &str) -> String {
        let line = d.to_line(file);
        match d.severity {
            Severity::Error => self.paint("31", &line),
            Severity::Warning => self.paint("33", &line),
            Severity::Info => self.dim(&line),
        }
    }
}
