//! Diagnostics shared by the front end and the command-line tools.

use std::fmt;

use serde::Serialize;

use crate::syntax::{SourceSpan, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "INFO",
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        Diagnostic { severity: Severity::Error, code, message: message.into(), span }
    }

    pub fn warning(code: &'static str, message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        Diagnostic { severity: Severity::Warning, code, message: message.into(), span }
    }

    pub fn info(code: &'static str, message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        Diagnostic { severity: Severity::Info, code, message: message.into(), span }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `LEVEL file:line:col CODE message`; unknown positions print as `0:0`.
    pub fn to_line(&self, file: &str) -> String {
        let (line, col) = self.span.map(|s| (s.start_line, s.start_col)).unwrap_or((0, 0));
        format!("{} {file}:{line}:{col} {} {}", self.severity, self.code, self.message)
    }
}

impl From<&SyntaxError> for Diagnostic {
    fn from(err: &SyntaxError) -> Self {
        Diagnostic::error(err.code(), err.to_string(), Some(err.span()))
    }
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    level: &'a str,
    file: &'a str,
    line: u32,
    col: u32,
    end_line: u32,
    end_col: u32,
    code: &'a str,
    message: &'a str,
}

/// Serializes diagnostics as a JSON array.
pub fn to_json(diags: &[Diagnostic], file: &str) -> String {
    let rows: Vec<_> = diags
        .iter()
        .map(|d| {
            let span = d.span.unwrap_or_default();
            JsonDiagnostic {
                level: match d.severity {
                    Severity::Info => "info",
                    Severity::Warning => "warning",
                    Severity::Error => "error",
                },
                file,
                line: span.start_line,
                col: span.start_col,
                end_line: span.end_line,
                end_col: span.end_col,
                code: d.code,
                message: &d.message,
            }
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("diagnostics serialize")
}
