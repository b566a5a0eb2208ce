//! Line-based layout documents.
//!
//! Indentation is stored per line as a nesting level and only turned into
//! spaces when the document is printed, so banner comments can pad to a
//! fixed column no matter how deeply they end up nested. Blank lines keep
//! the indentation of their nesting level.

pub const INDENT_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineKind {
    Text(String),
    Blank,
    /// `// text ` followed by dashes so the whole line spans `width - 1`
    /// columns, indentation included.
    Banner(String, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub level: usize,
    pub kind: LineKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Doc(pub Vec<Line>);

/// Spaces for one nesting level.
pub fn indent(level: usize) -> String {
    " ".repeat(level * INDENT_WIDTH)
}

/// A banner comment at nesting level `level`.
pub fn banner_at(level: usize, text: &str, width: usize) -> String {
    let prefix = indent(level);
    let head = format!("// {text} ");
    let dashes = width.saturating_sub(1 + prefix.len() + head.len());
    let line = format!("{prefix}{head}{}", "-".repeat(dashes));
    line.trim_end().to_string()
}

/// A banner comment at the left margin.
pub fn banner(text: &str, width: usize) -> String {
    banner_at(0, text, width)
}

impl Doc {
    pub fn empty() -> Doc {
        Doc(Vec::new())
    }

    pub fn line(text: impl Into<String>) -> Doc {
        Doc(vec![Line { level: 0, kind: LineKind::Text(text.into()) }])
    }

    pub fn blank() -> Doc {
        Doc(vec![Line { level: 0, kind: LineKind::Blank }])
    }

    pub fn banner(text: &str, width: usize) -> Doc {
        Doc(vec![Line { level: 0, kind: LineKind::Banner(text.into(), width) }])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, text: impl Into<String>) {
        self.0.push(Line { level: 0, kind: LineKind::Text(text.into()) });
    }

    pub fn append(&mut self, other: Doc) {
        self.0.extend(other.0);
    }

    pub fn nest(mut self, levels: usize) -> Doc {
        for l in &mut self.0 {
            l.level += levels;
        }
        self
    }

    pub fn vcat(docs: impl IntoIterator<Item = Doc>) -> Doc {
        let mut out = Doc::empty();
        for d in docs {
            out.append(d);
        }
        out
    }

    /// Concatenates the non-empty docs with one blank line between each.
    pub fn separated(docs: impl IntoIterator<Item = Doc>) -> Doc {
        let mut out = Doc::empty();
        for d in docs.into_iter().filter(|d| !d.is_empty()) {
            if !out.is_empty() {
                out.append(Doc::blank());
            }
            out.append(d);
        }
        out
    }

    /// Prints the document; the result ends with exactly one newline unless
    /// the document is empty.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.0 {
            match &l.kind {
                LineKind::Text(t) => {
                    out.push_str(&indent(l.level));
                    out.push_str(t);
                }
                LineKind::Blank => out.push_str(&indent(l.level)),
                LineKind::Banner(t, w) => out.push_str(&banner_at(l.level, t, *w)),
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banner_width() {
        assert_eq!(banner("End Nodes", 80), format!("// End Nodes {}", "-".repeat(66)));
        assert_eq!(banner_at(1, "End Nodes", 80), format!("    // End Nodes {}", "-".repeat(62)));
        assert_eq!(banner("far too long for this", 10), "// far too long for this");
    }

    #[test]
    fn indent_levels() {
        assert_eq!(indent(2), "        ");
        assert_eq!(indent(0), "");
    }

    #[test]
    fn blank_lines_keep_indentation() {
        let d = Doc::separated([Doc::line("a"), Doc::empty(), Doc::line("b")]).nest(1);
        assert_eq!(d.render(), "    a\n    \n    b\n");
    }

    #[test]
    fn empty_separated_has_no_stray_blanks() {
        assert!(Doc::separated([Doc::empty(), Doc::empty()]).is_empty());
        assert_eq!(Doc::empty().render(), "");
    }
}
