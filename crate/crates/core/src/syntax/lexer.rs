//! Comment stripping and tokenization.
//!
//! The lexer treats comments as whitespace, so `tokenize(strip_comments(s))`
//! and `tokenize(s)` agree on kinds and lexemes. Only the lexer keeps exact
//! columns; the stripped text keeps lines but not columns.

use std::fmt;

use super::{SourceSpan, SyntaxError};

/// Reserved words. Matching is whole-token and case-sensitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Story,
    Initial,
    Section,
    Goes,
    When,
    Where,
    Or,
    And,
}

impl Keyword {
    pub const ALL: [Keyword; 8] = [
        Keyword::Story,
        Keyword::Initial,
        Keyword::Section,
        Keyword::Goes,
        Keyword::When,
        Keyword::Where,
        Keyword::Or,
        Keyword::And,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Story => "STORY",
            Keyword::Initial => "INITIAL",
            Keyword::Section => "SECTION",
            Keyword::Goes => "GOES",
            Keyword::When => "WHEN",
            Keyword::Where => "WHERE",
            Keyword::Or => "OR",
            Keyword::And => "AND",
        }
    }

    pub fn from_word(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    Word,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "`{k}`"),
            TokenKind::Word => f.write_str("a word"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
}

impl Token {
    /// Human-readable description used in "found ..." messages.
    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Word => format!("word `{}`", self.lexeme),
            other => other.to_string(),
        }
    }
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

/// Line/column cursor over ASCII-checked bytes.
struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn at_comment(&self) -> bool {
        self.peek() == Some(b'/') && matches!(self.peek2(), Some(b'/') | Some(b'*'))
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn here(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    /// Skips a comment starting at the cursor, calling `on_newline` for each
    /// newline inside a block comment.
    fn skip_comment(&mut self, mut on_newline: impl FnMut()) -> Result<(), SyntaxError> {
        let (line, col) = self.here();
        self.bump();
        if self.bump() == b'/' {
            while let Some(b) = self.peek() {
                if b == b'\n' {
                    break;
                }
                self.bump();
            }
            return Ok(());
        }
        loop {
            match self.peek() {
                None => {
                    return Err(SyntaxError::UnterminatedBlockComment {
                        span: SourceSpan::new(line, col, line, col + 1),
                    })
                }
                Some(b'*') if self.peek2() == Some(b'/') => {
                    self.bump();
                    self.bump();
                    return Ok(());
                }
                Some(b) => {
                    if b == b'\n' {
                        on_newline();
                    }
                    self.bump();
                }
            }
        }
    }
}

/// Rejects anything outside printable ASCII plus whitespace.
fn check_charset(source: &str) -> Result<(), SyntaxError> {
    let (mut line, mut col) = (1u32, 1u32);
    for ch in source.chars() {
        let ok = ch.is_ascii() && (ch.is_ascii_graphic() || is_space(ch as u8));
        if !ok {
            return Err(SyntaxError::InvalidCharacter {
                ch,
                span: SourceSpan::new(line, col, line, col),
            });
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Ok(())
}

/// Removes every `//` and `/* */` comment. Newlines inside block comments
/// are kept so line numbers survive; a comment that would otherwise glue two
/// words together leaves a single space.
pub fn strip_comments(source: &str) -> Result<String, SyntaxError> {
    check_charset(source)?;
    let mut out = String::with_capacity(source.len());
    let mut cur = Cursor::new(source);
    while let Some(b) = cur.peek() {
        if cur.at_comment() {
            let before = out.len();
            let separated = out.bytes().last().is_none_or(is_space);
            cur.skip_comment(|| out.push('\n'))?;
            if out.len() == before && !separated {
                out.push(' ');
            }
        } else {
            out.push(b as char);
            cur.bump();
        }
    }
    Ok(out)
}

/// Splits source text into tokens, always ending with `Eof`.
pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    check_charset(source)?;
    let mut cur = Cursor::new(source);
    let mut tokens = Vec::new();
    loop {
        match cur.peek() {
            None => break,
            Some(b) if is_space(b) => {
                cur.bump();
            }
            Some(_) if cur.at_comment() => cur.skip_comment(|| ())?,
            Some(b) => {
                let (line, col) = cur.here();
                let kind = match b {
                    b'{' => Some(TokenKind::LBrace),
                    b'}' => Some(TokenKind::RBrace),
                    b',' => Some(TokenKind::Comma),
                    _ => None,
                };
                if let Some(kind) = kind {
                    cur.bump();
                    tokens.push(Token {
                        kind,
                        lexeme: (b as char).to_string(),
                        span: SourceSpan::new(line, col, line, col),
                    });
                    continue;
                }
                let start = cur.pos;
                let mut prev = (line, col);
                while let Some(c) = cur.peek() {
                    if is_space(c) || matches!(c, b'{' | b'}' | b',') || cur.at_comment() {
                        break;
                    }
                    prev = cur.here();
                    cur.bump();
                }
                let (end_line, end_col) = prev;
                let lexeme = source[start..cur.pos].to_string();
                let kind = match Keyword::from_word(&lexeme) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Word,
                };
                tokens.push(Token { kind, lexeme, span: SourceSpan::new(line, col, end_line, end_col) });
            }
        }
    }
    let (line, col) = cur.here();
    tokens.push(Token { kind: TokenKind::Eof, lexeme: String::new(), span: SourceSpan::new(line, col, line, col) });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src).unwrap().into_iter().map(|t| (t.kind, t.lexeme)).collect()
    }

    #[test]
    fn strips_line_comment() {
        assert_eq!(strip_comments("STORY X // hi\nINITIAL A").unwrap(), "STORY X \nINITIAL A");
    }

    #[test]
    fn strips_block_comment_keeping_newline() {
        assert_eq!(strip_comments("A /* b\nc */ B").unwrap(), "A \n B");
    }

    #[test]
    fn unterminated_block_comment() {
        let err = strip_comments("A /* open").unwrap_err();
        assert_eq!(err, SyntaxError::UnterminatedBlockComment { span: SourceSpan::new(1, 3, 1, 4) });
        assert!(matches!(tokenize("A /* open"), Err(SyntaxError::UnterminatedBlockComment { .. })));
    }

    #[test]
    fn block_comments_do_not_nest() {
        assert_eq!(strip_comments("a /* x /* y */ b */").unwrap(), "a  b */");
        assert_eq!(strip_comments("a/*x*/b").unwrap(), "a b");
    }

    #[test]
    fn transition_tokens() {
        let w = |s: &str| (TokenKind::Word, s.to_string());
        let k = |k: Keyword| (TokenKind::Keyword(k), k.as_str().to_string());
        assert_eq!(
            kinds("Dark GOES Light WHEN dawn"),
            vec![w("Dark"), k(Keyword::Goes), w("Light"), k(Keyword::When), w("dawn"), (TokenKind::Eof, String::new())]
        );
    }

    #[test]
    fn comma_splits_words() {
        assert_eq!(
            kinds("a,b"),
            vec![
                (TokenKind::Word, "a".into()),
                (TokenKind::Comma, ",".into()),
                (TokenKind::Word, "b".into()),
                (TokenKind::Eof, String::new())
            ]
        );
    }

    #[test]
    fn keyword_match_is_whole_token() {
        assert_eq!(kinds("GOESx")[0], (TokenKind::Word, "GOESx".into()));
        assert_eq!(kinds("goes")[0], (TokenKind::Word, "goes".into()));
        assert_eq!(kinds("Goes")[0], (TokenKind::Word, "Goes".into()));
    }

    #[test]
    fn empty_input_is_just_eof() {
        let toks = tokenize("  \n\t ").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::Eof);
    }

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("  ab\n c").unwrap();
        assert_eq!(toks[0].span, SourceSpan::new(1, 3, 1, 4));
        assert_eq!(toks[1].span, SourceSpan::new(2, 2, 2, 2));
    }

    #[test]
    fn comment_terminates_word() {
        assert_eq!(kinds("a/*x*/b").len(), 3);
        assert_eq!(kinds("http://x")[0].1, "http:");
        assert_eq!(kinds("a/b")[0].1, "a/b");
    }

    #[test]
    fn rejects_non_ascii_and_control() {
        assert!(matches!(tokenize("caf\u{e9}"), Err(SyntaxError::InvalidCharacter { ch: '\u{e9}', .. })));
        assert!(matches!(tokenize("a\u{7}b"), Err(SyntaxError::InvalidCharacter { .. })));
        assert!(strip_comments("\u{2014}").is_err());
    }

    #[test]
    fn apostrophes_are_word_characters() {
        assert_eq!(kinds("Can't Escape")[0].1, "Can't");
    }
}
