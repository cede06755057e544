use super::{DslError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier {s:?}"),
            Tok::Int(n) => return write!(f, "integer {n}"),
            Tok::LBracket => "'['",
            Tok::RBracket => "']'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Comma => "','",
            Tok::Semi => "';'",
            Tok::Dot => "'.'",
            Tok::Plus => "'+'",
            Tok::Minus => "'-'",
            Tok::Star => "'*'",
            Tok::Slash => "'/'",
            Tok::Caret => "'^'",
            Tok::Eq => "'='",
            Tok::Ne => "'!='",
            Tok::Lt => "'<'",
            Tok::Le => "'<='",
            Tok::Gt => "'>'",
            Tok::Ge => "'>='",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0usize, 1u32, 1u32);
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = (pos, line, col);
        let span = |end: usize| Span { start: start.0, end, line: start.1, col: start.2 };
        if c == b'\n' {
            pos += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            pos += 1;
            col += 1;
            continue;
        }
        if c == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let s = &text[start.0..pos];
            let n = s.parse::<i64>().map_err(|_| DslError::syntax(span(pos), format!("integer {s} is too large")))?;
            col += (pos - start.0) as u32;
            out.push((Tok::Int(n), span(pos)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            col += (pos - start.0) as u32;
            out.push((Tok::Ident(text[start.0..pos].to_string()), span(pos)));
            continue;
        }
        let two = if pos + 1 < bytes.len() { Some((c, bytes[pos + 1])) } else { None };
        let (tok, len) = match two {
            Some((b'!', b'=')) => (Tok::Ne, 2),
            Some((b'<', b'=')) => (Tok::Le, 2),
            Some((b'>', b'=')) => (Tok::Ge, 2),
            _ => match c {
                b'[' => (Tok::LBracket, 1),
                b']' => (Tok::RBracket, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b',' => (Tok::Comma, 1),
                b';' => (Tok::Semi, 1),
                b'.' => (Tok::Dot, 1),
                b'+' => (Tok::Plus, 1),
                b'-' => (Tok::Minus, 1),
                b'*' => (Tok::Star, 1),
                b'/' => (Tok::Slash, 1),
                b'^' => (Tok::Caret, 1),
                b'=' => (Tok::Eq, 1),
                b'<' => (Tok::Lt, 1),
                b'>' => (Tok::Gt, 1),
                _ => {
                    let ch = text[pos..].chars().next().unwrap_or('?');
                    return Err(DslError::syntax(span(pos + ch.len_utf8()), format!("unexpected character {ch:?}")));
                }
            },
        };
        pos += len;
        col += len as u32;
        out.push((tok, span(pos)));
    }
    out.push((Tok::Eof, Span { start: pos, end: pos, line, col }));
    Ok(out)
}
