//! S-expression reader shared by every surface language.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Byte range into the source text, `start <= end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        debug_assert!(start <= end);
        Span { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lex,
    Parse,
    DuplicateBinder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
}

impl SyntaxError {
    pub fn parse(span: Span, message: impl Into<String>) -> SyntaxError {
        SyntaxError { kind: ErrorKind::Parse, span, message: message.into() }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ErrorKind::Lex => "lex error",
            ErrorKind::Parse => "parse error",
            ErrorKind::DuplicateBinder => "duplicate binder",
        };
        write!(f, "{what} at {}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

pub type SyntaxResult<T> = Result<T, SyntaxError>;

fn is_atom_char(c: u8) -> bool {
    c.is_ascii_graphic() && !matches!(c, b'(' | b')' | b';' | b'"')
}

/// Reads every top-level form in `text`.
pub fn read_all(text: &str) -> SyntaxResult<Vec<Sexp>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    // stack of (open paren offset, children)
    let mut stack: Vec<(usize, Vec<Sexp>)> = Vec::new();
    let mut top = Vec::new();
    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b';' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'(' => {
                stack.push((pos, Vec::new()));
                pos += 1;
            }
            b')' => {
                let Some((open, items)) = stack.pop() else {
                    return Err(SyntaxError::parse(Span::new(pos, pos + 1), "unbalanced ')'"));
                };
                pos += 1;
                let node = Sexp { kind: SexpKind::List(items), span: Span::new(open, pos) };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => top.push(node),
                }
            }
            c if is_atom_char(c) => {
                let start = pos;
                while pos < bytes.len() && is_atom_char(bytes[pos]) {
                    pos += 1;
                }
                let node = Sexp { kind: SexpKind::Atom(text[start..pos].to_string()), span: Span::new(start, pos) };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => top.push(node),
                }
            }
            _ => {
                let width = text[pos..].chars().next().map_or(1, char::len_utf8);
                return Err(SyntaxError {
                    kind: ErrorKind::Lex,
                    span: Span::new(pos, pos + width),
                    message: "unexpected character".to_string(),
                });
            }
        }
    }
    if let Some((open, _)) = stack.last() {
        return Err(SyntaxError::parse(Span::new(*open, text.len()), "unclosed '('"));
    }
    Ok(top)
}

/// Reads exactly one form.
pub fn read_one(text: &str) -> SyntaxResult<Sexp> {
    let mut forms = read_all(text)?;
    match forms.len() {
        1 => Ok(forms.pop().unwrap()),
        0 => Err(SyntaxError::parse(Span::new(0, text.len()), "empty input")),
        _ => Err(SyntaxError::parse(forms[1].span, "expected a single form")),
    }
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(a) => Some(a),
            SexpKind::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            SexpKind::Atom(_) => None,
        }
    }

    /// Splits `(head args...)` into the head keyword and its arguments.
    pub fn head(&self) -> Option<(&str, &[Sexp])> {
        let items = self.list()?;
        let (first, rest) = items.split_first()?;
        Some((first.atom()?, rest))
    }

    pub fn expect_atom(&self, what: &str) -> SyntaxResult<&str> {
        self.atom().ok_or_else(|| SyntaxError::parse(self.span, alloc::format!("expected {what}")))
    }

    pub fn expect_list(&self, what: &str) -> SyntaxResult<&[Sexp]> {
        self.list().ok_or_else(|| SyntaxError::parse(self.span, alloc::format!("expected {what}")))
    }
}

/// Checks that `args` has exactly `n` elements.
pub fn arity(span: Span, head: &str, args: &[Sexp], n: usize) -> SyntaxResult<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(SyntaxError::parse(span, alloc::format!("'{head}' takes {n} argument(s), found {}", args.len())))
    }
}

pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '\'' | '!' | '?' | '.'))
}

/// Reads an identifier atom, rejecting keywords supplied by the caller.
pub fn ident(s: &Sexp, reserved: &[&str]) -> SyntaxResult<String> {
    let a = s.expect_atom("identifier")?;
    if !is_ident(a) || reserved.contains(&a) {
        return Err(SyntaxError::parse(s.span, alloc::format!("'{a}' is not a usable identifier")));
    }
    Ok(a.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_cover_nested_lists() {
        let forms = read_all("(a (b c)) d").unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].span, Span::new(0, 9));
        let inner = &forms[0].list().unwrap()[1];
        assert_eq!(inner.span, Span::new(3, 8));
        assert_eq!(forms[1].span, Span::new(10, 11));
    }

    #[test]
    fn comments_are_skipped() {
        let forms = read_all("; hello\n(x) ; trailing").unwrap();
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn bad_character_is_a_lex_error() {
        let err = read_all("(a ∀)").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Lex);
        assert_eq!(err.span.start, 3);
        assert!(err.span.end <= "(a ∀)".len());
    }

    #[test]
    fn unbalanced_parens() {
        assert_eq!(read_all("(a").unwrap_err().kind, ErrorKind::Parse);
        assert_eq!(read_all("a)").unwrap_err().kind, ErrorKind::Parse);
    }
}
