//! Surface syntax for terms, contexts and instance files.
//!
//! ```text
//! term  := lam | pi | app
//! lam   := "\" "(" ident ":" term ")" "->" term
//! pi    := "Pi" "(" ident ":" term ")" "->" term
//! app   := atom { atom }
//! atom  := ident | sort | "(" term ")"
//! sort  := "*" | "#" | "'" ident
//! ```
//!
//! Binder bodies extend as far right as possible. Printing inserts the
//! fewest parentheses that reparse to the identical tree.

use std::fmt;

use crate::syntax::{is_ident, Sort, Term, Var};
use crate::typing::{Ctx, PtsSpec, SpecError};

/// Byte offsets into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {}..{}: {message}{}", .span.start, .span.end, expected_suffix(.expected))]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<&'static str>,
    pub message: String,
}

fn expected_suffix(expected: &[&'static str]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sort(String),
    Backslash,
    LParen,
    RParen,
    Colon,
    Comma,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sort(s) => format!("sort `{}`", Sort::new(s)),
            Tok::Backslash => "`\\`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_end = |mut j: usize| {
        while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'\\' => Tok::Backslash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b':' => Tok::Colon,
            b',' => Tok::Comma,
            b'*' => Tok::Sort("*".into()),
            b'#' => Tok::Sort("#".into()),
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'\'' => {
                let end = ident_end(i + 1);
                let name = &src[i + 1..end];
                if !is_ident(name) {
                    return Err(ParseError {
                        span: SourceSpan { start, end },
                        expected: vec!["sort name"],
                        message: "malformed user sort".into(),
                    });
                }
                i = end - 1;
                Tok::Sort(name.into())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let end = ident_end(i);
                i = end - 1;
                Tok::Ident(src[start..end].into())
            }
            _ => {
                let len = src[i..].chars().next().map_or(1, char::len_utf8);
                return Err(ParseError {
                    span: SourceSpan {
                        start,
                        end: start + len,
                    },
                    expected: vec![],
                    message: format!("unexpected character `{}`", &src[i..i + len]),
                });
            }
        };
        i += 1;
        out.push((tok, SourceSpan { start, end: i }));
    }
    out.push((
        Tok::Eof,
        SourceSpan {
            start: src.len(),
            end: src.len(),
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            span: self.span(),
            expected,
            message: format!("unexpected {}", self.peek().describe()),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn ident(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s != "Pi" => {
                let v = Var::new(s);
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(vec!["identifier"])),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["end of input"]))
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => s != "Pi",
            Tok::Sort(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let (x, a, m) = self.binder()?;
                Ok(Term::lam(x, a, m))
            }
            Tok::Ident(s) if s == "Pi" => {
                self.bump();
                let (x, a, b) = self.binder()?;
                Ok(Term::pi(x, a, b))
            }
            _ => self.app(),
        }
    }

    fn binder(&mut self) -> Result<(Var, Term, Term), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let x = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let a = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Arrow, "`->`")?;
        let body = self.term()?;
        Ok((x, a, body))
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            t = Term::app(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s != "Pi" => {
                self.bump();
                Ok(Term::Var(Var::new(&s)))
            }
            Tok::Sort(s) => {
                self.bump();
                Ok(Term::Const(Sort::new(&s)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(vec!["term"])),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

/// Parses `x : A, y : B, ...`; blank input is the empty context.
pub fn parse_ctx(src: &str) -> Result<Ctx, ParseError> {
    let mut p = Parser::new(src)?;
    let mut decls = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(Ctx::new());
    }
    loop {
        let x = p.ident()?;
        p.expect(Tok::Colon, "`:`")?;
        decls.push((x, p.term()?));
        match p.peek() {
            Tok::Comma => {
                p.bump();
            }
            Tok::Eof => break,
            _ => return Err(p.error(vec!["`,`", "end of input"])),
        }
    }
    Ok(Ctx::from_decls(decls))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] SpecError),
}

fn spec_sort(line: usize, word: &str) -> Result<Sort, SpecFileError> {
    let name = word.strip_prefix('\'').unwrap_or(word);
    Sort::try_new(name).map_err(|e| SpecFileError::Syntax {
        line,
        message: e.to_string(),
    })
}

/// Parses an instance file of `sort s`, `axiom s1 s2` and `rule s1 s2 s3`
/// lines. A line whose first non-blank character is `#` is a comment, so
/// `sort #` still declares the box sort. Line numbers start at 1.
pub fn parse_spec(src: &str) -> Result<PtsSpec, SpecFileError> {
    let mut sorts = Vec::new();
    let mut axioms = Vec::new();
    let mut rules = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let args = |n: usize| -> Result<Vec<Sort>, SpecFileError> {
            if words.len() != n + 1 {
                return Err(SpecFileError::Syntax {
                    line,
                    message: format!("`{}` takes {n} sort(s)", words[0]),
                });
            }
            words[1..].iter().map(|w| spec_sort(line, w)).collect()
        };
        match words[0] {
            "sort" => sorts.extend(args(1)?),
            "axiom" => {
                let s = args(2)?;
                axioms.push((s[0].clone(), s[1].clone()));
            }
            "rule" => {
                let s = args(3)?;
                rules.push((s[0].clone(), s[1].clone(), s[2].clone()));
            }
            other => {
                return Err(SpecFileError::Syntax {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    Ok(PtsSpec::new(sorts, axioms, rules)?)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    /// Anywhere a full term is allowed.
    Top,
    /// Function part of an application.
    Head,
    /// Argument of an application.
    Arg,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, pos: Pos) -> fmt::Result {
    match t {
        Term::Const(s) => write!(f, "{s}"),
        Term::Var(x) => write!(f, "{x}"),
        Term::Lam(x, a, m) | Term::Pi(x, a, m) => {
            if pos != Pos::Top {
                f.write_str("(")?;
            }
            let kw = if matches!(t, Term::Lam(..)) { "\\" } else { "Pi " };
            write!(f, "{kw}({x} : ")?;
            write_term(f, a, Pos::Top)?;
            f.write_str(") -> ")?;
            write_term(f, m, Pos::Top)?;
            if pos != Pos::Top {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::App(m, n) => {
            if pos == Pos::Arg {
                f.write_str("(")?;
            }
            write_term(f, m, Pos::Head)?;
            f.write_str(" ")?;
            write_term(f, n, Pos::Arg)?;
            if pos == Pos::Arg {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Pos::Top)
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {a}")?;
        }
        Ok(())
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

pub fn print_ctx(ctx: &Ctx) -> String {
    ctx.to_string()
}
