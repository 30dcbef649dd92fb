//! Text syntax for pure terms (the `.lam` file format).
//!
//! ```text
//! term  ::= lam | app
//! lam   ::= ('\' | 'λ') ident+ '.' term
//! app   ::= atom+ lam?
//! atom  ::= ident | '(' term ')'
//! ident ::= [A-Za-z_][A-Za-z0-9_']*
//! ```
//!
//! Application is left-associative and an abstraction body extends as far
//! right as possible. `--` starts a comment running to the end of the line.
//! The names the machines use for call-stack projections are reserved.

use thiserror::Error;

use crate::syntax::Name;
use crate::Term;

/// Identifiers that only engines may produce.
pub const RESERVED: [&str; 5] = ["tp", "car", "cdr", "pick", "drop"];

/// Maximum nesting of parentheses and binders accepted by the parser.
pub const MAX_DEPTH: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = |tok| (tok, SourceSpan { start: i, end: i + c.len_utf8() });
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '-' if src[i..].starts_with("--") => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '\\' | 'λ' => {
                out.push(single(Tok::Lambda));
                chars.next();
            }
            '.' => {
                out.push(single(Tok::Dot));
                chars.next();
            }
            '(' => {
                out.push(single(Tok::Open));
                chars.next();
            }
            ')' => {
                out.push(single(Tok::Close));
                chars.next();
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        end = j + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(src[i..end].to_string()), SourceSpan { start: i, end }));
            }
            other => {
                return Err(ParseError {
                    span: SourceSpan { start: i, end: i + other.len_utf8() },
                    message: format!("unexpected character {other:?}"),
                });
            }
        }
    }
    Ok(out)
}

/// What ends the term a frame is building.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Closer {
    /// End of input.
    Top,
    /// A `)`; the finished term is an atom of the enclosing application.
    Paren,
    /// Whatever ends the enclosing application; the finished term is its
    /// final argument.
    Arg,
}

struct Frame {
    binders: Vec<Name>,
    acc: Option<Term>,
    closer: Closer,
}

impl Frame {
    fn new(closer: Closer) -> Self {
        Frame { binders: Vec::new(), acc: None, closer }
    }

    fn push_atom(&mut self, a: Term) {
        self.acc = Some(match self.acc.take() {
            Some(f) => Term::app(f, a),
            None => a,
        });
    }
}

/// The parser keeps its own stack of open terms so nesting depth is bounded
/// by [`MAX_DEPTH`] rather than by the thread's stack.
struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan { start: self.len, end: self.len })
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { span: self.span(), message: message.into() })
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                if RESERVED.contains(&s.as_str()) {
                    return self.error(format!("`{s}` is reserved for machine states"));
                }
                let name = Name::from(s.as_str());
                self.pos += 1;
                Ok(name)
            }
            _ => self.error("expected an identifier"),
        }
    }

    /// Reads a prefix `\x y.\z.` into `binders`.
    fn binders(&mut self, binders: &mut Vec<Name>) -> Result<(), ParseError> {
        while self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            binders.push(self.ident()?);
            while let Some(Tok::Ident(_)) = self.peek() {
                binders.push(self.ident()?);
            }
            if self.peek() != Some(&Tok::Dot) {
                return self.error("expected `.` after binders");
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn open(&mut self, stack: &mut Vec<Frame>, depth: &mut usize, closer: Closer) -> Result<(), ParseError> {
        let mut frame = Frame::new(closer);
        self.binders(&mut frame.binders)?;
        *depth += 1 + frame.binders.len();
        if *depth > MAX_DEPTH {
            return self.error(format!("term nested deeper than {MAX_DEPTH}"));
        }
        stack.push(frame);
        Ok(())
    }

    fn parse(&mut self) -> Result<Term, ParseError> {
        let mut stack = Vec::new();
        let mut depth = 0;
        self.open(&mut stack, &mut depth, Closer::Top)?;
        loop {
            let top = stack.last_mut().expect("frame stack is never empty here");
            match self.peek() {
                Some(Tok::Ident(_)) => {
                    let x = self.ident()?;
                    stack.last_mut().unwrap().push_atom(Term::Var(x));
                }
                Some(Tok::Open) => {
                    self.pos += 1;
                    self.open(&mut stack, &mut depth, Closer::Paren)?;
                }
                Some(Tok::Lambda) if top.acc.is_some() => {
                    self.open(&mut stack, &mut depth, Closer::Arg)?;
                }
                _ => {
                    let frame = stack.pop().unwrap();
                    let Some(body) = frame.acc else {
                        return self.error("expected a term");
                    };
                    depth -= 1 + frame.binders.len();
                    let t = frame.binders.into_iter().rev().fold(body, |b, x| Term::lam(x, b));
                    match frame.closer {
                        Closer::Top => {
                            if self.pos != self.toks.len() {
                                return self.error("unexpected trailing input");
                            }
                            return Ok(t);
                        }
                        Closer::Paren => {
                            if self.peek() != Some(&Tok::Close) {
                                return self.error("expected `)`");
                            }
                            self.pos += 1;
                        }
                        Closer::Arg => {}
                    }
                    stack.last_mut().unwrap().push_atom(t);
                }
            }
        }
    }
}

/// Parses a pure term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, len: src.len() }.parse()
}
