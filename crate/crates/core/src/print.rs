//! Concrete syntax output for terms and machine states.
//!
//! Terms print with `\` for abstraction and the minimum number of
//! parentheses the parser needs to rebuild the same tree. Machine states
//! print as `<term || coterm>`; every engine implements `Display` for its
//! own state type using [`Operand`] for stacked arguments.

use std::fmt::{self, Write};

use crate::syntax::{Atom, Expr};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Top,
    Head,
    Operand,
}

fn write_expr<X: Atom>(e: &Expr<X>, pos: Position, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Var(x) => write!(f, "{x}"),
        Expr::Atom(a) => {
            if a.is_compound() && pos != Position::Top {
                write!(f, "({a})")
            } else {
                write!(f, "{a}")
            }
        }
        Expr::Lam(x, body) => {
            if pos != Position::Top {
                f.write_char('(')?;
            }
            write!(f, "\\{x}.")?;
            write_expr(body, Position::Top, f)?;
            if pos != Position::Top {
                f.write_char(')')?;
            }
            Ok(())
        }
        Expr::App(fun, arg) => {
            let parens = pos == Position::Operand;
            if parens {
                f.write_char('(')?;
            }
            write_expr(fun, Position::Head, f)?;
            f.write_char(' ')?;
            write_expr(arg, Position::Operand, f)?;
            if parens {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl<X: Atom> fmt::Display for Expr<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, Position::Top, f)
    }
}

/// Renders a term in operand position, e.g. as an element of a call stack.
pub struct Operand<'a, X>(pub &'a Expr<X>);

impl<X: Atom> fmt::Display for Operand<'_, X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.0, Position::Operand, f)
    }
}

/// `print_term`: the canonical text of a term.
pub fn print_term<X: Atom>(t: &Expr<X>) -> String {
    t.to_string()
}

/// `print_state`: the canonical text of any engine state.
pub fn print_state(state: &impl fmt::Display) -> String {
    state.to_string()
}

struct Bounded {
    buf: String,
    limit: usize,
    truncated: bool,
}

impl Write for Bounded {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        let room = self.limit.saturating_sub(self.buf.len());
        if s.len() <= room {
            self.buf.push_str(s);
            return Ok(());
        }
        let mut cut = room;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        self.buf.push_str(&s[..cut]);
        self.truncated = true;
        Err(fmt::Error)
    }
}

/// Renders at most `limit` bytes, appending `...` when the output was cut.
/// Rendering stops as soon as the limit is hit, so this is safe on states
/// whose full text would be enormous.
pub fn render_bounded(x: &impl fmt::Display, limit: usize) -> String {
    let mut w = Bounded {
        buf: String::new(),
        limit,
        truncated: false,
    };
    let _ = write!(w, "{x}");
    if w.truncated {
        w.buf.push_str("...");
    }
    w.buf
}
