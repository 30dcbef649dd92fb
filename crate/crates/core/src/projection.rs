//! Head reduction for pure terms on a Krivine machine whose empty context is
//! split into `car`/`cdr` projections when an abstraction reaches it.

use std::fmt;

use crate::control::{CStuck, SPLIT, UNSPLIT};
use crate::machine::{Command, CoTerm, ReadbackError, Step, Unload, UNPUSH};
use crate::syntax::{Atom, Expr, Name};
use crate::{PTerm, Term};

/// `car(cdr^n(tp))`, the argument a stuck call stack was asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Car(pub usize);

impl fmt::Display for Car {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "car({})", CStuck(self.0))
    }
}

impl Atom for Car {}

pub type PCoTerm = CoTerm<PTerm, CStuck>;
pub type PCommand = Command<Car, CStuck>;

/// `v ~> <v || tp>`
pub fn proj_load(t: &Term) -> PCommand {
    Command::new(t.widen(), CoTerm::End(CStuck::TOP))
}

/// Krivine's push and beta rules plus
/// `<\x.v || S> -> <v[car S/x] || cdr S>`.
pub fn proj_step(c: &PCommand) -> Step<PCommand> {
    if let Some((rule, next)) = c.krivine_rules() {
        return Step::Next(rule, next);
    }
    match (&c.term, &c.coterm) {
        (Expr::Lam(x, body), CoTerm::End(s)) => Step::Next(
            SPLIT,
            Command::new(body.subst(x, &Expr::Atom(Car(s.0))), CoTerm::End(s.cdr())),
        ),
        _ => Step::Terminal,
    }
}

/// `v[x/car(cdr^depth tp)]`: every projection at `depth` becomes `x`.
pub fn replace_projection(v: &PTerm, depth: usize, x: &Name) -> PTerm {
    v.replace_atom(&|c: &Car| c.0 == depth, x)
}

/// Strips projections from a term that should be pure.
pub fn proj_to_pure(v: &PTerm) -> Result<Term, ReadbackError> {
    v.try_map_atoms(&|c: &Car| Err(ReadbackError::IllegalState(c.to_string())))
}

/// One readback step:
/// `<v || v' . E> <-' <v v' || E>`,
/// `<v || cdr S> <-' <\x.v[x/car S] || S>`,
/// `<v || tp> <-' v`.
pub fn proj_readback_step(c: &PCommand) -> Result<Unload<PCommand>, ReadbackError> {
    if let Some(next) = c.unpush() {
        return Ok(Unload::Next(UNPUSH, next));
    }
    match c.coterm.end() {
        CStuck(0) => Ok(Unload::Done(proj_to_pure(&c.term)?)),
        CStuck(n) => {
            let depth = n - 1;
            let x = c.term.safe_name_for(&|p: &Car| p.0 == depth, &Name::from("x"));
            let body = replace_projection(&c.term, depth, &x);
            Ok(Unload::Next(UNSPLIT, Command::new(Expr::lam(x, body), CoTerm::End(CStuck(depth)))))
        }
    }
}

pub fn proj_readback(c: &PCommand) -> Result<Term, ReadbackError> {
    let mut cur = c.clone();
    loop {
        match proj_readback_step(&cur)? {
            Unload::Next(_, next) => cur = next,
            Unload::Done(t) => return Ok(t),
        }
    }
}

fn max_projection<X: Atom>(v: &Expr<X>, depth: &impl Fn(&X) -> usize) -> Option<usize> {
    match v {
        Expr::Var(_) => None,
        Expr::Atom(a) => Some(depth(a)),
        Expr::App(f, a) => max_projection(f, depth).max(max_projection(a, depth)),
        Expr::Lam(_, b) => max_projection(b, depth),
    }
}

/// Legality of a state `<v || v1 ... vn . end>`: every projection depth
/// occurring anywhere in it is below the depth of the terminator.
pub fn legal_projections<X: Atom>(
    term: &Expr<X>,
    args: &[&Expr<X>],
    end: usize,
    depth: impl Fn(&X) -> usize,
) -> bool {
    std::iter::once(term)
        .chain(args.iter().copied())
        .all(|v| max_projection(v, &depth).map_or(true, |d| d < end))
}

pub fn is_legal_proj(c: &PCommand) -> bool {
    legal_projections(&c.term, &c.coterm.args(), c.coterm.end().0, |p| p.0)
}
