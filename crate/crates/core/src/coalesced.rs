//! The projection machine with coalesced projections: `pick n tp` and
//! `drop n tp` stand for `car(cdr^n tp)` and `cdr^n tp`, so the depth of a
//! projection is a number instead of a chain. Also the small-step semantics
//! that absorbs top-level binders as numeric indices.

use std::fmt;

use crate::control::{CStuck, SPLIT, UNSPLIT};
use crate::derived::{Level, Top};
use crate::machine::{Command, CoTerm, ReadbackError, Step, Unload, UNPUSH};
use crate::projection::{legal_projections, Car, PCommand};
use crate::syntax::{Atom, Expr, Name};
use crate::{QTerm, Term};

/// `pick n tp`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pick(pub usize);

impl fmt::Display for Pick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pick {} tp", self.0)
    }
}

impl Atom for Pick {
    fn is_compound(&self) -> bool {
        true
    }
}

/// `drop n tp`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DropN(pub usize);

impl fmt::Display for DropN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "drop {} tp", self.0)
    }
}

pub type QCoTerm = CoTerm<QTerm, DropN>;
pub type QCommand = Command<Pick, DropN>;

pub fn coalesced_load(t: &Term) -> QCommand {
    Command::new(t.widen(), CoTerm::End(DropN(0)))
}

/// Krivine's rules plus `<\x.v || drop n tp> -> <v[pick n tp/x] || drop (n+1) tp>`.
pub fn coalesced_step(c: &QCommand) -> Step<QCommand> {
    if let Some((rule, next)) = c.krivine_rules() {
        return Step::Next(rule, next);
    }
    match (&c.term, &c.coterm) {
        (Expr::Lam(x, body), CoTerm::End(DropN(n))) => Step::Next(
            SPLIT,
            Command::new(body.subst(x, &Expr::Atom(Pick(*n))), CoTerm::End(DropN(n + 1))),
        ),
        _ => Step::Terminal,
    }
}

pub fn pick_to_pure(v: &QTerm) -> Result<Term, ReadbackError> {
    v.try_map_atoms(&|p: &Pick| Err(ReadbackError::IllegalState(p.to_string())))
}

/// `<v || v' . E> <-' <v v' || E>`,
/// `<v || drop (n+1) tp> <-' <\x.v[x/pick n tp] || drop n tp>`,
/// `<v || tp> <-' v`.
pub fn coalesced_readback_step(c: &QCommand) -> Result<Unload<QCommand>, ReadbackError> {
    if let Some(next) = c.unpush() {
        return Ok(Unload::Next(UNPUSH, next));
    }
    match c.coterm.end() {
        DropN(0) => Ok(Unload::Done(pick_to_pure(&c.term)?)),
        DropN(n) => {
            let depth = n - 1;
            let is_depth = |p: &Pick| p.0 == depth;
            let x = c.term.safe_name_for(&is_depth, &Name::from("x"));
            let body = c.term.replace_atom(&is_depth, &x);
            Ok(Unload::Next(UNSPLIT, Command::new(Expr::lam(x, body), CoTerm::End(DropN(depth)))))
        }
    }
}

pub fn coalesced_readback(c: &QCommand) -> Result<Term, ReadbackError> {
    let mut cur = c.clone();
    loop {
        match coalesced_readback_step(&cur)? {
            Unload::Next(_, next) => cur = next,
            Unload::Done(t) => return Ok(t),
        }
    }
}

pub fn is_legal_coalesced(c: &QCommand) -> bool {
    legal_projections(&c.term, &c.coterm.args(), c.coterm.end().0, |p| p.0)
}

/// Expands the `pick`/`drop` macros into `car`/`cdr` chains.
pub fn expand_macros(c: &QCommand) -> PCommand {
    let expand = |v: &QTerm| -> Expr<Car> {
        v.try_map_atoms::<Car, std::convert::Infallible>(&|p| Ok(Expr::Atom(Car(p.0))))
            .unwrap_or_else(|e| match e {})
    };
    let args = c.coterm.args().into_iter().map(expand).collect();
    Command::new(expand(&c.term), CoTerm::from_args(args, CStuck(c.coterm.end().0)))
}

pub type DTopTerm = Top<Level>;

pub fn debruijn_load(t: &Term) -> DTopTerm {
    DTopTerm::plain(t)
}

/// `\^n.\x.v |-> \^(n+1).v[n/x]` and `\^n.E[(\x.v) v'] |-> \^n.E[v[v'/x]]`.
pub fn debruijn_step(t: &DTopTerm) -> Step<DTopTerm> {
    t.step()
}

pub fn debruijn_readback(t: &DTopTerm) -> Result<Term, ReadbackError> {
    t.readback()
}
