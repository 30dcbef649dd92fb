//! Head reduction on terms under a prefix of anonymous binders.
//!
//! An abstraction reaching the top of the term is absorbed into the prefix
//! and its variable replaced by an index naming the absorbed binder: index
//! `k` is the binder absorbed when the prefix had length `k`, so under a
//! prefix of length `n` the innermost binder is `n - 1`. Two index
//! representations are provided: unary naturals ([`Nat`], giving
//! [`TopTerm`]) and machine integers ([`Level`], giving
//! [`DTopTerm`](crate::coalesced::DTopTerm)).

use std::fmt;
use std::sync::Arc;

use crate::machine::{ReadbackError, Rule, Step, Unload, BETA};
use crate::syntax::{Atom, Expr, Name};
use crate::Term;

/// `S[\x.v] -> S[\.v[Count(S)/x]]`
pub const ABSORB: Rule = Rule::admin("absorb");
/// `S[\.v] <-' S[\x.v[x/Count(S)]]`
pub const UNABSORB: &str = "unabsorb";

/// An index naming a binder of the top-level prefix.
pub trait Index: Atom {
    /// The index of a binder absorbed under a prefix of length `count`.
    fn from_count(count: usize) -> Self;
    fn value(&self) -> usize;
    fn fmt_prefix(binders: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

/// Unary naturals `zero | succ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Nat {
    Zero,
    Succ(Arc<Nat>),
}

impl Nat {
    pub fn to_usize(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Nat::Succ(p) = cur {
            n += 1;
            cur = p;
        }
        n
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.to_usize())
    }
}

impl Atom for Nat {}

impl Index for Nat {
    fn from_count(count: usize) -> Self {
        (0..count).fold(Nat::Zero, |p, _| Nat::Succ(Arc::new(p)))
    }

    fn value(&self) -> usize {
        self.to_usize()
    }

    fn fmt_prefix(binders: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..binders {
            f.write_str("\\.")?;
        }
        Ok(())
    }
}

/// A machine-integer index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(pub usize);

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Atom for Level {}

impl Index for Level {
    fn from_count(count: usize) -> Self {
        Level(count)
    }

    fn value(&self) -> usize {
        self.0
    }

    fn fmt_prefix(binders: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if binders > 0 {
            write!(f, "\\^{binders}.")?;
        }
        Ok(())
    }
}

/// `\^n.v`: a body under `n` anonymous binders.
///
/// The names of the absorbed binders are kept as hints for readback, so
/// reading back a term that was only absorbed gives the original names.
/// They take no part in equality.
#[derive(Clone, Debug)]
pub struct Top<I> {
    pub names: Vec<Name>,
    pub body: Expr<I>,
}

pub type TopTerm = Top<Nat>;
pub type IxTerm = Expr<Nat>;

impl<I: Index> PartialEq for Top<I> {
    fn eq(&self, other: &Self) -> bool {
        self.binders() == other.binders() && self.body == other.body
    }
}

impl<I: Index> Top<I> {
    /// A term with no binder prefix.
    pub fn plain(t: &Term) -> Self {
        Top { names: Vec::new(), body: t.widen() }
    }

    /// A prefix of `binders` binders with default readback hints.
    pub fn anonymous(binders: usize, body: Expr<I>) -> Self {
        Top { names: vec![Name::from("x"); binders], body }
    }

    /// `Count(S)`
    pub fn binders(&self) -> usize {
        self.names.len()
    }

    /// `\x.v` at the top of the body moves into the prefix.
    pub fn absorb(&self) -> Option<Self> {
        match &self.body {
            Expr::Lam(x, v) => {
                let mut names = self.names.clone();
                names.push(x.clone());
                let body = v.subst(x, &Expr::Atom(I::from_count(self.binders())));
                Some(Top { names, body })
            }
            _ => None,
        }
    }

    /// One step: absorb a top-level abstraction, else contract the head
    /// redex of the body.
    pub fn step(&self) -> Step<Self> {
        if let Some(next) = self.absorb() {
            return Step::Next(ABSORB, next);
        }
        let (head, args) = self.body.spine();
        match (head, args.split_first()) {
            (Expr::Lam(x, b), Some((arg, rest))) => {
                let contracted = b.subst_shared(x, arg);
                let body = rest.iter().fold(contracted, |f, a| Expr::App(Arc::new(f), Arc::clone(a)));
                Step::Next(BETA, Top { names: self.names.clone(), body })
            }
            _ => Step::Terminal,
        }
    }

    /// [`Top::step`] in place, returning the rule applied.
    pub fn step_mut(&mut self) -> Option<Rule> {
        if let Some(next) = self.absorb() {
            *self = next;
            return Some(ABSORB);
        }
        self.body.contract_spine_head().then_some(BETA)
    }

    /// `S[\.v] <-' S[\x.v[x/Count(S)]]`, ending with `v <-' v` once the
    /// prefix is empty.
    pub fn readback_step(&self) -> Result<Unload<Self>, ReadbackError> {
        let Some((hint, outer)) = self.names.split_last() else {
            let t = self
                .body
                .try_map_atoms(&|i: &I| Err(ReadbackError::IllegalState(i.to_string())))?;
            return Ok(Unload::Done(t));
        };
        let k = outer.len();
        let is_k = |i: &I| i.value() == k;
        let x = self.body.safe_name_for(&is_k, hint);
        let body = Expr::lam(x.clone(), self.body.replace_atom(&is_k, &x));
        Ok(Unload::Next(UNABSORB, Top { names: outer.to_vec(), body }))
    }

    pub fn readback(&self) -> Result<Term, ReadbackError> {
        let mut cur = self.clone();
        loop {
            match cur.readback_step()? {
                Unload::Next(_, next) => cur = next,
                Unload::Done(t) => return Ok(t),
            }
        }
    }

    /// Every index occurring in the body is below the prefix length.
    pub fn is_legal(&self) -> bool {
        fn ok<I: Index>(v: &Expr<I>, n: usize) -> bool {
            match v {
                Expr::Var(_) => true,
                Expr::Atom(i) => i.value() < n,
                Expr::App(f, a) => ok(f, n) && ok(a, n),
                Expr::Lam(_, b) => ok(b, n),
            }
        }
        ok(&self.body, self.binders())
    }
}

impl<I: Index> fmt::Display for Top<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        I::fmt_prefix(self.binders(), f)?;
        write!(f, "{}", self.body)
    }
}

pub fn derived_load(t: &Term) -> TopTerm {
    TopTerm::plain(t)
}

pub fn derived_step(t: &TopTerm) -> Step<TopTerm> {
    t.step()
}

pub fn derived_readback(t: &TopTerm) -> Result<Term, ReadbackError> {
    t.readback()
}

pub fn is_legal_top(t: &TopTerm) -> bool {
    t.is_legal()
}

/// `t*`: the normal form of readback.
pub fn translate_star(t: &TopTerm) -> Result<Term, ReadbackError> {
    t.readback()
}

/// `v#`: absorbs every top-level abstraction of `v`.
pub fn translate_hash(v: &Term) -> TopTerm {
    absorb_all(&TopTerm::plain(v))
}

/// Applies absorption until the body is not an abstraction.
pub fn absorb_all<I: Index>(t: &Top<I>) -> Top<I> {
    let mut cur = t.clone();
    while let Some(next) = cur.absorb() {
        cur = next;
    }
    cur
}
