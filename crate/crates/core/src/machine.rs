//! Pieces shared by the abstract machines: call stacks, commands, and the
//! result types of a single transition or readback step.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::print::Operand;
use crate::syntax::{Atom, Expr};
use crate::Term;

/// A named transition rule. `beta` marks the rules that contract a redex;
/// fuel is charged per beta rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: &'static str,
    pub beta: bool,
}

impl Rule {
    pub const fn admin(name: &'static str) -> Self {
        Rule { name, beta: false }
    }

    pub const fn beta(name: &'static str) -> Self {
        Rule { name, beta: true }
    }
}

/// `<v v' || E> -> <v || v' . E>`
pub const PUSH: Rule = Rule::admin("push");
/// `<\x.v || v' . E> -> <v[v'/x] || E>`
pub const BETA: Rule = Rule::beta("beta");

/// Result of one transition.
#[derive(Clone, Debug, PartialEq)]
pub enum Step<C> {
    Next(Rule, C),
    /// No rule applies and the state is a final answer.
    Terminal,
    /// No rule applies but the state is not an answer.
    Stuck(String),
}

impl<C> Step<C> {
    pub fn next(self) -> Option<C> {
        match self {
            Step::Next(_, c) => Some(c),
            _ => None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Step::Terminal)
    }
}

/// `<v || v' . E> <-' <v v' || E>`
pub const UNPUSH: &str = "unpush";
/// `<v || tp> <-' v`
pub const DONE: &str = "done";

/// Result of one readback step.
#[derive(Clone, Debug, PartialEq)]
pub enum Unload<C> {
    Next(&'static str, C),
    Done(Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReadbackError {
    #[error("projection {0} survived readback; the state was not legal")]
    IllegalState(String),
    #[error("readback from a non-terminal state: {0}")]
    NotTerminal(String),
    #[error("{0}")]
    NotPure(String),
}

/// Anything that can sit on a call stack.
pub trait StackItem: Clone + fmt::Debug + PartialEq {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

impl<X: Atom> StackItem for Expr<X> {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Operand(self))
    }
}

/// A call stack `a1 . a2 . ... . end` over a machine-specific terminator.
#[derive(Clone, Debug, PartialEq)]
pub enum CoTerm<A, T> {
    Push(A, Arc<CoTerm<A, T>>),
    End(T),
}

impl<A: StackItem, T: Clone + fmt::Debug + PartialEq> CoTerm<A, T> {
    pub fn push(arg: A, rest: CoTerm<A, T>) -> Self {
        CoTerm::Push(arg, Arc::new(rest))
    }

    /// Pushes `args` so that the first one ends up on top.
    pub fn from_args(args: Vec<A>, end: T) -> Self {
        args.into_iter().rev().fold(CoTerm::End(end), |rest, a| CoTerm::push(a, rest))
    }

    pub fn end(&self) -> &T {
        let mut e = self;
        loop {
            match e {
                CoTerm::Push(_, rest) => e = rest,
                CoTerm::End(t) => return t,
            }
        }
    }

    pub fn args(&self) -> Vec<&A> {
        let mut out = Vec::new();
        let mut e = self;
        while let CoTerm::Push(a, rest) = e {
            out.push(a);
            e = rest;
        }
        out
    }
}

impl<A: StackItem, T: fmt::Display> fmt::Display for CoTerm<A, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut e = self;
        loop {
            match e {
                CoTerm::Push(a, rest) => {
                    a.fmt_operand(f)?;
                    f.write_str(" . ")?;
                    e = rest;
                }
                CoTerm::End(t) => return write!(f, "{t}"),
            }
        }
    }
}

/// A machine state `<term || coterm>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Command<X, T> {
    pub term: Expr<X>,
    pub coterm: CoTerm<Expr<X>, T>,
}

impl<X: Atom, T: Clone + fmt::Debug + PartialEq> Command<X, T> {
    pub fn new(term: Expr<X>, coterm: CoTerm<Expr<X>, T>) -> Self {
        Command { term, coterm }
    }

    /// The two rules every substitution machine shares with the Krivine
    /// machine: push an argument, or contract a redex against the top of
    /// the stack. Returns `None` when neither applies.
    pub fn krivine_rules(&self) -> Option<(Rule, Self)> {
        match (&self.term, &self.coterm) {
            (Expr::App(f, a), e) => Some((
                PUSH,
                Command::new((**f).clone(), CoTerm::push((**a).clone(), e.clone())),
            )),
            (Expr::Lam(x, body), CoTerm::Push(arg, rest)) => {
                Some((BETA, Command::new(body.subst(x, arg), (**rest).clone())))
            }
            _ => None,
        }
    }

    /// `<v || v' . E> <-' <v v' || E>`, if the stack is non-empty.
    pub fn unpush(&self) -> Option<Self> {
        match &self.coterm {
            CoTerm::Push(a, rest) => Some(Command::new(
                Expr::app(self.term.clone(), a.clone()),
                (**rest).clone(),
            )),
            CoTerm::End(_) => None,
        }
    }
}

impl<X: Atom, T: fmt::Display> fmt::Display for Command<X, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} || {}>", self.term, self.coterm)
    }
}

/// The empty context `tp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Tp;

impl fmt::Display for Tp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("tp")
    }
}

/// Signals that a fueled evaluation ran out of beta budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("fuel exhausted after {beta} beta steps")]
pub struct FuelExhausted {
    pub beta: u64,
}

/// Beta budget for the recursive evaluators, with an optional log of the
/// `(redex, contractum)` pairs in the order they are contracted.
#[derive(Clone, Debug)]
pub struct Meter {
    pub limit: u64,
    pub beta: u64,
    pub log: Option<Vec<(Term, Term)>>,
    /// The most recent contractum.
    pub last: Option<Term>,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Meter { limit, beta: 0, log: None, last: None }
    }

    pub fn logging(limit: u64) -> Self {
        Meter { limit, beta: 0, log: Some(Vec::new()), last: None }
    }

    /// Charges one beta step. Must be called before contracting.
    pub fn charge(&mut self) -> Result<(), FuelExhausted> {
        if self.beta >= self.limit {
            return Err(FuelExhausted { beta: self.beta });
        }
        self.beta += 1;
        Ok(())
    }

    pub fn record(&mut self, redex: impl FnOnce() -> Term, contractum: &Term) {
        if let Some(log) = &mut self.log {
            log.push((redex(), contractum.clone()));
        }
        self.last = Some(contractum.clone());
    }
}
