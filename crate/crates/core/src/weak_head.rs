//! Weak-head reduction three ways: the contextual small-step semantics, the
//! Krivine machine with its load and readback, and the big-step evaluator.

use std::sync::Arc;

use crate::machine::{Command, CoTerm, FuelExhausted, Meter, ReadbackError, Step, Tp, Unload, UNPUSH};
use crate::syntax::{Expr, NormalFormClass};
use crate::Term;

/// An evaluation context `E ::= [] | E v`, stored as the arguments applied to
/// the hole in application order: `plug(E, t) = t a1 ... an`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EvalContext {
    pub args: Vec<Arc<Term>>,
}

impl EvalContext {
    pub fn plug(&self, t: Term) -> Term {
        self.args.iter().fold(t, |f, a| Expr::App(Arc::new(f), Arc::clone(a)))
    }
}

/// A weak-head redex `(\x.v) v'` found in its context.
#[derive(Clone, Debug, PartialEq)]
pub struct Redex {
    pub context: EvalContext,
    pub fun: Term,
    pub arg: Term,
}

impl Redex {
    pub fn term(&self) -> Term {
        Term::app(self.fun.clone(), self.arg.clone())
    }

    pub fn contract(&self) -> Term {
        match &self.fun {
            Expr::Lam(x, body) => body.subst(x, &self.arg),
            _ => unreachable!("redex head is always an abstraction"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Redex(Redex),
    NoRedex(NormalFormClass),
}

/// Splits a term into a weak-head context and redex, if there is one.
pub fn decompose_wh(t: &Term) -> Decomposition {
    let (head, args) = t.spine();
    match (head, args.split_first()) {
        (Expr::Lam(..), Some((arg, rest))) => Decomposition::Redex(Redex {
            context: EvalContext { args: rest.iter().map(|a| Arc::clone(a)).collect() },
            fun: head.clone(),
            arg: (***arg).clone(),
        }),
        _ => Decomposition::NoRedex(t.classify()),
    }
}

/// One step of `E[(\x.v) v'] |-> E[v[v'/x]]`.
pub fn step_wh_os(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    match (head, args.split_first()) {
        (Expr::Lam(x, body), Some((arg, rest))) => {
            let contracted = body.subst_shared(x, arg);
            Some(rest.iter().fold(contracted, |f, a| Expr::App(Arc::new(f), Arc::clone(a))))
        }
        _ => None,
    }
}

/// [`step_wh_os`] in place; returns `false` when there is no redex.
pub fn step_wh_os_mut(t: &mut Term) -> bool {
    t.contract_spine_head()
}

pub type KCoTerm = CoTerm<Term, Tp>;
pub type KCommand = Command<crate::syntax::Pure, Tp>;

/// `v ~> <v || tp>`
pub fn krivine_load(t: &Term) -> KCommand {
    Command::new(t.clone(), CoTerm::End(Tp))
}

/// One Krivine transition. Terminal states are `<x || E>` and `<\x.v || tp>`.
pub fn krivine_step(c: &KCommand) -> Step<KCommand> {
    match c.krivine_rules() {
        Some((rule, next)) => Step::Next(rule, next),
        None => Step::Terminal,
    }
}

/// One readback step: `<v || v'.E> <-' <v v' || E>`, `<v || tp> <-' v`.
pub fn krivine_readback_step(c: &KCommand) -> Unload<KCommand> {
    match c.unpush() {
        Some(next) => Unload::Next(UNPUSH, next),
        None => Unload::Done(c.term.clone()),
    }
}

pub fn krivine_readback(c: &KCommand) -> Term {
    let args = c.coterm.args().into_iter().cloned();
    Term::apps(c.term.clone(), args)
}

/// Checks that `c` is terminal before reading it back.
pub fn krivine_result(c: &KCommand) -> Result<Term, ReadbackError> {
    match krivine_step(c) {
        Step::Terminal => Ok(krivine_readback(c)),
        _ => Err(ReadbackError::NotTerminal(c.to_string())),
    }
}

/// Big-step weak-head evaluation with a beta budget.
pub fn bigstep_wh(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    eval_wh(t, &mut Meter::new(fuel))
}

/// The four big-step rules: variables and abstractions evaluate to
/// themselves; an application evaluates its function and either contracts
/// the resulting abstraction or stops with the argument untouched.
pub fn eval_wh(t: &Term, meter: &mut Meter) -> Result<Term, FuelExhausted> {
    let mut current = t.clone();
    loop {
        let (fun, arg) = match &current {
            Expr::App(f, a) => (f.clone(), a.clone()),
            _ => return Ok(current),
        };
        let value = eval_wh(&fun, meter)?;
        match &value {
            Expr::Lam(x, body) => {
                meter.charge()?;
                let next = body.subst(x, &arg);
                meter.record(|| Term::App(Arc::new(value.clone()), arg.clone()), &next);
                current = next;
            }
            _ => return Ok(Expr::App(Arc::new(value), arg)),
        }
    }
}
