//! Machines with environments: variables are bound to closures instead of
//! being substituted. One machine for weak-head reduction and one that
//! splits the empty context with coalesced projections.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::coalesced::{DropN, Pick, QCommand};
use crate::machine::{CoTerm, Command, Rule, StackItem, Step, Tp, PUSH};
use crate::syntax::{Expr, Name};
use crate::weak_head::KCommand;
use crate::{QTerm, Term};

/// `(v, sigma)`
#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub term: QTerm,
    pub env: Env,
}

#[derive(Debug, PartialEq)]
struct Frame {
    name: Name,
    value: Closure,
    next: Env,
}

/// `[] | (x -> t) :: sigma`, persistent with shared tails.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Env(Option<Arc<Frame>>);

impl Env {
    pub fn empty() -> Self {
        Env(None)
    }

    pub fn extend(&self, name: Name, value: Closure) -> Self {
        Env(Some(Arc::new(Frame { name, value, next: self.clone() })))
    }

    /// The most recent binding of `x`.
    pub fn lookup(&self, x: &Name) -> Option<&Closure> {
        let mut cur = &self.0;
        while let Some(frame) = cur {
            if &frame.name == x {
                return Some(&frame.value);
            }
            cur = &frame.next.0;
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = &self.0;
        while let Some(frame) = cur {
            n += 1;
            cur = &frame.next.0;
        }
        n
    }

    fn key(&self) -> usize {
        self.0.as_ref().map_or(0, |f| Arc::as_ptr(f) as usize)
    }
}

impl Drop for Frame {
    // Long environments are released iteratively.
    fn drop(&mut self) {
        let mut next = self.next.0.take();
        while let Some(frame) = next {
            match Arc::try_unwrap(frame) {
                Ok(mut f) => next = f.next.0.take(),
                Err(_) => break,
            }
        }
    }
}

impl Closure {
    pub fn new(term: QTerm, env: Env) -> Self {
        Closure { term, env }
    }

    /// Substitutes the environment into the term, recursively forcing the
    /// closures it binds.
    pub fn force(&self) -> QTerm {
        force_in(&self.term, &self.env, &mut HashMap::new())
    }
}

/// Forced values of `(x, env)` lookups, keyed by the environment frame that
/// binds `x`.
type Memo = HashMap<usize, QTerm>;

fn force_in(term: &QTerm, env: &Env, memo: &mut Memo) -> QTerm {
    if env.is_empty() {
        return term.clone();
    }
    let mut sigma = Vec::new();
    for x in term.free_vars() {
        if let Some((key, closure)) = binding(env, &x) {
            let value = match memo.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = force_in(&closure.term, &closure.env, memo);
                    memo.insert(key, v.clone());
                    v
                }
            };
            sigma.push((x, value));
        }
    }
    if sigma.is_empty() {
        term.clone()
    } else {
        term.subst_many(&sigma)
    }
}

fn binding<'a>(env: &'a Env, x: &Name) -> Option<(usize, &'a Closure)> {
    let mut cur = env;
    while let Some(frame) = &cur.0 {
        if &frame.name == x {
            return Some((cur.key(), &frame.value));
        }
        cur = &frame.next;
    }
    None
}

pub fn force(c: &Closure) -> QTerm {
    c.force()
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut cur = &self.0;
        let mut first = true;
        while let Some(frame) = cur {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{} := {}", frame.name, frame.value)?;
            cur = &frame.next.0;
        }
        f.write_str("]")
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.term, self.env)
    }
}

impl StackItem for Closure {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `<v || sigma || E>`
#[derive(Clone, Debug, PartialEq)]
pub struct ECommand<T> {
    pub term: QTerm,
    pub env: Env,
    pub coterm: CoTerm<Closure, T>,
}

pub type EKCommand = ECommand<Tp>;
pub type EHCommand = ECommand<DropN>;

impl<T: fmt::Display> fmt::Display for ECommand<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} || {} || {}>", self.term, self.env, self.coterm)
    }
}

/// `<\x.v || sigma || t . E> -> <v || (x -> t) :: sigma || E>`
pub const BIND: Rule = Rule::beta("bind");
/// `<x || sigma || E> -> <v || sigma' || E>` where `sigma(x) = (v, sigma')`
pub const LOOKUP: Rule = Rule::admin("lookup");
/// `<v || sigma || E> <-' <force (v, sigma) || E'>`, forcing the stack too.
pub const FORCE: &str = "force";

/// The outcome of one environment-machine transition.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvStep<C> {
    Next(Rule, C),
    Terminal,
    /// The term is a variable with no binding: the program was open.
    UnboundVariable(Name),
}

impl<C> EnvStep<C> {
    pub fn into_step(self) -> Step<C> {
        match self {
            EnvStep::Next(r, c) => Step::Next(r, c),
            EnvStep::Terminal | EnvStep::UnboundVariable(_) => Step::Terminal,
        }
    }
}

impl<T: Clone + fmt::Debug + PartialEq> ECommand<T> {
    pub fn load(t: &Term, end: T) -> Self {
        ECommand { term: t.widen(), env: Env::empty(), coterm: CoTerm::End(end) }
    }

    fn shared_rules(&self) -> Option<EnvStep<Self>> {
        match (&self.term, &self.coterm) {
            (Expr::App(f, a), e) => Some(EnvStep::Next(
                PUSH,
                ECommand {
                    term: (**f).clone(),
                    env: self.env.clone(),
                    coterm: CoTerm::push(Closure::new((**a).clone(), self.env.clone()), e.clone()),
                },
            )),
            (Expr::Lam(x, body), CoTerm::Push(arg, rest)) => Some(EnvStep::Next(
                BIND,
                ECommand {
                    term: (**body).clone(),
                    env: self.env.extend(x.clone(), arg.clone()),
                    coterm: (**rest).clone(),
                },
            )),
            (Expr::Var(x), e) => Some(match self.env.lookup(x) {
                Some(c) => EnvStep::Next(
                    LOOKUP,
                    ECommand { term: c.term.clone(), env: c.env.clone(), coterm: e.clone() },
                ),
                None => EnvStep::UnboundVariable(x.clone()),
            }),
            _ => None,
        }
    }

    /// Takes every lookup transition available in a row at once:
    /// `<x || sigma || E>` with `sigma(x) = (y, sigma')` continues through
    /// `y`. Returns how many transitions were taken.
    pub fn follow_lookups(&mut self) -> u64 {
        let mut taken = 0;
        let mut term = &self.term;
        let mut env = &self.env;
        while let Expr::Var(x) = term {
            match env.lookup(x) {
                Some(c) => {
                    taken += 1;
                    term = &c.term;
                    env = &c.env;
                }
                None => break,
            }
        }
        if taken > 0 {
            let (term, env) = (term.clone(), env.clone());
            self.term = term;
            self.env = env;
        }
        taken
    }

    fn forced_args(&self) -> Vec<QTerm> {
        self.coterm.args().into_iter().map(Closure::force).collect()
    }

    fn end(&self) -> T {
        self.coterm.end().clone()
    }
}

pub fn env_krivine_load(t: &Term) -> EKCommand {
    ECommand::load(t, Tp)
}

/// Push, bind and lookup; terminal on an abstraction facing `tp`.
pub fn env_krivine_step(c: &EKCommand) -> EnvStep<EKCommand> {
    c.shared_rules().unwrap_or(EnvStep::Terminal)
}

pub fn env_head_load(t: &Term) -> EHCommand {
    ECommand::load(t, DropN(0))
}

/// As [`env_krivine_step`], plus
/// `<\x.v || sigma || drop n tp> -> <v || (x -> (pick n tp, sigma)) :: sigma || drop (n+1) tp>`;
/// terminal on a projection.
pub fn env_head_step(c: &EHCommand) -> EnvStep<EHCommand> {
    if let Some(s) = c.shared_rules() {
        return s;
    }
    match (&c.term, &c.coterm) {
        (Expr::Lam(x, body), CoTerm::End(DropN(n))) => EnvStep::Next(
            crate::control::SPLIT,
            ECommand {
                term: (**body).clone(),
                env: c.env.extend(x.clone(), Closure::new(Expr::Atom(Pick(*n)), c.env.clone())),
                coterm: CoTerm::End(DropN(n + 1)),
            },
        ),
        _ => EnvStep::Terminal,
    }
}

/// Forces a terminal weak-head state into a substitution machine state.
pub fn env_krivine_force(c: &EKCommand) -> KCommand {
    let to_pure = |v: QTerm| crate::coalesced::pick_to_pure(&v).expect("no projections in weak-head states");
    let term = to_pure(Closure::new(c.term.clone(), c.env.clone()).force());
    let args = c.forced_args().into_iter().map(to_pure).collect();
    Command::new(term, CoTerm::from_args(args, c.end()))
}

/// Forces a terminal head state into a coalesced machine state.
pub fn env_head_force(c: &EHCommand) -> QCommand {
    let term = Closure::new(c.term.clone(), c.env.clone()).force();
    Command::new(term, CoTerm::from_args(c.forced_args(), c.end()))
}
