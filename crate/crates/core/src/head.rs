//! Head reduction with named binders: the contextual small-step semantics,
//! the machine that records the binders it descends under in `Abs` frames,
//! and two big-step evaluators.

use std::fmt;
use std::sync::Arc;

use crate::machine::{Command, CoTerm, FuelExhausted, Meter, ReadbackError, Rule, Step, Unload, UNPUSH};
use crate::syntax::{Expr, Name, Pure};
use crate::weak_head::{eval_wh, EvalContext};
use crate::Term;

/// A term split as `\x1...xn.E[r]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HTopDecomp {
    pub binders: Vec<Name>,
    pub spine: EvalContext,
    /// The head redex `(\x.v) v'`, or the neutral head when there is none.
    pub focus: Term,
}

impl HTopDecomp {
    pub fn plug(&self) -> Term {
        let inner = self.spine.plug(self.focus.clone());
        self.binders.iter().rev().fold(inner, |b, x| Term::lam(x.clone(), b))
    }

    pub fn has_redex(&self) -> bool {
        matches!(&self.focus, Expr::App(f, _) if f.is_lam())
    }
}

/// Splits off the binder prefix and the head redex, if any.
pub fn decompose_head(t: &Term) -> HTopDecomp {
    let mut binders = Vec::new();
    let mut body = t;
    while let Expr::Lam(x, b) = body {
        binders.push(x.clone());
        body = b;
    }
    let (head, args) = body.spine();
    match (head, args.split_first()) {
        (Expr::Lam(..), Some((arg, rest))) => HTopDecomp {
            binders,
            spine: EvalContext { args: rest.iter().map(|a| Arc::clone(a)).collect() },
            focus: Term::App(Arc::new(head.clone()), (*arg).clone()),
        },
        _ => HTopDecomp {
            binders,
            spine: EvalContext { args: args.iter().map(|a| Arc::clone(a)).collect() },
            focus: head.clone(),
        },
    }
}

/// `S[(\x.v) v'] |-> S[v[v'/x]]` at the head redex; `None` on a head
/// normal form.
pub fn step_head_os(t: &Term) -> Option<Term> {
    let mut d = decompose_head(t);
    match &d.focus {
        Expr::App(f, a) => match &**f {
            Expr::Lam(x, body) => {
                d.focus = body.subst_shared(x, a);
                Some(d.plug())
            }
            _ => None,
        },
        _ => None,
    }
}

/// [`step_head_os`] in place; returns `false` on a head normal form.
pub fn step_head_os_mut(t: &mut Term) -> bool {
    let mut body = t;
    while let Expr::Lam(_, b) = body {
        body = Arc::make_mut(b);
    }
    body.contract_spine_head()
}

/// `S ::= tp | Abs(x, S)`, persistent with shared tails.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbsStack(Option<Arc<AbsFrame>>);

#[derive(Debug, PartialEq, Eq)]
struct AbsFrame {
    name: Name,
    rest: AbsStack,
}

impl AbsStack {
    pub fn tp() -> Self {
        AbsStack(None)
    }

    /// `Abs(x, self)`
    pub fn abs(&self, x: Name) -> Self {
        AbsStack(Some(Arc::new(AbsFrame { name: x, rest: self.clone() })))
    }

    /// Builds a stack from its binders, innermost first.
    pub fn from_names(names: impl IntoIterator<Item = Name>) -> Self {
        let names: Vec<Name> = names.into_iter().collect();
        names.into_iter().rev().fold(AbsStack::tp(), |s, x| s.abs(x))
    }

    /// The innermost frame and the stack under it.
    pub fn pop(&self) -> Option<(&Name, &AbsStack)> {
        self.0.as_ref().map(|f| (&f.name, &f.rest))
    }

    /// Binders, innermost first.
    pub fn names(&self) -> impl Iterator<Item = &Name> {
        std::iter::successors(self.pop(), |(_, rest)| rest.pop()).map(|(x, _)| x)
    }

    pub fn len(&self) -> usize {
        self.names().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }
}

impl Drop for AbsStack {
    // Deep stacks are released iteratively.
    fn drop(&mut self) {
        let mut next = self.0.take();
        while let Some(frame) = next {
            match Arc::try_unwrap(frame) {
                Ok(mut f) => next = f.rest.0.take(),
                Err(_) => break,
            }
        }
    }
}

impl fmt::Display for AbsStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.names() {
            write!(f, "Abs({x}, ")?;
        }
        f.write_str("tp")?;
        for _ in self.names() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub type HCoTerm = CoTerm<Term, AbsStack>;
pub type HCommand = Command<Pure, AbsStack>;

/// `<\x.v || S> -> <v || Abs(x, S)>`
pub const ABS: Rule = Rule::admin("abs");
/// `<v || Abs(x, S)> <-' <\x.v || S>`
pub const UNABS: &str = "unabs";

pub fn abs_load(t: &Term) -> HCommand {
    Command::new(t.clone(), CoTerm::End(AbsStack::default()))
}

pub fn abs_machine_step(c: &HCommand) -> Step<HCommand> {
    if let Some((rule, next)) = c.krivine_rules() {
        return Step::Next(rule, next);
    }
    match (&c.term, &c.coterm) {
        (Expr::Lam(x, body), CoTerm::End(s)) => {
            Step::Next(ABS, Command::new((**body).clone(), CoTerm::End(s.abs(x.clone()))))
        }
        _ => Step::Terminal,
    }
}

/// The binder stored in an `Abs` frame is reused as is: it is still the
/// name the body refers to.
pub fn abs_readback_step(c: &HCommand) -> Unload<HCommand> {
    if let Some(next) = c.unpush() {
        return Unload::Next(UNPUSH, next);
    }
    match c.coterm.end().pop() {
        None => Unload::Done(c.term.clone()),
        Some((x, rest)) => Unload::Next(
            UNABS,
            Command::new(Term::lam(x.clone(), c.term.clone()), CoTerm::End(rest.clone())),
        ),
    }
}

pub fn abs_readback(c: &HCommand) -> Term {
    let mut cur = c.clone();
    loop {
        match abs_readback_step(&cur) {
            Unload::Next(_, next) => cur = next,
            Unload::Done(t) => return t,
        }
    }
}

/// Checks that `c` is terminal before reading it back.
pub fn abs_result(c: &HCommand) -> Result<Term, ReadbackError> {
    match abs_machine_step(c) {
        Step::Terminal => Ok(abs_readback(c)),
        _ => Err(ReadbackError::NotTerminal(c.to_string())),
    }
}

pub fn bigstep_h(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    eval_h(t, &mut Meter::new(fuel))
}

/// Weak-head evaluation, then head evaluation under the resulting
/// abstraction, if any.
pub fn eval_h(t: &Term, meter: &mut Meter) -> Result<Term, FuelExhausted> {
    let mut binders = Vec::new();
    let mut current = t.clone();
    let result = loop {
        match eval_wh(&current, meter)? {
            Expr::Lam(x, body) => {
                binders.push(x);
                current = (*body).clone();
            }
            other => break other,
        }
    };
    Ok(binders.into_iter().rev().fold(result, |b, x| Term::lam(x, b)))
}

pub fn bigstep_sestoft(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    eval_sestoft(t, &mut Meter::new(fuel))
}

/// `x` is a value; `\x.v` evaluates its body; an application weak-head
/// evaluates its function, then either continues with the contractum or
/// stops at a neutral term.
pub fn eval_sestoft(t: &Term, meter: &mut Meter) -> Result<Term, FuelExhausted> {
    let mut binders: Vec<Name> = Vec::new();
    let mut current = t.clone();
    let result = loop {
        match current {
            Expr::Var(_) => break current,
            Expr::Lam(x, body) => {
                binders.push(x);
                current = (*body).clone();
            }
            Expr::App(f, a) => {
                let fun = eval_wh(&f, meter)?;
                match &fun {
                    Expr::Lam(x, body) => {
                        meter.charge()?;
                        let next = body.subst(x, &a);
                        meter.record(|| Term::App(Arc::new(fun.clone()), a.clone()), &next);
                        current = next;
                    }
                    _ => break Term::App(Arc::new(fun), a),
                }
            }
            Expr::Atom(a) => match a {},
        }
    };
    Ok(binders.into_iter().rev().fold(result, |b, x| Term::lam(x, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{BETA, PUSH};
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    /// Searches every binder-prefix/spine split for the Barendregt shape
    /// `\x1...xn.(\x.M0) M1 ... Mm`.
    fn brute_head_redex(t: &Term) -> Option<(usize, usize)> {
        let mut body = t;
        let mut n = 0;
        loop {
            let mut cur = body;
            let mut m = 0;
            while let Expr::App(f, _) = cur {
                m += 1;
                cur = f;
            }
            if cur.is_lam() && m > 0 {
                return Some((n, m - 1));
            }
            match body {
                Expr::Lam(_, b) if m == 0 => {
                    body = b;
                    n += 1;
                }
                _ => return None,
            }
        }
    }

    #[test]
    fn small_step_examples() {
        assert_eq!(step_head_os(&t("\\x.(\\y.y) x")), Some(t("\\x.x")));
        let u = t("\\x1.(\\x.x) y z");
        assert_eq!(brute_head_redex(&u), Some((1, 1)));
        let d = decompose_head(&u);
        assert_eq!(d.binders.len(), 1);
        assert_eq!(d.spine.args.len(), 1);
        assert_eq!(d.plug(), u);
        assert_eq!(step_head_os(&u), Some(t("\\x1.y z")));
        let nf = t("\\x.x (\\y.(\\z.z) w)");
        assert_eq!(brute_head_redex(&nf), None);
        assert_eq!(step_head_os(&nf), None);
    }

    #[test]
    fn abs_machine_examples() {
        let c0 = abs_load(&t("\\x.(\\y.y) x"));
        let Step::Next(r, c1) = abs_machine_step(&c0) else { panic!() };
        assert_eq!(r, ABS);
        assert_eq!(c1.to_string(), "<(\\y.y) x || Abs(x, tp)>");
        let Step::Next(r, c2) = abs_machine_step(&c1) else { panic!() };
        assert_eq!(r, PUSH);
        assert_eq!(c2.to_string(), "<\\y.y || x . Abs(x, tp)>");
        let Step::Next(r, c3) = abs_machine_step(&c2) else { panic!() };
        assert_eq!(r, BETA);
        assert_eq!(c3.to_string(), "<x || Abs(x, tp)>");
        assert_eq!(abs_machine_step(&c3), Step::Terminal);
        assert_eq!(abs_result(&c3), Ok(t("\\x.x")));
    }

    #[test]
    fn abs_readback_examples() {
        let s = AbsStack::from_names([Name::from("x")]);
        let c = Command::new(t("x"), CoTerm::from_args(vec![t("y")], s));
        assert_eq!(abs_readback(&c), t("\\x.x y"));
        assert_eq!(abs_readback(&abs_load(&t("f a"))), t("f a"));
    }

    #[test]
    fn bigstep_examples() {
        assert_eq!(bigstep_h(&t("\\x.(\\y.y) x"), 10), Ok(t("\\x.x")));
        assert_eq!(bigstep_h(&t("x"), 10), Ok(t("x")));
        assert_eq!(bigstep_h(&t("\\a.\\b.(\\c.c) b"), 10), Ok(t("\\a.\\b.b")));
        assert_eq!(bigstep_sestoft(&t("x"), 10), Ok(t("x")));
        assert_eq!(bigstep_sestoft(&t("\\x.(\\y.y) x"), 10), Ok(t("\\x.x")));
        assert_eq!(bigstep_sestoft(&t("(\\x.x)(\\y.(\\z.z) y)"), 10), Ok(t("\\y.y")));
        assert!(bigstep_h(&t("\\x.(\\y.y y)(\\y.y y) x"), 100).is_err());
        assert!(bigstep_sestoft(&t("\\x.(\\y.y y)(\\y.y y) x"), 100).is_err());
    }

    #[test]
    fn redex_logs_match() {
        let term = t("(\\f.\\x.f (f x)) (\\y.(\\z.z) y)");
        let mut a = Meter::logging(100);
        let mut b = Meter::logging(100);
        let ra = eval_h(&term, &mut a).unwrap();
        let rb = eval_sestoft(&term, &mut b).unwrap();
        assert_eq!(ra, rb);
        assert_eq!(a.log, b.log);
        assert_eq!(a.beta, 5);
    }
}
