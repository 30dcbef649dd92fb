//! The lambda calculus with control: terms that name (`mu`) or
//! pattern-match (`case`) their calling context, run on a Krivine machine
//! with co-terms, and the refinement that splits a stuck call stack with
//! `car`/`cdr` projections instead of blocking on it.
//!
//! An abstraction `\x.v` is the pattern match `case[(x . k).<v || k>]`;
//! [`embed`] and [`to_pure`] convert between the two views.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::machine::{ReadbackError, Rule, Unload, BETA, PUSH, UNPUSH};
use crate::syntax::{fresh, Expr, Name};
use crate::Term;

/// `cdr^depth(tp)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CStuck(pub usize);

impl CStuck {
    pub const TOP: CStuck = CStuck(0);

    pub fn cdr(self) -> CStuck {
        CStuck(self.0 + 1)
    }
}

impl fmt::Display for CStuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.0 {
            f.write_str("cdr(")?;
        }
        f.write_str("tp")?;
        for _ in 0..self.0 {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CTerm {
    Var(Name),
    App(Arc<CTerm>, Arc<CTerm>),
    /// `mu k.c`
    Mu(Name, Arc<CCommand>),
    /// `case[(x . k).c]`
    Case(Name, Name, Arc<CCommand>),
    /// `car(S)`; only produced by the projection machine.
    Car(CStuck),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CCoTerm {
    CoVar(Name),
    Push(Arc<CTerm>, Arc<CCoTerm>),
    Stuck(CStuck),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CCommand {
    pub term: CTerm,
    pub coterm: CCoTerm,
}

impl CTerm {
    pub fn var(x: impl Into<Name>) -> Self {
        CTerm::Var(x.into())
    }

    pub fn app(f: CTerm, a: CTerm) -> Self {
        CTerm::App(Arc::new(f), Arc::new(a))
    }

    pub fn mu(k: impl Into<Name>, c: CCommand) -> Self {
        CTerm::Mu(k.into(), Arc::new(c))
    }

    pub fn case(x: impl Into<Name>, k: impl Into<Name>, c: CCommand) -> Self {
        CTerm::Case(x.into(), k.into(), Arc::new(c))
    }

    /// `\x.v` as `case[(x . k).<v || k>]`.
    pub fn lam(x: impl Into<Name>, body: CTerm) -> Self {
        let k = fresh(&body.free_covars(), &Name::from("k"));
        CTerm::case(x, k.clone(), CCommand::new(body, CCoTerm::CoVar(k)))
    }
}

impl CCoTerm {
    pub fn push(a: CTerm, rest: CCoTerm) -> Self {
        CCoTerm::Push(Arc::new(a), Arc::new(rest))
    }

    pub fn covar(k: impl Into<Name>) -> Self {
        CCoTerm::CoVar(k.into())
    }

    /// The stuck co-term ending the stack, if it does not end in a co-variable.
    pub fn stuck_end(&self) -> Option<CStuck> {
        let mut e = self;
        loop {
            match e {
                CCoTerm::Push(_, rest) => e = rest,
                CCoTerm::Stuck(s) => return Some(*s),
                CCoTerm::CoVar(_) => return None,
            }
        }
    }
}

impl CCommand {
    pub fn new(term: CTerm, coterm: CCoTerm) -> Self {
        CCommand { term, coterm }
    }
}

// ---------------------------------------------------------------------------
// Free variables and substitution
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Free {
    vars: BTreeSet<Name>,
    covars: BTreeSet<Name>,
}

trait Syntax {
    fn collect(&self, bv: &mut Vec<Name>, bk: &mut Vec<Name>, out: &mut Free);
    fn collect_names(&self, out: &mut BTreeSet<Name>);
}

impl Syntax for CTerm {
    fn collect(&self, bv: &mut Vec<Name>, bk: &mut Vec<Name>, out: &mut Free) {
        match self {
            CTerm::Var(x) => {
                if !bv.contains(x) {
                    out.vars.insert(x.clone());
                }
            }
            CTerm::App(f, a) => {
                f.collect(bv, bk, out);
                a.collect(bv, bk, out);
            }
            CTerm::Mu(k, c) => {
                bk.push(k.clone());
                c.collect(bv, bk, out);
                bk.pop();
            }
            CTerm::Case(x, k, c) => {
                bv.push(x.clone());
                bk.push(k.clone());
                c.collect(bv, bk, out);
                bk.pop();
                bv.pop();
            }
            CTerm::Car(_) => {}
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            CTerm::Var(x) => {
                out.insert(x.clone());
            }
            CTerm::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            CTerm::Mu(_, c) => c.collect_names(out),
            CTerm::Case(x, _, c) => {
                out.insert(x.clone());
                c.collect_names(out);
            }
            CTerm::Car(_) => {}
        }
    }
}

impl Syntax for CCoTerm {
    fn collect(&self, bv: &mut Vec<Name>, bk: &mut Vec<Name>, out: &mut Free) {
        match self {
            CCoTerm::CoVar(k) => {
                if !bk.contains(k) {
                    out.covars.insert(k.clone());
                }
            }
            CCoTerm::Push(a, rest) => {
                a.collect(bv, bk, out);
                rest.collect(bv, bk, out);
            }
            CCoTerm::Stuck(_) => {}
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        if let CCoTerm::Push(a, rest) = self {
            a.collect_names(out);
            rest.collect_names(out);
        }
    }
}

impl Syntax for CCommand {
    fn collect(&self, bv: &mut Vec<Name>, bk: &mut Vec<Name>, out: &mut Free) {
        self.term.collect(bv, bk, out);
        self.coterm.collect(bv, bk, out);
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        self.term.collect_names(out);
        self.coterm.collect_names(out);
    }
}

fn free_of(s: &impl Syntax) -> Free {
    let mut out = Free::default();
    s.collect(&mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

impl CTerm {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        free_of(self).vars
    }

    pub fn free_covars(&self) -> BTreeSet<Name> {
        free_of(self).covars
    }
}

impl CCommand {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        free_of(self).vars
    }

    pub fn free_covars(&self) -> BTreeSet<Name> {
        free_of(self).covars
    }

    /// Simultaneous capture-avoiding substitution of terms for variables and
    /// co-terms for co-variables.
    pub fn subst(&self, vars: &[(Name, CTerm)], covars: &[(Name, CCoTerm)]) -> CCommand {
        Sigma { vars: vars.to_vec(), covars: covars.to_vec() }.command(self)
    }
}

struct Sigma {
    vars: Vec<(Name, CTerm)>,
    covars: Vec<(Name, CCoTerm)>,
}

impl Sigma {
    /// Names free in the substituted terms and co-terms.
    fn range(&self) -> Free {
        let mut range = Free::default();
        for (_, t) in &self.vars {
            let f = free_of(t);
            range.vars.extend(f.vars);
            range.covars.extend(f.covars);
        }
        for (_, e) in &self.covars {
            let f = free_of(e);
            range.vars.extend(f.vars);
            range.covars.extend(f.covars);
        }
        range
    }

    fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.covars.is_empty()
    }

    /// The substitution to apply under a binder for `x` (term) and `k`
    /// (co-term); binders that would capture are renamed.
    fn under(&self, x: Option<&Name>, k: Option<&Name>, body: &CCommand) -> (Sigma, Option<Name>, Option<Name>) {
        let free = free_of(body);
        let vars: Vec<_> = self
            .vars
            .iter()
            .filter(|(y, _)| Some(y) != x && free.vars.contains(y))
            .cloned()
            .collect();
        let covars: Vec<_> = self
            .covars
            .iter()
            .filter(|(j, _)| Some(j) != k && free.covars.contains(j))
            .cloned()
            .collect();
        let mut inner = Sigma { vars, covars };
        if inner.is_empty() {
            return (inner, x.cloned(), k.cloned());
        }
        let range = inner.range();
        let mut new_x = x.cloned();
        if let Some(x) = x {
            if range.vars.contains(x) {
                let mut avoid = free.vars.clone();
                avoid.extend(range.vars.iter().cloned());
                avoid.extend(inner.vars.iter().map(|(y, _)| y.clone()));
                let z = fresh(&avoid, x);
                inner.vars.push((x.clone(), CTerm::Var(z.clone())));
                new_x = Some(z);
            }
        }
        let mut new_k = k.cloned();
        if let Some(k) = k {
            if range.covars.contains(k) {
                let mut avoid = free.covars.clone();
                avoid.extend(range.covars.iter().cloned());
                avoid.extend(inner.covars.iter().map(|(j, _)| j.clone()));
                let z = fresh(&avoid, k);
                inner.covars.push((k.clone(), CCoTerm::CoVar(z.clone())));
                new_k = Some(z);
            }
        }
        (inner, new_x, new_k)
    }

    fn term(&self, t: &CTerm) -> CTerm {
        match t {
            CTerm::Var(y) => self
                .vars
                .iter()
                .find(|(x, _)| x == y)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| t.clone()),
            CTerm::App(f, a) => CTerm::App(Arc::new(self.term(f)), Arc::new(self.term(a))),
            CTerm::Mu(k, c) => {
                let (inner, _, k2) = self.under(None, Some(k), c);
                if inner.is_empty() {
                    return t.clone();
                }
                CTerm::Mu(k2.unwrap(), Arc::new(inner.command(c)))
            }
            CTerm::Case(x, k, c) => {
                let (inner, x2, k2) = self.under(Some(x), Some(k), c);
                if inner.is_empty() {
                    return t.clone();
                }
                CTerm::Case(x2.unwrap(), k2.unwrap(), Arc::new(inner.command(c)))
            }
            CTerm::Car(_) => t.clone(),
        }
    }

    fn coterm(&self, e: &CCoTerm) -> CCoTerm {
        match e {
            CCoTerm::CoVar(k) => self
                .covars
                .iter()
                .find(|(j, _)| j == k)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| e.clone()),
            CCoTerm::Push(a, rest) => CCoTerm::Push(Arc::new(self.term(a)), Arc::new(self.coterm(rest))),
            CCoTerm::Stuck(_) => e.clone(),
        }
    }

    fn command(&self, c: &CCommand) -> CCommand {
        CCommand::new(self.term(&c.term), self.coterm(&c.coterm))
    }
}

// ---------------------------------------------------------------------------
// Embedding of pure terms
// ---------------------------------------------------------------------------

pub fn embed(t: &Term) -> CTerm {
    match t {
        Expr::Var(x) => CTerm::Var(x.clone()),
        Expr::App(f, a) => CTerm::app(embed(f), embed(a)),
        Expr::Lam(x, b) => CTerm::lam(x.clone(), embed(b)),
        Expr::Atom(a) => match *a {},
    }
}

/// Reads a control term back as a pure term. Only the image of [`embed`]
/// converts; anything using `mu`, a non-embedding `case`, or projections
/// is rejected.
pub fn to_pure(t: &CTerm) -> Result<Term, ReadbackError> {
    match t {
        CTerm::Var(x) => Ok(Term::Var(x.clone())),
        CTerm::App(f, a) => Ok(Term::app(to_pure(f)?, to_pure(a)?)),
        CTerm::Case(x, k, c) => match &c.coterm {
            CCoTerm::CoVar(j) if j == k && !c.term.free_covars().contains(k) => {
                Ok(Term::lam(x.clone(), to_pure(&c.term)?))
            }
            _ => Err(ReadbackError::NotPure(format!("`{t}` is not an abstraction"))),
        },
        CTerm::Mu(..) => Err(ReadbackError::NotPure(format!("`{t}` captures its context"))),
        CTerm::Car(s) => Err(ReadbackError::IllegalState(format!("car({s})"))),
    }
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

/// `<mu k.c || E> -> c[E/k]`
pub const MU: Rule = Rule::admin("mu");
/// `<case[(x . k).c] || S> -> c[car S/x, cdr S/k]`
pub const SPLIT: Rule = Rule::admin("split");
/// `<v || cdr S> <-' <\x.v[x/car S] || S>`
pub const UNSPLIT: &str = "unsplit";

/// What blocked a `case` that found no argument on the stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocked {
    CoVar(Name),
    /// The top-level context. Only the machine without projections blocks
    /// here; for embedded abstractions this is the usual weak-head answer.
    Top,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ControlStep {
    Next(Rule, CCommand),
    /// `<x || E>` or `<car S || E>`.
    Terminal,
    StuckOnCoVar(Blocked),
}

pub fn control_load(t: &Term) -> CCommand {
    CCommand::new(embed(t), CCoTerm::Stuck(CStuck::TOP))
}

fn shared_rules(c: &CCommand) -> Option<ControlStep> {
    match (&c.term, &c.coterm) {
        (CTerm::App(f, a), e) => Some(ControlStep::Next(
            PUSH,
            CCommand::new((**f).clone(), CCoTerm::Push(a.clone(), Arc::new(e.clone()))),
        )),
        (CTerm::Mu(k, body), e) => Some(ControlStep::Next(MU, body.subst(&[], &[(k.clone(), e.clone())]))),
        (CTerm::Case(x, k, body), CCoTerm::Push(a, rest)) => Some(ControlStep::Next(
            BETA,
            body.subst(&[(x.clone(), (**a).clone())], &[(k.clone(), (**rest).clone())]),
        )),
        (CTerm::Case(_, _, _), CCoTerm::CoVar(k)) => Some(ControlStep::StuckOnCoVar(Blocked::CoVar(k.clone()))),
        (CTerm::Var(_) | CTerm::Car(_), _) => Some(ControlStep::Terminal),
        (CTerm::Case(..), CCoTerm::Stuck(_)) => None,
    }
}

/// Krivine machine with control: push, `mu`, and `case` against a pushed
/// argument.
pub fn control_step(c: &CCommand) -> ControlStep {
    shared_rules(c).unwrap_or(ControlStep::StuckOnCoVar(Blocked::Top))
}

/// As [`control_step`], plus splitting a stuck co-term with projections.
pub fn control_proj_step(c: &CCommand) -> ControlStep {
    shared_rules(c).unwrap_or_else(|| match (&c.term, &c.coterm) {
        (CTerm::Case(x, k, body), CCoTerm::Stuck(s)) => ControlStep::Next(
            SPLIT,
            body.subst(&[(x.clone(), CTerm::Car(*s))], &[(k.clone(), CCoTerm::Stuck(s.cdr()))]),
        ),
        _ => unreachable!("shared rules cover every other shape"),
    })
}

/// Legality of a command with respect to the stuck co-term ending its stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legality {
    Legal,
    Illegal,
    /// The stack ends in a co-variable; legality is only defined for
    /// commands ending in a stuck co-term.
    NotApplicable,
}

impl Legality {
    pub fn is_legal(self) -> bool {
        self == Legality::Legal
    }
}

fn max_car_term(t: &CTerm) -> Option<usize> {
    match t {
        CTerm::Var(_) => None,
        CTerm::App(f, a) => max_car_term(f).max(max_car_term(a)),
        CTerm::Mu(_, c) | CTerm::Case(_, _, c) => max_car_command(c),
        CTerm::Car(s) => Some(s.0),
    }
}

fn max_car_coterm(e: &CCoTerm) -> Option<usize> {
    match e {
        CCoTerm::Push(a, rest) => max_car_term(a).max(max_car_coterm(rest)),
        _ => None,
    }
}

fn max_car_command(c: &CCommand) -> Option<usize> {
    max_car_term(&c.term).max(max_car_coterm(&c.coterm))
}

/// `<v1 || v2 ... vn . S>` is legal iff every `car S'` occurring in any `vi`
/// has `S' < S`.
pub fn is_legal_command(c: &CCommand) -> Legality {
    match c.coterm.stuck_end() {
        None => Legality::NotApplicable,
        Some(s) => match max_car_command(c) {
            Some(d) if d >= s.0 => Legality::Illegal,
            _ => Legality::Legal,
        },
    }
}

fn replace_car_term(t: &CTerm, depth: usize, x: &Name) -> CTerm {
    match t {
        CTerm::Car(s) if s.0 == depth => CTerm::Var(x.clone()),
        CTerm::Var(_) | CTerm::Car(_) => t.clone(),
        CTerm::App(f, a) => CTerm::app(replace_car_term(f, depth, x), replace_car_term(a, depth, x)),
        CTerm::Mu(k, c) => CTerm::Mu(k.clone(), Arc::new(replace_car_command(c, depth, x))),
        CTerm::Case(y, k, c) => CTerm::Case(y.clone(), k.clone(), Arc::new(replace_car_command(c, depth, x))),
    }
}

fn replace_car_command(c: &CCommand, depth: usize, x: &Name) -> CCommand {
    CCommand::new(replace_car_term(&c.term, depth, x), replace_car_coterm(&c.coterm, depth, x))
}

fn replace_car_coterm(e: &CCoTerm, depth: usize, x: &Name) -> CCoTerm {
    match e {
        CCoTerm::Push(a, rest) => CCoTerm::push(replace_car_term(a, depth, x), replace_car_coterm(rest, depth, x)),
        _ => e.clone(),
    }
}

/// One readback step for either control machine.
pub fn control_readback_step(c: &CCommand) -> Result<Unload<CCommand>, ReadbackError> {
    match &c.coterm {
        CCoTerm::Push(a, rest) => Ok(Unload::Next(
            UNPUSH,
            CCommand::new(CTerm::App(Arc::new(c.term.clone()), a.clone()), (**rest).clone()),
        )),
        CCoTerm::Stuck(CStuck(0)) => Ok(Unload::Done(to_pure(&c.term)?)),
        CCoTerm::Stuck(CStuck(n)) => {
            let below = CStuck(n - 1);
            let mut names = BTreeSet::new();
            c.term.collect_names(&mut names);
            let x = fresh(&names, &Name::from("x"));
            let body = replace_car_term(&c.term, below.0, &x);
            Ok(Unload::Next(UNSPLIT, CCommand::new(CTerm::lam(x, body), CCoTerm::Stuck(below))))
        }
        CCoTerm::CoVar(k) => Err(ReadbackError::NotPure(format!("open co-variable {k}"))),
    }
}

pub fn control_readback(c: &CCommand) -> Result<Term, ReadbackError> {
    let mut cur = c.clone();
    loop {
        match control_readback_step(&cur)? {
            Unload::Next(_, next) => cur = next,
            Unload::Done(t) => return Ok(t),
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Top,
    Head,
    Operand,
}

fn write_cterm(t: &CTerm, pos: Pos, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CTerm::Var(x) => write!(f, "{x}"),
        CTerm::Car(s) => write!(f, "car({s})"),
        CTerm::App(g, a) => {
            if pos == Pos::Operand {
                f.write_str("(")?;
            }
            write_cterm(g, Pos::Head, f)?;
            f.write_str(" ")?;
            write_cterm(a, Pos::Operand, f)?;
            if pos == Pos::Operand {
                f.write_str(")")?;
            }
            Ok(())
        }
        CTerm::Mu(k, c) => {
            if pos == Pos::Top {
                write!(f, "mu {k}.{c}")
            } else {
                write!(f, "(mu {k}.{c})")
            }
        }
        CTerm::Case(x, k, c) => write!(f, "case[({x} . {k}).{c}]"),
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cterm(self, Pos::Top, f)
    }
}

impl fmt::Display for CCoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CCoTerm::CoVar(k) => write!(f, "{k}"),
            CCoTerm::Push(a, rest) => {
                write_cterm(a, Pos::Operand, f)?;
                write!(f, " . {rest}")
            }
            CCoTerm::Stuck(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for CCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} || {}>", self.term, self.coterm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn v(x: &str) -> CTerm {
        CTerm::var(x)
    }

    fn cmd(t: CTerm, e: CCoTerm) -> CCommand {
        CCommand::new(t, e)
    }

    fn tp() -> CCoTerm {
        CCoTerm::Stuck(CStuck::TOP)
    }

    fn stuck(n: usize) -> CCoTerm {
        CCoTerm::Stuck(CStuck(n))
    }

    #[test]
    fn mu_captures_context() {
        let c = cmd(CTerm::mu("a", cmd(v("x"), CCoTerm::covar("a"))), CCoTerm::push(v("y"), tp()));
        assert_eq!(control_step(&c), ControlStep::Next(MU, cmd(v("x"), CCoTerm::push(v("y"), tp()))));
    }

    #[test]
    fn case_matches_call_stack() {
        let id = CTerm::case("x", "a", cmd(v("x"), CCoTerm::covar("a")));
        let c = cmd(id.clone(), CCoTerm::push(v("y"), tp()));
        assert_eq!(control_step(&c), ControlStep::Next(BETA, cmd(v("y"), tp())));
        assert_eq!(control_proj_step(&c), ControlStep::Next(BETA, cmd(v("y"), tp())));
    }

    #[test]
    fn case_against_covariable_is_stuck() {
        let c = cmd(CTerm::case("x", "b", cmd(v("x"), CCoTerm::covar("b"))), CCoTerm::covar("a"));
        assert_eq!(control_step(&c), ControlStep::StuckOnCoVar(Blocked::CoVar("a".into())));
        assert_eq!(control_proj_step(&c), ControlStep::StuckOnCoVar(Blocked::CoVar("a".into())));
        let top = cmd(CTerm::case("x", "b", cmd(v("x"), CCoTerm::covar("b"))), tp());
        assert_eq!(control_step(&top), ControlStep::StuckOnCoVar(Blocked::Top));
    }

    #[test]
    fn projection_split_rule() {
        let id = CTerm::case("x", "a", cmd(v("x"), CCoTerm::covar("a")));
        assert_eq!(
            control_proj_step(&cmd(id, tp())),
            ControlStep::Next(SPLIT, cmd(CTerm::Car(CStuck::TOP), stuck(1)))
        );
        // eta-expanded v splits the stuck context into car S . cdr S
        let eta = CTerm::case("x", "a", cmd(v("v"), CCoTerm::push(v("x"), CCoTerm::covar("a"))));
        let s = CStuck(2);
        assert_eq!(
            control_proj_step(&cmd(eta.clone(), CCoTerm::Stuck(s))),
            ControlStep::Next(SPLIT, cmd(v("v"), CCoTerm::push(CTerm::Car(s), CCoTerm::Stuck(s.cdr()))))
        );
        assert_eq!(
            control_proj_step(&cmd(eta, CCoTerm::push(v("w"), tp()))),
            ControlStep::Next(BETA, cmd(v("v"), CCoTerm::push(v("w"), tp())))
        );
    }

    #[test]
    fn terminal_shapes() {
        assert_eq!(control_proj_step(&cmd(v("x"), tp())), ControlStep::Terminal);
        assert_eq!(control_proj_step(&cmd(CTerm::Car(CStuck(0)), stuck(1))), ControlStep::Terminal);
    }

    #[test]
    fn legality_examples() {
        assert_eq!(is_legal_command(&cmd(CTerm::Car(CStuck(0)), stuck(1))), Legality::Legal);
        assert_eq!(is_legal_command(&cmd(CTerm::Car(CStuck(0)), tp())), Legality::Illegal);
        let c = cmd(v("x"), CCoTerm::push(CTerm::Car(CStuck(1)), stuck(2)));
        assert_eq!(is_legal_command(&c), Legality::Legal);
        let bad = cmd(v("x"), CCoTerm::push(CTerm::Car(CStuck(1)), stuck(1)));
        assert_eq!(is_legal_command(&bad), Legality::Illegal);
        assert_eq!(is_legal_command(&cmd(v("x"), CCoTerm::covar("a"))), Legality::NotApplicable);
    }

    #[test]
    fn substitution_avoids_capture_of_both_sorts() {
        // case[(y . b).<x || a>][y/x, b/a] must rename y and b
        let body = cmd(CTerm::case("y", "b", cmd(v("x"), CCoTerm::covar("a"))), tp());
        let r = body.subst(&[("x".into(), v("y"))], &[("a".into(), CCoTerm::covar("b"))]);
        match &r.term {
            CTerm::Case(y, b, c) => {
                assert_ne!(y.as_str(), "y");
                assert_ne!(b.as_str(), "b");
                assert_eq!(c.term, v("y"));
                assert_eq!(c.coterm, CCoTerm::covar("b"));
            }
            other => panic!("{other}"),
        }
        // a shadowed co-variable is left alone
        let shadow = cmd(CTerm::mu("a", cmd(v("z"), CCoTerm::covar("a"))), CCoTerm::covar("a"));
        let r = shadow.subst(&[], &[("a".into(), tp())]);
        assert_eq!(r, cmd(CTerm::mu("a", cmd(v("z"), CCoTerm::covar("a"))), tp()));
    }

    #[test]
    fn embedding_round_trips() {
        let t = parse_term("\\x.\\y.x (\\z.z y)").unwrap();
        assert_eq!(to_pure(&embed(&t)).unwrap(), t);
        assert!(to_pure(&CTerm::mu("a", cmd(v("x"), CCoTerm::covar("a")))).is_err());
    }

    #[test]
    fn projection_readback() {
        let r = control_readback(&cmd(CTerm::Car(CStuck(0)), stuck(1))).unwrap();
        assert!(r.alpha_eq(&parse_term("\\x.x").unwrap()));
        let c = cmd(CTerm::Car(CStuck(1)), CCoTerm::push(CTerm::Car(CStuck(0)), stuck(2)));
        let r = control_readback(&c).unwrap();
        assert!(r.alpha_eq(&parse_term("\\a.\\b.b a").unwrap()));
    }

    #[test]
    fn rendering() {
        let c = cmd(CTerm::app(CTerm::lam("y", v("y")), CTerm::Car(CStuck(0))), stuck(1));
        assert_eq!(c.to_string(), "<case[(y . k).<y || k>] car(tp) || cdr(tp)>");
        let m = cmd(v("x"), CCoTerm::push(CTerm::mu("a", cmd(v("z"), CCoTerm::covar("a"))), CCoTerm::covar("b")));
        assert_eq!(m.to_string(), "<x || (mu a.<z || a>) . b>");
    }
}
