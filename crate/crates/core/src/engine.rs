//! The engine registry and the fueled driver shared by every engine.
//!
//! Fuel counts beta contractions (including the binding step of the
//! environment machines), the one cost every engine shares: all engines of
//! a strategy contract the same redexes in the same order, so they exhaust
//! a common budget at the same point.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::coalesced::{
    coalesced_load, coalesced_readback_step, coalesced_step, debruijn_load, DTopTerm, QCommand,
};
use crate::control::{
    control_load, control_proj_step, control_readback_step, control_step, Blocked, CCommand, ControlStep,
};
use crate::derived::{derived_load, TopTerm};
use crate::env::{
    env_head_force, env_head_load, env_head_step, env_krivine_force, env_krivine_load, env_krivine_step,
    EHCommand, EKCommand, EnvStep, FORCE,
};
use crate::head::{abs_load, abs_machine_step, abs_readback_step, eval_h, eval_sestoft, step_head_os, step_head_os_mut,
    HCommand,
};
use crate::machine::{FuelExhausted, Meter, ReadbackError, Rule, Step, Unload, BETA, DONE};
use crate::print::render_bounded;
use crate::projection::{proj_load, proj_readback_step, proj_step, PCommand};
use crate::weak_head::{eval_wh, krivine_load, krivine_readback_step, krivine_step, step_wh_os, step_wh_os_mut,
    KCommand,
};
use crate::Term;

/// Default fuel, in beta contractions.
pub const DEFAULT_FUEL: u64 = 100_000;

/// Longest rendering kept for the last state of an exhausted run.
pub const LAST_STATE_LIMIT: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    WeakHead,
    Head,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Strategy::WeakHead => "weak-head",
            Strategy::Head => "head",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Steps {
    /// Transitions taken before readback.
    pub reductions: u64,
    /// Beta contractions among them.
    pub beta: u64,
    /// Readback steps, including the final one producing the term.
    pub readback: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Normal { result: Term, steps: Steps },
    FuelExhausted { last_state: String, steps: Steps },
    Stuck { reason: String },
}

impl Outcome {
    pub fn result(&self) -> Option<&Term> {
        match self {
            Outcome::Normal { result, .. } => Some(result),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Normal { .. } => "normal",
            Outcome::FuelExhausted { .. } => "fuel-exhausted",
            Outcome::Stuck { .. } => "stuck",
        }
    }

    /// Normal results equal up to alpha, or the same non-normal outcome.
    pub fn agrees_with(&self, other: &Outcome) -> bool {
        match (self, other) {
            (Outcome::Normal { result: a, .. }, Outcome::Normal { result: b, .. }) => a.alpha_eq(b),
            (Outcome::FuelExhausted { .. }, Outcome::FuelExhausted { .. }) => true,
            (Outcome::Stuck { .. }, Outcome::Stuck { .. }) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Normal { result, .. } => write!(f, "{result}"),
            Outcome::FuelExhausted { steps, .. } => write!(f, "fuel exhausted after {} beta steps", steps.beta),
            Outcome::Stuck { reason } => write!(f, "stuck: {reason}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Load,
    Reduce,
    Readback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    pub step: usize,
    pub rule: String,
    pub state: String,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub engine: String,
    pub events: Vec<Event>,
}

impl Trace {
    fn new(engine: &str) -> Self {
        Trace { engine: engine.to_string(), events: Vec::new() }
    }

    fn push(&mut self, phase: Phase, rule: &str, state: &impl fmt::Display) {
        let step = self.events.len();
        self.events.push(Event { step, rule: rule.to_string(), state: state.to_string(), phase });
    }

    pub fn phase_count(&self, phase: Phase) -> usize {
        self.events.iter().filter(|e| e.phase == phase).count()
    }
}

pub struct Run {
    pub outcome: Outcome,
    pub trace: Option<Trace>,
}

pub trait Engine: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn strategy(&self) -> Strategy;
    fn run(&self, t: &Term, fuel: u64, trace: bool) -> Run;
    /// Re-derives each recorded state from its predecessor with the
    /// engine's own transition functions.
    fn replay(&self, t: &Term, trace: &Trace) -> Result<(), String>;
}

/// A transition system with load and stepwise readback.
pub trait Machine: Send + Sync {
    type State: Clone + fmt::Display;
    fn load(&self, t: &Term) -> Self::State;
    fn step(&self, s: &Self::State) -> Step<Self::State>;
    fn readback_step(&self, s: &Self::State) -> Result<Unload<Self::State>, ReadbackError>;

    /// Takes a run of non-beta transitions in one go when the machine can do
    /// so without building the intermediate states; returns how many.
    fn skip_admin(&self, _s: &mut Self::State) -> u64 {
        0
    }

    /// [`Machine::step`] applied to `s` in place.
    fn advance(&self, s: &mut Self::State) -> Step<()> {
        match self.step(s) {
            Step::Next(rule, next) => {
                *s = next;
                Step::Next(rule, ())
            }
            Step::Terminal => Step::Terminal,
            Step::Stuck(reason) => Step::Stuck(reason),
        }
    }
}

fn in_place(rule: Option<Rule>) -> Step<()> {
    match rule {
        Some(rule) => Step::Next(rule, ()),
        None => Step::Terminal,
    }
}

struct MachineEngine<M> {
    name: &'static str,
    description: &'static str,
    strategy: Strategy,
    machine: M,
}

impl<M: Machine> MachineEngine<M> {
    fn drive(&self, t: &Term, fuel: u64, mut trace: Option<&mut Trace>) -> Outcome {
        let mut state = self.machine.load(t);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(Phase::Load, "load", &state);
        }
        let mut steps = Steps::default();
        loop {
            if trace.is_none() {
                steps.reductions += self.machine.skip_admin(&mut state);
            }
            let taken = if steps.beta < fuel {
                self.machine.advance(&mut state)
            } else {
                // the budget is spent: look before moving
                match self.machine.step(&state) {
                    Step::Next(rule, _) if rule.beta => {
                        let last_state = render_bounded(&state, LAST_STATE_LIMIT);
                        return Outcome::FuelExhausted { last_state, steps };
                    }
                    Step::Next(rule, next) => {
                        state = next;
                        Step::Next(rule, ())
                    }
                    Step::Terminal => Step::Terminal,
                    Step::Stuck(reason) => Step::Stuck(reason),
                }
            };
            match taken {
                Step::Next(rule, ()) => {
                    if rule.beta {
                        steps.beta += 1;
                    }
                    steps.reductions += 1;
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(Phase::Reduce, rule.name, &state);
                    }
                }
                Step::Terminal => break,
                Step::Stuck(reason) => return Outcome::Stuck { reason },
            }
        }
        loop {
            match self.machine.readback_step(&state) {
                Ok(Unload::Next(rule, next)) => {
                    steps.readback += 1;
                    state = next;
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(Phase::Readback, rule, &state);
                    }
                }
                Ok(Unload::Done(result)) => {
                    steps.readback += 1;
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(Phase::Readback, DONE, &result);
                    }
                    return Outcome::Normal { result, steps };
                }
                Err(e) => return Outcome::Stuck { reason: e.to_string() },
            }
        }
    }
}

fn check_event(e: Option<&Event>, phase: Phase, rule: &str, state: &impl fmt::Display) -> Result<(), String> {
    let e = e.ok_or_else(|| format!("trace ends before {phase:?} {rule}"))?;
    let rendered = state.to_string();
    if e.phase != phase || e.rule != rule || e.state != rendered {
        return Err(format!(
            "event {}: recorded {:?} {} `{}`, replay gives {:?} {} `{}`",
            e.step, e.phase, e.rule, e.state, phase, rule, rendered
        ));
    }
    Ok(())
}

impl<M: Machine> Engine for MachineEngine<M> {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn run(&self, t: &Term, fuel: u64, trace: bool) -> Run {
        let mut tr = trace.then(|| Trace::new(self.name));
        let outcome = self.drive(t, fuel, tr.as_mut());
        Run { outcome, trace: tr }
    }

    fn replay(&self, t: &Term, trace: &Trace) -> Result<(), String> {
        let mut events = trace.events.iter();
        let mut state = self.machine.load(t);
        check_event(events.next(), Phase::Load, "load", &state)?;
        let mut rest = events.peekable();
        while let Some(e) = rest.peek() {
            if e.phase != Phase::Reduce {
                break;
            }
            match self.machine.step(&state) {
                Step::Next(rule, next) => {
                    state = next;
                    check_event(rest.next(), Phase::Reduce, rule.name, &state)?;
                }
                _ => return Err(format!("event {}: no transition applies", e.step)),
            }
        }
        while rest.peek().is_some() {
            match self.machine.readback_step(&state).map_err(|e| e.to_string())? {
                Unload::Next(rule, next) => {
                    state = next;
                    check_event(rest.next(), Phase::Readback, rule, &state)?;
                }
                Unload::Done(result) => {
                    check_event(rest.next(), Phase::Readback, DONE, &result)?;
                    if rest.next().is_some() {
                        return Err("events after the final readback".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// A big-step evaluator. Its trace lists the contractum of each beta step.
struct BigStepEngine {
    name: &'static str,
    description: &'static str,
    strategy: Strategy,
    eval: fn(&Term, &mut Meter) -> Result<Term, FuelExhausted>,
}

impl BigStepEngine {
    fn evaluate(&self, t: &Term, fuel: u64, trace: bool) -> (Result<Term, FuelExhausted>, Meter) {
        let mut meter = if trace { Meter::logging(fuel) } else { Meter::new(fuel) };
        let r = (self.eval)(t, &mut meter);
        (r, meter)
    }
}

impl Engine for BigStepEngine {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn run(&self, t: &Term, fuel: u64, trace: bool) -> Run {
        let (r, meter) = self.evaluate(t, fuel, trace);
        let tr = meter.log.as_ref().map(|log| {
            let mut tr = Trace::new(self.name);
            tr.push(Phase::Load, "load", t);
            for (_, contractum) in log {
                tr.push(Phase::Reduce, BETA.name, contractum);
            }
            if let Ok(v) = &r {
                tr.push(Phase::Readback, DONE, v);
            }
            tr
        });
        let steps = Steps { reductions: meter.beta, beta: meter.beta, readback: r.is_ok() as u64 };
        let outcome = match r {
            Ok(result) => Outcome::Normal { result, steps },
            Err(_) => Outcome::FuelExhausted {
                last_state: render_bounded(meter.last.as_ref().unwrap_or(t), LAST_STATE_LIMIT),
                steps,
            },
        };
        Run { outcome, trace: tr }
    }

    fn replay(&self, t: &Term, trace: &Trace) -> Result<(), String> {
        let budget = trace.phase_count(Phase::Reduce) as u64 + 1;
        let (r, meter) = self.evaluate(t, budget, true);
        let mut expected = Trace::new(self.name);
        expected.push(Phase::Load, "load", t);
        for (_, c) in meter.log.as_deref().unwrap_or_default() {
            expected.push(Phase::Reduce, BETA.name, c);
        }
        if let Ok(v) = &r {
            expected.push(Phase::Readback, DONE, v);
        }
        let n = trace.events.len();
        if expected.events.len() < n || expected.events[..n] != trace.events[..] {
            return Err("big-step contraction log differs from the trace".into());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

struct SmallStep {
    step: fn(&Term) -> Option<Term>,
    step_mut: fn(&mut Term) -> bool,
}

impl Machine for SmallStep {
    type State = Term;

    fn load(&self, t: &Term) -> Term {
        t.clone()
    }

    fn step(&self, s: &Term) -> Step<Term> {
        match (self.step)(s) {
            Some(n) => Step::Next(BETA, n),
            None => Step::Terminal,
        }
    }

    fn readback_step(&self, s: &Term) -> Result<Unload<Term>, ReadbackError> {
        Ok(Unload::Done(s.clone()))
    }

    fn advance(&self, s: &mut Term) -> Step<()> {
        in_place((self.step_mut)(s).then_some(BETA))
    }
}

struct Krivine;

impl Machine for Krivine {
    type State = KCommand;

    fn load(&self, t: &Term) -> KCommand {
        krivine_load(t)
    }

    fn step(&self, s: &KCommand) -> Step<KCommand> {
        krivine_step(s)
    }

    fn readback_step(&self, s: &KCommand) -> Result<Unload<KCommand>, ReadbackError> {
        Ok(krivine_readback_step(s))
    }
}

struct AbsMachine;

impl Machine for AbsMachine {
    type State = HCommand;

    fn load(&self, t: &Term) -> HCommand {
        abs_load(t)
    }

    fn step(&self, s: &HCommand) -> Step<HCommand> {
        abs_machine_step(s)
    }

    fn readback_step(&self, s: &HCommand) -> Result<Unload<HCommand>, ReadbackError> {
        Ok(abs_readback_step(s))
    }
}

struct Projection;

impl Machine for Projection {
    type State = PCommand;

    fn load(&self, t: &Term) -> PCommand {
        proj_load(t)
    }

    fn step(&self, s: &PCommand) -> Step<PCommand> {
        proj_step(s)
    }

    fn readback_step(&self, s: &PCommand) -> Result<Unload<PCommand>, ReadbackError> {
        proj_readback_step(s)
    }
}

struct Coalesced;

impl Machine for Coalesced {
    type State = QCommand;

    fn load(&self, t: &Term) -> QCommand {
        coalesced_load(t)
    }

    fn step(&self, s: &QCommand) -> Step<QCommand> {
        coalesced_step(s)
    }

    fn readback_step(&self, s: &QCommand) -> Result<Unload<QCommand>, ReadbackError> {
        coalesced_readback_step(s)
    }
}

struct Derived;

impl Machine for Derived {
    type State = TopTerm;

    fn load(&self, t: &Term) -> TopTerm {
        derived_load(t)
    }

    fn step(&self, s: &TopTerm) -> Step<TopTerm> {
        s.step()
    }

    fn readback_step(&self, s: &TopTerm) -> Result<Unload<TopTerm>, ReadbackError> {
        s.readback_step()
    }

    fn advance(&self, s: &mut TopTerm) -> Step<()> {
        in_place(s.step_mut())
    }
}

struct DeBruijn;

impl Machine for DeBruijn {
    type State = DTopTerm;

    fn load(&self, t: &Term) -> DTopTerm {
        debruijn_load(t)
    }

    fn step(&self, s: &DTopTerm) -> Step<DTopTerm> {
        s.step()
    }

    fn readback_step(&self, s: &DTopTerm) -> Result<Unload<DTopTerm>, ReadbackError> {
        s.readback_step()
    }

    fn advance(&self, s: &mut DTopTerm) -> Step<()> {
        in_place(s.step_mut())
    }
}

/// The control machines. Without projections, a `case` facing the top-level
/// context is an answer (an abstraction in weak-head normal form); a `case`
/// facing a co-variable is stuck.
struct Control {
    projections: bool,
}

impl Machine for Control {
    type State = CCommand;

    fn load(&self, t: &Term) -> CCommand {
        control_load(t)
    }

    fn step(&self, s: &CCommand) -> Step<CCommand> {
        let r = if self.projections { control_proj_step(s) } else { control_step(s) };
        match r {
            ControlStep::Next(rule, next) => Step::Next(rule, next),
            ControlStep::Terminal | ControlStep::StuckOnCoVar(Blocked::Top) => Step::Terminal,
            ControlStep::StuckOnCoVar(Blocked::CoVar(k)) => {
                Step::Stuck(format!("case against free co-variable {k}"))
            }
        }
    }

    fn readback_step(&self, s: &CCommand) -> Result<Unload<CCommand>, ReadbackError> {
        control_readback_step(s)
    }
}

/// State of an environment machine: running, or forced into the state of
/// its substitution counterpart for readback.
#[derive(Clone)]
enum Forcing<E, S> {
    Running(E),
    Forced(S),
}

impl<E: fmt::Display, S: fmt::Display> fmt::Display for Forcing<E, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Running(e) => e.fmt(f),
            Forcing::Forced(s) => s.fmt(f),
        }
    }
}

fn env_step<E, S>(r: EnvStep<E>) -> Step<Forcing<E, S>> {
    match r {
        EnvStep::Next(rule, next) => Step::Next(rule, Forcing::Running(next)),
        // A free variable of an open program is a neutral head.
        EnvStep::Terminal | EnvStep::UnboundVariable(_) => Step::Terminal,
    }
}

fn forced_step<S>(r: Result<Unload<S>, ReadbackError>) -> Result<Unload<Forcing<EKCommand, S>>, ReadbackError>
where
    S: Clone,
{
    r.map(|u| match u {
        Unload::Next(rule, s) => Unload::Next(rule, Forcing::Forced(s)),
        Unload::Done(t) => Unload::Done(t),
    })
}

struct EnvKrivine;

impl Machine for EnvKrivine {
    type State = Forcing<EKCommand, KCommand>;

    fn load(&self, t: &Term) -> Self::State {
        Forcing::Running(env_krivine_load(t))
    }

    fn step(&self, s: &Self::State) -> Step<Self::State> {
        match s {
            Forcing::Running(c) => env_step(env_krivine_step(c)),
            Forcing::Forced(_) => Step::Terminal,
        }
    }

    fn skip_admin(&self, s: &mut Self::State) -> u64 {
        match s {
            Forcing::Running(c) => c.follow_lookups(),
            Forcing::Forced(_) => 0,
        }
    }

    fn readback_step(&self, s: &Self::State) -> Result<Unload<Self::State>, ReadbackError> {
        match s {
            Forcing::Running(c) => Ok(Unload::Next(FORCE, Forcing::Forced(env_krivine_force(c)))),
            Forcing::Forced(k) => forced_step(Ok(krivine_readback_step(k))),
        }
    }
}

struct EnvHead;

impl Machine for EnvHead {
    type State = Forcing<EHCommand, QCommand>;

    fn load(&self, t: &Term) -> Self::State {
        Forcing::Running(env_head_load(t))
    }

    fn step(&self, s: &Self::State) -> Step<Self::State> {
        match s {
            Forcing::Running(c) => env_step(env_head_step(c)),
            Forcing::Forced(_) => Step::Terminal,
        }
    }

    fn skip_admin(&self, s: &mut Self::State) -> u64 {
        match s {
            Forcing::Running(c) => c.follow_lookups(),
            Forcing::Forced(_) => 0,
        }
    }

    fn readback_step(&self, s: &Self::State) -> Result<Unload<Self::State>, ReadbackError> {
        match s {
            Forcing::Running(c) => Ok(Unload::Next(FORCE, Forcing::Forced(env_head_force(c)))),
            Forcing::Forced(q) => coalesced_readback_step(q).map(|u| match u {
                Unload::Next(rule, s) => Unload::Next(rule, Forcing::Forced(s)),
                Unload::Done(t) => Unload::Done(t),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

fn machine<M: Machine + 'static>(
    name: &'static str,
    strategy: Strategy,
    description: &'static str,
    m: M,
) -> Arc<dyn Engine> {
    Arc::new(MachineEngine { name, description, strategy, machine: m })
}

fn bigstep(
    name: &'static str,
    strategy: Strategy,
    description: &'static str,
    eval: fn(&Term, &mut Meter) -> Result<Term, FuelExhausted>,
) -> Arc<dyn Engine> {
    Arc::new(BigStepEngine { name, description, strategy, eval })
}

/// Every engine, weak-head engines first.
pub fn registry() -> &'static [Arc<dyn Engine>] {
    static REGISTRY: OnceLock<Vec<Arc<dyn Engine>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        use Strategy::{Head, WeakHead};
        vec![
            machine("wh-os", WeakHead, "small-step weak-head reduction in evaluation contexts", SmallStep {
                step: step_wh_os,
                step_mut: step_wh_os_mut,
            }),
            machine("krivine", WeakHead, "Krivine machine with load and readback", Krivine),
            bigstep("wh-bigstep", WeakHead, "big-step weak-head evaluation", eval_wh),
            machine(
                "env-krivine",
                WeakHead,
                "Krivine machine with environments; closures are forced for readback",
                EnvKrivine,
            ),
            machine(
                "control-krivine",
                WeakHead,
                "Krivine machine for the calculus with mu and case, on embedded pure terms",
                Control { projections: false },
            ),
            machine(
                "control-proj",
                Head,
                "head machine with mu and case that splits stuck contexts with car/cdr",
                Control { projections: true },
            ),
            machine("head-os", Head, "small-step head reduction under a binder prefix", SmallStep {
                step: step_head_os,
                step_mut: step_head_os_mut,
            }),
            machine("head-abs", Head, "head machine keeping passed binders in Abs frames", AbsMachine),
            machine("head-proj", Head, "head machine splitting the empty context with car/cdr", Projection),
            machine(
                "head-os-derived",
                Head,
                "small-step head reduction with unary indices for top-level binders",
                Derived,
            ),
            machine("head-coalesced", Head, "head machine with coalesced projections pick/drop", Coalesced),
            machine(
                "head-debruijn",
                Head,
                "small-step head reduction with numeric indices for top-level binders",
                DeBruijn,
            ),
            bigstep("head-bigstep", Head, "big-step head evaluation over weak-head evaluation", eval_h),
            bigstep("sestoft", Head, "Sestoft's big-step head evaluation", eval_sestoft),
            machine(
                "env-head",
                Head,
                "coalesced head machine with environments; closures are forced for readback",
                EnvHead,
            ),
        ]
    })
}

pub const WEAK_HEAD_GROUP: [&str; 4] = ["wh-os", "krivine", "wh-bigstep", "env-krivine"];
pub const HEAD_GROUP: [&str; 9] = [
    "head-os",
    "head-abs",
    "head-proj",
    "head-os-derived",
    "head-coalesced",
    "head-debruijn",
    "head-bigstep",
    "sestoft",
    "env-head",
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown engine `{0}`")]
    UnknownEngine(String),
}

pub fn find(name: &str) -> Result<&'static Arc<dyn Engine>, EngineError> {
    registry()
        .iter()
        .find(|e| e.name() == name)
        .ok_or_else(|| EngineError::UnknownEngine(name.to_string()))
}

/// Resolves `all-head`, `all-wh`, `all`, or a comma-separated list of names.
pub fn select(spec: &str) -> Result<Vec<&'static Arc<dyn Engine>>, EngineError> {
    let names: Vec<&str> = match spec {
        "all-head" => HEAD_GROUP.to_vec(),
        "all-wh" => WEAK_HEAD_GROUP.to_vec(),
        "all" => registry().iter().map(|e| e.name()).collect(),
        csv => csv.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
    };
    names.into_iter().map(find).collect()
}

/// Runs `engine` on `t` with at most `fuel` beta steps.
pub fn evaluate(t: &Term, engine: &str, fuel: u64, trace: bool) -> Result<Run, EngineError> {
    Ok(find(engine)?.run(t, fuel, trace))
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub engine: &'static str,
    pub strategy: Strategy,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub entries: Vec<Entry>,
    /// Engines partitioned by agreeing outcome, as indices into `entries`.
    pub groups: Vec<Vec<usize>>,
}

impl Report {
    /// Engines of the same strategy all agree.
    pub fn agreement(&self) -> bool {
        self.strategy_groups().iter().all(|g| g.len() <= 1)
    }

    /// Per strategy, the outcome classes present among its engines.
    pub fn strategy_groups(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in [Strategy::WeakHead, Strategy::Head] {
            let classes: Vec<usize> = self
                .groups
                .iter()
                .enumerate()
                .filter(|(_, g)| g.iter().any(|&i| self.entries[i].strategy == s))
                .map(|(k, _)| k)
                .collect();
            out.push(classes);
        }
        out
    }

    /// Engines of different strategies reached different outcomes.
    pub fn cross_strategy_difference(&self) -> bool {
        self.groups.len() > 1 && self.agreement()
    }
}

/// Runs every engine on `t` and groups them by outcome.
pub fn compare(t: &Term, engines: &[&'static Arc<dyn Engine>], fuel: u64) -> Report {
    let entries: Vec<Entry> = engines
        .iter()
        .map(|e| Entry { engine: e.name(), strategy: e.strategy(), outcome: e.run(t, fuel, false).outcome })
        .collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        match groups.iter_mut().find(|g| entries[g[0]].outcome.agrees_with(&entry.outcome)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    Report { entries, groups }
}
