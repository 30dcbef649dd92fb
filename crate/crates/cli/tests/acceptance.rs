use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::process::{Command as Proc, ExitCode, Stdio};

use headlab::coalesced::{coalesced_load, coalesced_readback_step, coalesced_step, expand_macros, QCommand};
use headlab::control::{control_load, control_proj_step, is_legal_command, CCoTerm, CCommand, CTerm, ControlStep};
use headlab::derived::{derived_step, translate_hash, translate_star, Index, Nat, TopTerm, ABSORB};
use headlab::engine::{registry, Outcome, Strategy, HEAD_GROUP, WEAK_HEAD_GROUP};
use headlab::head::{eval_h, eval_sestoft};
use headlab::machine::{Meter, Step, Unload};
use headlab::projection::{is_legal_proj, proj_load, proj_step, PCommand};
use headlab::{gen_corpus, parse_term, Expr, GenConfig, Name, PTerm, QTerm, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const CORPUS_SIZE: usize = 1000;
const CORPUS_MAX_SIZE: usize = 30;
const CORPUS_SEED: u64 = 42;
const FUEL: u64 = 10_000;
const LOCKSTEP_FUEL: u64 = 1_000;
const STACK_SIZE: usize = 1 << 30;
const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Locally nameless form: bound variables as indices, free ones by name.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Db {
    Bound(usize),
    Free(String),
    App(Box<Db>, Box<Db>),
    Lam(Box<Db>),
}

fn to_db(t: &Term) -> Db {
    fn go(t: &Term, scope: &mut Vec<String>) -> Db {
        match t {
            Expr::Var(x) => match scope.iter().rev().position(|y| y == x.as_str()) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.as_str().to_string()),
            },
            Expr::App(f, a) => Db::App(Box::new(go(f, scope)), Box::new(go(a, scope))),
            Expr::Lam(x, b) => {
                scope.push(x.as_str().to_string());
                let body = go(b, scope);
                scope.pop();
                Db::Lam(Box::new(body))
            }
            Expr::Atom(a) => match *a {},
        }
    }
    go(t, &mut Vec::new())
}

/// Replaces the free name `x`; `s` has no dangling indices, so no shifting.
fn db_subst(t: &Db, x: &str, s: &Db) -> Db {
    match t {
        Db::Free(y) if y == x => s.clone(),
        Db::Bound(_) | Db::Free(_) => t.clone(),
        Db::App(f, a) => Db::App(Box::new(db_subst(f, x, s)), Box::new(db_subst(a, x, s))),
        Db::Lam(b) => Db::Lam(Box::new(db_subst(b, x, s))),
    }
}

fn oracle_alpha_eq(a: &Term, b: &Term) -> bool {
    to_db(a) == to_db(b)
}

fn oracle_is_neutral(t: &Term) -> bool {
    match t {
        Expr::Var(_) => true,
        Expr::App(f, _) => oracle_is_neutral(f),
        _ => false,
    }
}

fn oracle_is_hnf(t: &Term) -> bool {
    match t {
        Expr::Lam(_, b) => oracle_is_hnf(b),
        _ => oracle_is_neutral(t),
    }
}

fn oracle_is_whnf(t: &Term) -> bool {
    matches!(t, Expr::Lam(..)) || oracle_is_neutral(t)
}

/// Every `car(cdr^n tp)` in the state has `n` below the terminator depth.
fn oracle_legal_proj(c: &PCommand) -> bool {
    fn max_depth(v: &headlab::PTerm) -> Option<usize> {
        match v {
            Expr::Var(_) => None,
            Expr::Atom(p) => Some(p.0),
            Expr::App(f, a) => max_depth(f).max(max_depth(a)),
            Expr::Lam(_, b) => max_depth(b),
        }
    }
    let end = c.coterm.end().0;
    std::iter::once(&c.term).chain(c.coterm.args()).all(|v| max_depth(v).map_or(true, |d| d < end))
}

/// `q` read with `pick n tp` as `car(cdr^n tp)` is `p`. Shared nodes are
/// compared once, so states whose trees blow up under sharing stay cheap.
fn oracle_expands_to(q: &QTerm, p: &PTerm, seen: &mut HashSet<(usize, usize)>) -> bool {
    if !seen.insert((q as *const QTerm as usize, p as *const PTerm as usize)) {
        return true;
    }
    match (q, p) {
        (Expr::Var(x), Expr::Var(y)) => x == y,
        (Expr::Atom(a), Expr::Atom(b)) => a.0 == b.0,
        (Expr::App(f1, a1), Expr::App(f2, a2)) => oracle_expands_to(f1, f2, seen) && oracle_expands_to(a1, a2, seen),
        (Expr::Lam(x, b1), Expr::Lam(y, b2)) => x == y && oracle_expands_to(b1, b2, seen),
        _ => false,
    }
}

/// `drop n tp` is `cdr^n tp` and the stacked arguments expand pairwise.
fn oracle_command_expands_to(q: &QCommand, p: &PCommand) -> bool {
    let mut seen = HashSet::new();
    let (qa, pa) = (q.coterm.args(), p.coterm.args());
    q.coterm.end().0 == p.coterm.end().0
        && qa.len() == pa.len()
        && oracle_expands_to(&q.term, &p.term, &mut seen)
        && qa.iter().zip(&pa).all(|(a, b)| oracle_expands_to(a, b, &mut seen))
}

fn oracle_legal_control(c: &CCommand) -> bool {
    fn term(t: &CTerm) -> Option<usize> {
        match t {
            CTerm::Var(_) => None,
            CTerm::Car(s) => Some(s.0),
            CTerm::App(f, a) => term(f).max(term(a)),
            CTerm::Mu(_, c) | CTerm::Case(_, _, c) => command(c),
        }
    }
    fn coterm(e: &CCoTerm) -> Option<usize> {
        match e {
            CCoTerm::Push(a, rest) => term(a).max(coterm(rest)),
            CCoTerm::CoVar(_) | CCoTerm::Stuck(_) => None,
        }
    }
    fn command(c: &CCommand) -> Option<usize> {
        term(&c.term).max(coterm(&c.coterm))
    }
    let mut e = &c.coterm;
    let end = loop {
        match e {
            CCoTerm::Push(_, rest) => e = rest,
            CCoTerm::Stuck(s) => break s.0,
            CCoTerm::CoVar(_) => return false,
        }
    };
    command(c).map_or(true, |d| d < end)
}

// ---------------------------------------------------------------------------
// Random open terms
// ---------------------------------------------------------------------------

fn open_term(rng: &mut ChaCha8Rng, budget: usize) -> Term {
    let name = |rng: &mut ChaCha8Rng| Name::from(NAMES[rng.gen_range(0..NAMES.len())]);
    if budget <= 1 || rng.gen_bool(0.25) {
        return Expr::Var(name(rng));
    }
    if budget >= 3 && rng.gen_bool(0.55) {
        let left = rng.gen_range(1..budget - 1);
        let f = open_term(rng, left);
        let a = open_term(rng, budget - 1 - left);
        Expr::app(f, a)
    } else {
        let x = name(rng);
        Expr::lam(x, open_term(rng, budget - 1))
    }
}

/// Renames every binder to a name not occurring in `t`.
fn rename_binders(t: &Term, tag: &str) -> Term {
    fn go(t: &Term, tag: &str, next: &mut usize, scope: &mut Vec<(Name, Name)>) -> Term {
        match t {
            Expr::Var(x) => match scope.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Expr::Var(new.clone()),
                None => t.clone(),
            },
            Expr::App(f, a) => Expr::app(go(f, tag, next, scope), go(a, tag, next, scope)),
            Expr::Lam(x, b) => {
                let fresh = Name::from(format!("{tag}{next}"));
                *next += 1;
                scope.push((x.clone(), fresh.clone()));
                let body = go(b, tag, next, scope);
                scope.pop();
                Expr::lam(fresh, body)
            }
            Expr::Atom(a) => match *a {},
        }
    }
    go(t, tag, &mut 0, &mut Vec::new())
}

/// A legal `\^k.v`: free occurrences of the first `k` names become indices.
fn legal_top(rng: &mut ChaCha8Rng) -> TopTerm {
    fn go(t: &Term, k: usize, scope: &mut Vec<Name>) -> headlab::IxTerm {
        match t {
            Expr::Var(x) if !scope.contains(x) => match NAMES.iter().position(|n| *n == x.as_str()) {
                Some(i) if i < k => Expr::Atom(Nat::from_count(i)),
                _ => Expr::Var(x.clone()),
            },
            Expr::Var(x) => Expr::Var(x.clone()),
            Expr::Lam(x, b) => {
                scope.push(x.clone());
                let body = go(b, k, scope);
                scope.pop();
                Expr::lam(x.clone(), body)
            }
            Expr::App(f, a) => Expr::app(go(f, k, scope), go(a, k, scope)),
            Expr::Atom(a) => match *a {},
        }
    }
    let k = rng.gen_range(0..=NAMES.len());
    let size = rng.gen_range(1..=25);
    let mut v = open_term(rng, size);
    if rng.gen_bool(0.5) {
        v = Expr::lam(NAMES[rng.gen_range(0..NAMES.len())], v);
    }
    TopTerm::anonymous(k, go(&v, k, &mut Vec::new()))
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

type Check = Result<String, String>;

struct Suite {
    failed: Vec<usize>,
}

impl Suite {
    fn check(&mut self, n: usize, title: &str, f: impl FnOnce() -> Check) {
        let started = std::time::Instant::now();
        let result = f();
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  criterion {n:>2}: {title} ({detail}; {secs:.2}s)"),
            Err(reason) => {
                println!("FAIL  criterion {n:>2}: {title}: {reason}");
                self.failed.push(n);
            }
        }
        let _ = std::io::stdout().flush();
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct CliRun {
    events: Vec<(String, String, String)>,
    outcome: Value,
}

impl CliRun {
    fn states(&self, phase: &str) -> Vec<&str> {
        self.events.iter().filter(|(p, _, _)| p == phase).map(|(_, _, s)| s.as_str()).collect()
    }
}

fn cli_trace(engine: &str, src: &str) -> Result<CliRun, String> {
    let mut child = Proc::new(env!("CARGO_BIN_EXE_headlab"))
        .args(["eval", "--engine", engine, "--trace", "--format", "json", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| format!("spawning headlab: {e}"))?;
    child.stdin.take().unwrap().write_all(src.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines: Vec<Value> = Vec::new();
    for line in stdout.lines() {
        lines.push(serde_json::from_str(line).map_err(|e| format!("bad json line {line:?}: {e}"))?);
    }
    let outcome = lines.pop().ok_or("no output")?;
    let field = |v: &Value, k: &str| v[k].as_str().map(str::to_string).ok_or(format!("missing `{k}` in {v}"));
    let events = lines
        .iter()
        .map(|v| Ok((field(v, "phase")?, field(v, "rule")?, field(v, "state")?)))
        .collect::<Result<_, String>>()?;
    Ok(CliRun { events, outcome })
}

fn normal_result(run: &CliRun) -> Result<Term, String> {
    ensure(run.outcome["outcome"] == "normal", || format!("outcome {}", run.outcome))?;
    let src = run.outcome["result"].as_str().ok_or("missing result")?;
    parse_term(src).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

const EXAMPLE: &str = "\\x.(\\y.y) x";

fn golden_projection() -> Check {
    let run = cli_trace("head-proj", EXAMPLE)?;
    let expected_reduce = ["<(\\y.y) car(tp) || cdr(tp)>", "<\\y.y || car(tp) . cdr(tp)>", "<car(tp) || cdr(tp)>"];
    let expected_readback = ["<\\x.x || tp>", "\\x.x"];
    ensure(run.states("load") == ["<\\x.(\\y.y) x || tp>"], || format!("load {:?}", run.states("load")))?;
    ensure(run.states("reduce") == expected_reduce, || format!("reduce {:?}", run.states("reduce")))?;
    ensure(run.states("readback") == expected_readback, || format!("readback {:?}", run.states("readback")))?;
    let result = normal_result(&run)?;
    ensure(oracle_alpha_eq(&result, &t("\\x.x")), || format!("result {result}"))?;
    Ok("3 reduce and 2 readback events".into())
}

fn golden_derived() -> Check {
    let run = cli_trace("head-os-derived", EXAMPLE)?;
    let reduce = run.states("reduce");
    ensure(reduce == ["\\.(\\y.y) #0", "\\.#0"], || format!("reduce {reduce:?}"))?;
    let result = normal_result(&run)?;
    ensure(oracle_alpha_eq(&result, &t("\\x.x")), || format!("result {result}"))?;
    Ok("\\.(\\y.y) #0 then \\.#0".into())
}

fn golden_coalesced() -> Check {
    let run = cli_trace("head-coalesced", EXAMPLE)?;
    let reduce = run.states("reduce");
    ensure(reduce.first() == Some(&"<(\\y.y) (pick 0 tp) || drop 1 tp>"), || format!("reduce {reduce:?}"))?;
    ensure(reduce.last() == Some(&"<pick 0 tp || drop 1 tp>"), || format!("reduce {reduce:?}"))?;
    let result = normal_result(&run)?;
    ensure(oracle_alpha_eq(&result, &t("\\x.x")), || format!("result {result}"))?;
    Ok(format!("{} reduce events", reduce.len()))
}

fn trilemma() -> Check {
    let fuel = 1000;
    let eta_omega = t("\\x.((\\y.y y)(\\y.y y)) x");
    let omega = t("(\\y.y y)(\\y.y y)");
    let krivine = registry().iter().find(|e| e.name() == "krivine").ok_or("no krivine")?;
    match krivine.run(&eta_omega, fuel, false).outcome {
        Outcome::Normal { result, steps } => {
            ensure(steps.beta == 0, || format!("krivine took {} beta steps", steps.beta))?;
            ensure(oracle_alpha_eq(&result, &eta_omega), || format!("krivine gave {result}"))?;
        }
        other => return Err(format!("krivine on the eta-expanded term: {other}")),
    }
    let o = krivine.run(&omega, fuel, false).outcome;
    ensure(matches!(o, Outcome::FuelExhausted { .. }), || format!("krivine on omega: {o}"))?;
    let mut heads = 0;
    for e in registry().iter().filter(|e| e.strategy() == Strategy::Head) {
        heads += 1;
        for v in [&eta_omega, &omega] {
            let o = e.run(v, fuel, false).outcome;
            ensure(matches!(o, Outcome::FuelExhausted { .. }), || format!("{} on {v}: {o}", e.name()))?;
        }
    }
    Ok(format!("{heads} head engines exhausted on both terms"))
}

/// Outcomes of every registered engine on every corpus term.
struct CorpusRuns {
    corpus: Vec<Term>,
    outcomes: HashMap<&'static str, Vec<Outcome>>,
}

fn run_corpus() -> CorpusRuns {
    let corpus = gen_corpus(&GenConfig::new(CORPUS_MAX_SIZE, CORPUS_SEED), CORPUS_SIZE);
    let outcomes = registry()
        .iter()
        .map(|e| (e.name(), corpus.iter().map(|v| e.run(v, FUEL, false).outcome).collect()))
        .collect();
    CorpusRuns { corpus, outcomes }
}

fn group_agreement(runs: &CorpusRuns, group: &[&str]) -> Result<(usize, usize), String> {
    let mut normal = 0;
    let mut exhausted = 0;
    for (i, v) in runs.corpus.iter().enumerate() {
        let outs: Vec<&Outcome> = group.iter().map(|n| &runs.outcomes[n][i]).collect();
        if outs.iter().all(|o| matches!(o, Outcome::FuelExhausted { .. })) {
            exhausted += 1;
            continue;
        }
        let results: Option<Vec<&Term>> = outs.iter().map(|o| o.result()).collect();
        let agree = results.as_ref().is_some_and(|rs| {
            rs.iter().enumerate().all(|(a, ra)| rs[a + 1..].iter().all(|rb| oracle_alpha_eq(ra, rb)))
        });
        if !agree {
            let detail: Vec<String> = group.iter().zip(&outs).map(|(n, o)| format!("{n}: {o}")).collect();
            return Err(format!("term #{i} {v}: {}", detail.join("; ")));
        }
        normal += 1;
    }
    Ok((normal, exhausted))
}

fn weak_head_agreement(runs: &CorpusRuns) -> Check {
    let (normal, exhausted) = group_agreement(runs, &WEAK_HEAD_GROUP)?;
    Ok(format!("{normal} normal, {exhausted} unanimously exhausted"))
}

fn head_agreement(runs: &CorpusRuns) -> Check {
    let (normal, exhausted) = group_agreement(runs, &HEAD_GROUP)?;
    for (i, v) in runs.corpus.iter().enumerate() {
        let mut m1 = Meter::logging(FUEL);
        let mut m2 = Meter::logging(FUEL);
        let r1 = eval_h(v, &mut m1);
        let r2 = eval_sestoft(v, &mut m2);
        ensure(r1 == r2, || format!("term #{i} {v}: results differ"))?;
        ensure(m1.log == m2.log, || format!("term #{i} {v}: beta-redex logs differ"))?;
    }
    Ok(format!("{normal} normal, {exhausted} unanimously exhausted, redex logs identical"))
}

fn round_trips(corpus: &[Term]) -> Check {
    for v in corpus {
        let back = translate_star(&translate_hash(v)).map_err(|e| format!("{v}: {e}"))?;
        ensure(back == *v, || format!("{v} came back as {back}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut absorptions = 0;
    for _ in 0..200 {
        let top = legal_top(&mut rng);
        let target = translate_hash(&translate_star(&top).map_err(|e| format!("{top}: {e}"))?);
        let mut cur = top.clone();
        while cur.body.is_lam() {
            match derived_step(&cur) {
                Step::Next(rule, next) if rule == ABSORB => cur = next,
                other => return Err(format!("{cur}: expected absorption, got {other:?}")),
            }
            absorptions += 1;
        }
        ensure(cur == target, || format!("{top} absorbed to {cur}, expected {target}"))?;
    }
    Ok(format!("{} terms, 200 prefixed terms with {absorptions} absorptions", corpus.len()))
}

fn lockstep(corpus: &[Term]) -> Check {
    let mut total = 0;
    for (i, v) in corpus.iter().take(500).enumerate() {
        let mut p = proj_load(v);
        let mut q = coalesced_load(v);
        let mut beta = 0;
        loop {
            ensure(oracle_command_expands_to(&q, &p), || format!("term #{i} {v}: {q} expands differently from {p}"))?;
            match (proj_step(&p), coalesced_step(&q)) {
                (Step::Next(r1, p1), Step::Next(r2, q1)) => {
                    ensure(r1 == r2, || format!("term #{i} {v}: rules {} and {}", r1.name, r2.name))?;
                    total += 1;
                    p = p1;
                    q = q1;
                    if r1.beta {
                        beta += 1;
                        if beta >= LOCKSTEP_FUEL {
                            break;
                        }
                    }
                }
                (Step::Terminal, Step::Terminal) => {
                    readback_lockstep(&p, &q).map_err(|e| format!("term #{i} {v}: {e}"))?;
                    break;
                }
                (a, b) => return Err(format!("term #{i} {v}: {a:?} vs {b:?}")),
            }
        }
    }
    Ok(format!("500 terms, {total} paired transitions"))
}

fn readback_lockstep(p: &PCommand, q: &QCommand) -> Result<(), String> {
    use headlab::projection::proj_readback_step;
    let (mut p, mut q) = (p.clone(), q.clone());
    loop {
        ensure(expand_macros(&q) == p, || format!("readback: {q} expands differently from {p}"))?;
        match (proj_readback_step(&p), coalesced_readback_step(&q)) {
            (Ok(Unload::Next(l1, p1)), Ok(Unload::Next(l2, q1))) => {
                ensure(l1 == l2, || format!("readback labels {l1} and {l2}"))?;
                p = p1;
                q = q1;
            }
            (Ok(Unload::Done(a)), Ok(Unload::Done(b))) => {
                return ensure(a == b, || format!("readback results {a} and {b}"));
            }
            (a, b) => return Err(format!("readback diverged: {a:?} vs {b:?}")),
        }
    }
}

fn normal_forms(runs: &CorpusRuns) -> Check {
    let mut checked = 0;
    for e in registry() {
        let grammar: fn(&Term) -> bool = match e.strategy() {
            Strategy::Head => oracle_is_hnf,
            Strategy::WeakHead => oracle_is_whnf,
        };
        for (i, o) in runs.outcomes[e.name()].iter().enumerate() {
            if let Some(r) = o.result() {
                ensure(grammar(r), || format!("{} on term #{i} gave {r}", e.name()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} normal results"))
}

/// The states of a run that have a successor, up to `limit` transitions.
fn run_states<S: Clone>(load: S, limit: usize, step: impl Fn(&S) -> Option<S>) -> Vec<(S, S)> {
    let mut out = Vec::new();
    let mut cur = load;
    while out.len() < limit {
        match step(&cur) {
            Some(next) => {
                out.push((cur, next.clone()));
                cur = next;
            }
            None => break,
        }
    }
    out
}

fn legality(corpus: &[Term]) -> Check {
    const RUN_LIMIT: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut proj_steps = 0;
    let mut control_steps = 0;
    for v in corpus.iter().take(500) {
        let run = run_states(proj_load(v), RUN_LIMIT, |c| proj_step(c).next());
        if !run.is_empty() {
            let (c, next) = &run[rng.gen_range(0..run.len())];
            ensure(oracle_legal_proj(c), || format!("reachable state {c} is illegal"))?;
            ensure(is_legal_proj(c), || format!("checker rejects legal state {c}"))?;
            ensure(oracle_legal_proj(next), || format!("{c} steps to illegal {next}"))?;
            ensure(is_legal_proj(next), || format!("checker rejects legal state {next}"))?;
            proj_steps += 1;
        }

        let run = run_states(control_load(v), RUN_LIMIT, |c| match control_proj_step(c) {
            ControlStep::Next(_, next) => Some(next),
            _ => None,
        });
        if !run.is_empty() {
            let (c, next) = &run[rng.gen_range(0..run.len())];
            ensure(oracle_legal_control(c), || format!("reachable control state {c:?} is illegal"))?;
            ensure(is_legal_command(c).is_legal(), || format!("checker rejects legal state {c:?}"))?;
            ensure(oracle_legal_control(next), || format!("{c:?} steps to illegal {next:?}"))?;
            ensure(is_legal_command(next).is_legal(), || format!("checker rejects legal state {next:?}"))?;
            control_steps += 1;
        }
    }
    ensure(proj_steps == 500 && control_steps == 500, || {
        format!("only {proj_steps} head-proj and {control_steps} control-proj states had a successor")
    })?;
    Ok("500 sampled transitions each of head-proj and control-proj".into())
}

fn core_syntax(corpus: &[Term]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let size = rng.gen_range(1..=25);
        let body = open_term(&mut rng, size);
        let size = rng.gen_range(1..=12);
        let s = open_term(&mut rng, size);
        let x = Name::from(NAMES[rng.gen_range(0..NAMES.len())]);
        let got = to_db(&body.subst(&x, &s));
        let want = db_subst(&to_db(&body), x.as_str(), &to_db(&s));
        ensure(got == want, || format!("({body})[{s}/{x}] = {}", body.subst(&x, &s)))?;
    }

    let mut related = 0;
    for i in 0..2000 {
        let size = rng.gen_range(1..=20);
        let a = open_term(&mut rng, size);
        let (b, c) = if i % 2 == 0 {
            (rename_binders(&a, "p"), rename_binders(&a, "q"))
        } else {
            let size = rng.gen_range(1..=20);
            let b = open_term(&mut rng, size);
            let size = rng.gen_range(1..=20);
            (b, open_term(&mut rng, size))
        };
        for (u, w) in [(&a, &b), (&b, &c), (&a, &c)] {
            ensure(u.alpha_eq(w) == oracle_alpha_eq(u, w), || format!("alpha_eq({u}, {w}) disagrees with oracle"))?;
            ensure(u.alpha_eq(w) == w.alpha_eq(u), || format!("alpha_eq not symmetric on {u}, {w}"))?;
        }
        ensure(a.alpha_eq(&a), || format!("alpha_eq not reflexive on {a}"))?;
        if a.alpha_eq(&b) && b.alpha_eq(&c) {
            related += 1;
            ensure(a.alpha_eq(&c), || format!("alpha_eq not transitive on {a}, {b}, {c}"))?;
        }
    }

    let mut printed = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let extra: Vec<Term> = (0..CORPUS_SIZE).map(|_| {
        let size = rng.gen_range(1..=30);
        open_term(&mut rng, size)
    }).collect();
    for v in corpus.iter().chain(&extra).take(2000) {
        let back = parse_term(&v.to_string()).map_err(|e| format!("{v}: {e}"))?;
        ensure(back == *v, || format!("{v} reparsed as {back}"))?;
        printed += 1;
    }
    Ok(format!("2000 substitutions, {related} related triples, {printed} round trips"))
}

fn main() -> ExitCode {
    let worker = std::thread::Builder::new().stack_size(STACK_SIZE).spawn(|| {
        let mut suite = Suite { failed: Vec::new() };
        suite.check(1, "golden trace of head-proj", golden_projection);
        suite.check(2, "golden trace of head-os-derived", golden_derived);
        suite.check(3, "golden trace of head-coalesced", golden_coalesced);
        suite.check(4, "trilemma outcomes at fuel 1000", trilemma);
        let runs = run_corpus();
        suite.check(5, "weak-head engines agree on the corpus", || weak_head_agreement(&runs));
        suite.check(6, "head engines agree on the corpus", || head_agreement(&runs));
        suite.check(7, "hash/star round trips", || round_trips(&runs.corpus));
        suite.check(8, "coalesced and projection machines in lockstep", || lockstep(&runs.corpus));
        suite.check(9, "normal results match their grammar", || normal_forms(&runs));
        suite.check(10, "one step preserves legality", || legality(&runs.corpus));
        suite.check(11, "substitution, alpha equivalence, parse and print", || core_syntax(&runs.corpus));
        suite.failed
    });
    let failed = match worker.map(|h| h.join()) {
        Ok(Ok(failed)) => failed,
        _ => {
            println!("FAIL  acceptance suite panicked");
            return ExitCode::FAILURE;
        }
    };
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
