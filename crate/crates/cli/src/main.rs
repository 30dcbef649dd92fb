use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use headlab::engine::{self, Entry, Event, Outcome, DEFAULT_FUEL};
use headlab::{gen_corpus, parse_term, GenConfig, Term};
use serde_json::json;

/// Evaluation lab for weak-head and head reduction of lambda terms.
#[derive(Parser)]
#[command(name = "headlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term with one engine.
    Eval {
        #[arg(long)]
        engine: String,
        /// Budget in beta contractions.
        #[arg(long, env = "HEADLAB_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Print every step of the run.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Source file, or `-` for standard input.
        input: PathBuf,
    },
    /// Run several engines on a term and group them by outcome.
    Compare {
        /// Comma-separated names, or one of all-head, all-wh, all.
        #[arg(long, default_value = "all")]
        engines: String,
        #[arg(long, env = "HEADLAB_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        input: PathBuf,
    },
    /// Print the normal-form class of a term.
    Classify { input: PathBuf },
    /// Print random closed terms, one per line.
    Gen {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// List the registered engines.
    Engines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FUEL: u8 = 2;
const EXIT_STUCK: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

/// Evaluation of deep terms recurses deeply.
const STACK_SIZE: usize = 1 << 30;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run(cli));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(anyhow::anyhow!("evaluation panicked"))),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Eval { engine, fuel, trace, format, input } => {
            eval(&engine, fuel, trace, format, &read_term(&input)?)
        }
        Command::Compare { engines, fuel, input } => compare(&engines, fuel, &read_term(&input)?),
        Command::Classify { input } => {
            println!("{}", read_term(&input)?.classify());
            Ok(EXIT_OK)
        }
        Command::Gen { size, seed, count } => {
            let mut out = io::stdout().lock();
            for t in gen_corpus(&GenConfig::new(size, seed), count) {
                writeln!(out, "{t}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Engines => {
            for e in engine::registry() {
                println!("{:<16} {:<10} {}", e.name(), e.strategy(), e.description());
            }
            Ok(EXIT_OK)
        }
    }
}

fn read_term(input: &PathBuf) -> Result<Term> {
    let src = if input.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?
    };
    parse_term(&src).with_context(|| format!("parsing {}", input.display()))
}

fn exit_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Normal { .. } => EXIT_OK,
        Outcome::FuelExhausted { .. } => EXIT_FUEL,
        Outcome::Stuck { .. } => EXIT_STUCK,
    }
}

fn outcome_json(engine: &str, outcome: &Outcome) -> serde_json::Value {
    match outcome {
        Outcome::Normal { result, steps } => json!({
            "engine": engine,
            "outcome": outcome.kind(),
            "result": result.to_string(),
            "steps": steps,
        }),
        Outcome::FuelExhausted { last_state, steps } => json!({
            "engine": engine,
            "outcome": outcome.kind(),
            "last_state": last_state,
            "steps": steps,
        }),
        Outcome::Stuck { reason } => json!({
            "engine": engine,
            "outcome": outcome.kind(),
            "reason": reason,
        }),
    }
}

fn print_event_text(out: &mut impl Write, e: &Event) -> io::Result<()> {
    let phase = match e.phase {
        engine::Phase::Load => "load",
        engine::Phase::Reduce => "reduce",
        engine::Phase::Readback => "readback",
    };
    writeln!(out, "{:>4} {:<8} {:<9} {}", e.step, phase, e.rule, e.state)
}

fn eval(name: &str, fuel: u64, trace: bool, format: Format, t: &Term) -> Result<u8> {
    let run = engine::evaluate(t, name, fuel, trace)?;
    let mut out = io::stdout().lock();
    if let Some(tr) = &run.trace {
        for e in &tr.events {
            match format {
                Format::Text => print_event_text(&mut out, e)?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(e)?)?,
            }
        }
    }
    match format {
        Format::Text => match &run.outcome {
            Outcome::Normal { result, steps } => {
                writeln!(out, "{result}")?;
                writeln!(
                    out,
                    "steps: {} reductions ({} beta), {} readback",
                    steps.reductions, steps.beta, steps.readback
                )?;
            }
            Outcome::FuelExhausted { last_state, steps } => {
                writeln!(out, "fuel exhausted after {} beta steps", steps.beta)?;
                writeln!(out, "last state: {last_state}")?;
            }
            Outcome::Stuck { reason } => writeln!(out, "stuck: {reason}")?,
        },
        Format::Json => writeln!(out, "{}", outcome_json(name, &run.outcome))?,
    }
    Ok(exit_code(&run.outcome))
}

fn compare(spec: &str, fuel: u64, t: &Term) -> Result<u8> {
    let engines = engine::select(spec)?;
    anyhow::ensure!(engines.len() >= 2, "compare needs at least two engines");
    let report = engine::compare(t, &engines, fuel);
    let mut out = io::stdout().lock();
    for (k, group) in report.groups.iter().enumerate() {
        let members: Vec<&Entry> = group.iter().map(|&i| &report.entries[i]).collect();
        writeln!(out, "group {}: {}", k + 1, members[0].outcome)?;
        for m in members {
            writeln!(out, "  {:<16} {:<10} {}", m.engine, m.strategy, m.outcome.kind())?;
        }
    }
    if report.agreement() {
        writeln!(out, "agreement")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "disagreement")?;
        Ok(EXIT_DISAGREE)
    }
}
