//! Weak-head and head reduction for the untyped lambda calculus: reduction
//! semantics, abstract machines with their readback, big-step evaluators,
//! and a harness that runs them side by side.

pub mod coalesced;
pub mod control;
pub mod derived;
pub mod engine;
pub mod env;
pub mod gen;
pub mod head;
pub mod machine;
pub mod nameless;
pub mod parse;
pub mod print;
pub mod projection;
pub mod syntax;
pub mod weak_head;

/// A pure lambda term.
pub type Term = syntax::Expr<syntax::Pure>;
/// A term that may mention `car(cdr^n tp)`.
pub type PTerm = syntax::Expr<projection::Car>;
/// A term that may mention `pick n tp`.
pub type QTerm = syntax::Expr<coalesced::Pick>;
/// A term that may mention unary indices.
pub type IxTerm = derived::IxTerm;
/// A term that may mention numeric indices.
pub type DTerm = syntax::Expr<derived::Level>;

pub use engine::{compare, evaluate, registry, Engine, Outcome, Strategy, Trace};
pub use gen::{gen_corpus, gen_term, GenConfig};
pub use parse::{parse_term, ParseError};
pub use syntax::{Expr, Name, NormalFormClass};
