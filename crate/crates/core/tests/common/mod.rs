#![allow(dead_code)]

use std::collections::BTreeSet;

use headlab::{gen_term, Expr, GenConfig, Name, Term};
use proptest::prelude::*;

pub const NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn t(s: &str) -> Term {
    headlab::parse_term(s).unwrap()
}

/// Closed terms from the library generator, size at most `max`.
pub fn closed(max: usize) -> impl Strategy<Value = Term> {
    (2..=max, any::<u64>()).prop_map(|(n, seed)| gen_term(&GenConfig::new(n, seed)))
}

/// Possibly open terms over a small name pool, so capture and shadowing are
/// common.
pub fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(NAMES.to_vec()).prop_map(Term::var);
    leaf.prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            (prop::sample::select(NAMES.to_vec()), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)),
        ]
    })
}

/// Locally nameless form: bound variables are binder distances, free
/// variables keep their names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Bound(usize),
    Free(String),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

pub fn to_db(t: &Term) -> Db {
    fn go(t: &Term, scope: &mut Vec<String>) -> Db {
        match t {
            Expr::Var(x) => match scope.iter().rev().position(|y| y == x.as_str()) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.as_str().to_string()),
            },
            Expr::Lam(x, b) => {
                scope.push(x.as_str().to_string());
                let body = go(b, scope);
                scope.pop();
                Db::Lam(Box::new(body))
            }
            Expr::App(f, a) => Db::App(Box::new(go(f, scope)), Box::new(go(a, scope))),
            Expr::Atom(a) => match *a {},
        }
    }
    go(t, &mut Vec::new())
}

/// `t[s/x]` on locally nameless terms. Free variables of `s` are names and
/// its bound variables are relative to its own binders, so no shifting or
/// renaming is needed.
pub fn db_subst(t: &Db, x: &str, s: &Db) -> Db {
    match t {
        Db::Free(y) if y == x => s.clone(),
        Db::Free(_) | Db::Bound(_) => t.clone(),
        Db::Lam(b) => Db::Lam(Box::new(db_subst(b, x, s))),
        Db::App(f, a) => Db::App(Box::new(db_subst(f, x, s)), Box::new(db_subst(a, x, s))),
    }
}

/// Alpha-equivalence by comparison of locally nameless forms.
pub fn oracle_alpha_eq(a: &Term, b: &Term) -> bool {
    to_db(a) == to_db(b)
}

/// Renames every binder to a name occurring nowhere in `t`, keeping the
/// term alpha-equivalent. `tag` keeps names from different calls apart.
pub fn rename_binders(t: &Term, tag: &str) -> Term {
    fn names(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Expr::Var(x) => {
                out.insert(x.as_str().to_string());
            }
            Expr::Lam(x, b) => {
                out.insert(x.as_str().to_string());
                names(b, out);
            }
            Expr::App(f, a) => {
                names(f, out);
                names(a, out);
            }
            Expr::Atom(a) => match *a {},
        }
    }
    fn go(t: &Term, scope: &mut Vec<(Name, Name)>, next: &mut usize, tag: &str, taken: &BTreeSet<String>) -> Term {
        match t {
            Expr::Var(x) => match scope.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => t.clone(),
            },
            Expr::Lam(x, b) => {
                let new = loop {
                    let candidate = format!("{tag}{next}");
                    *next += 1;
                    if !taken.contains(&candidate) {
                        break Name::from(candidate);
                    }
                };
                scope.push((x.clone(), new.clone()));
                let body = go(b, scope, next, tag, taken);
                scope.pop();
                Term::lam(new, body)
            }
            Expr::App(f, a) => Term::app(go(f, scope, next, tag, taken), go(a, scope, next, tag, taken)),
            Expr::Atom(a) => match *a {},
        }
    }
    let mut taken = BTreeSet::new();
    names(t, &mut taken);
    go(t, &mut Vec::new(), &mut 0, tag, &taken)
}

/// Head normal form by the grammar `HNF ::= \x.HNF | x v1 ... vn`.
pub fn oracle_is_hnf(t: &Term) -> bool {
    match t {
        Expr::Lam(_, b) => oracle_is_hnf(b),
        _ => oracle_is_neutral(t),
    }
}

/// `N ::= x | N v`
pub fn oracle_is_neutral(t: &Term) -> bool {
    match t {
        Expr::Var(_) => true,
        Expr::App(f, _) => oracle_is_neutral(f),
        _ => false,
    }
}

/// `WHNF ::= \x.v | N`
pub fn oracle_is_whnf(t: &Term) -> bool {
    matches!(t, Expr::Lam(..)) || oracle_is_neutral(t)
}

/// Legal prefixed terms `\^k.v`: free occurrences of the first `k` pool
/// names in `v` become the indices `0..k`.
pub fn legal_top() -> impl Strategy<Value = headlab::derived::TopTerm> {
    use headlab::derived::{Index, Nat, TopTerm};
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
    (0..=NAMES.len(), open_term()).prop_map(|(k, v)| TopTerm::anonymous(k, go(&v, k, &mut Vec::new())))
}
