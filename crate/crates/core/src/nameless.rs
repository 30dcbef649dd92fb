//! De Bruijn view of named terms, used to decide alpha-equivalence.

use crate::syntax::{Atom, Expr, Name};

/// A term with bound variables replaced by their binder distance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Nameless<X> {
    Bound(usize),
    Free(Name),
    App(Box<Nameless<X>>, Box<Nameless<X>>),
    Lam(Box<Nameless<X>>),
    Atom(X),
}

impl<X: Atom> Nameless<X> {
    pub fn from_expr(e: &Expr<X>) -> Self {
        let mut scope = Vec::new();
        Self::convert(e, &mut scope)
    }

    fn convert(e: &Expr<X>, scope: &mut Vec<Name>) -> Self {
        match e {
            Expr::Var(x) => match scope.iter().rev().position(|y| y == x) {
                Some(i) => Nameless::Bound(i),
                None => Nameless::Free(x.clone()),
            },
            Expr::App(f, a) => Nameless::App(
                Box::new(Self::convert(f, scope)),
                Box::new(Self::convert(a, scope)),
            ),
            Expr::Lam(x, b) => {
                scope.push(x.clone());
                let body = Self::convert(b, scope);
                scope.pop();
                Nameless::Lam(Box::new(body))
            }
            Expr::Atom(a) => Nameless::Atom(a.clone()),
        }
    }
}
