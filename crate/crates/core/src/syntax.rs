//! Named lambda terms shared by every engine.
//!
//! A term is an [`Expr`] over an atom type. User programs use [`Pure`], an
//! uninhabited atom, so they can only contain variables, applications and
//! abstractions. Engines that need extra leaves (projections out of the call
//! stack, top-level indices) instantiate `Expr` with their own atom type and
//! convert back to pure terms during readback.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::nameless::Nameless;

/// A variable (or co-variable) name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Leaves an engine may add to the term grammar.
pub trait Atom: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when the rendering has internal spaces and must be parenthesised
    /// when it appears as an operand.
    fn is_compound(&self) -> bool {
        false
    }
}

/// The atom type of user programs: there are none.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Pure {}

impl fmt::Display for Pure {
    fn fmt(&self, _: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {}
    }
}

impl Atom for Pure {}

/// A lambda term over atoms `X`.
#[derive(Clone, Debug, Hash)]
pub enum Expr<X> {
    Var(Name),
    App(Arc<Expr<X>>, Arc<Expr<X>>),
    Lam(Name, Arc<Expr<X>>),
    Atom(X),
}

impl<X: PartialEq> PartialEq for Expr<X> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Expr::Var(a), Expr::Var(b)) => a == b,
            (Expr::App(f, a), Expr::App(g, b)) => {
                (Arc::ptr_eq(f, g) || f == g) && (Arc::ptr_eq(a, b) || a == b)
            }
            (Expr::Lam(x, a), Expr::Lam(y, b)) => x == y && (Arc::ptr_eq(a, b) || a == b),
            (Expr::Atom(a), Expr::Atom(b)) => a == b,
            _ => false,
        }
    }
}

impl<X: Eq> Eq for Expr<X> {}

/// Normal-form classes of a term with respect to the weak-head and head
/// normal form grammars.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum NormalFormClass {
    /// `x v1 ... vn`: both a weak-head and a head normal form.
    Neutral,
    /// An abstraction whose body is not a head normal form.
    Whnf,
    /// Head normal form that is not a weak-head normal form. Every head normal
    /// form is either neutral or an abstraction, so `classify` never returns
    /// this; it exists so callers can match on the full lattice.
    Hnf,
    /// An abstraction `\x1...xn.N` over a neutral term.
    WhnfAndHnf,
    /// A top-level (weak-head) redex exists.
    Reducible,
}

impl fmt::Display for NormalFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormalFormClass::Neutral => "Neutral",
            NormalFormClass::Whnf => "Whnf",
            NormalFormClass::Hnf => "Hnf",
            NormalFormClass::WhnfAndHnf => "WhnfAndHnf",
            NormalFormClass::Reducible => "Reducible",
        };
        f.write_str(s)
    }
}

/// Returns an identifier not in `avoid`, derived from `hint`.
///
/// The hint itself is returned when it is free. Otherwise trailing digits
/// are stripped and the smallest numeric suffix that avoids the set is used,
/// so `fresh({x, x1}, x) == x2`.
pub fn fresh(avoid: &BTreeSet<Name>, hint: &Name) -> Name {
    if !avoid.contains(hint) {
        return hint.clone();
    }
    let base = hint.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    let base = if base.is_empty() { "x" } else { base };
    (1u64..)
        .map(|i| Name::from(format!("{base}{i}")))
        .find(|n| !avoid.contains(n))
        .expect("name space exhausted")
}

impl<X: Atom> Expr<X> {
    pub fn var(name: impl Into<Name>) -> Self {
        Expr::Var(name.into())
    }

    pub fn app(f: Expr<X>, a: Expr<X>) -> Self {
        Expr::App(Arc::new(f), Arc::new(a))
    }

    pub fn lam(x: impl Into<Name>, body: Expr<X>) -> Self {
        Expr::Lam(x.into(), Arc::new(body))
    }

    /// `head a1 ... an`, left-associated.
    pub fn apps(head: Expr<X>, args: impl IntoIterator<Item = Expr<X>>) -> Self {
        args.into_iter().fold(head, Expr::app)
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Expr::Lam(..))
    }

    /// Splits `h a1 ... an` into the head and its arguments, outermost-first.
    pub fn spine(&self) -> (&Expr<X>, Vec<&Arc<Expr<X>>>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Expr::App(f, a) = head {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Atom(_) => 1,
            Expr::App(f, a) => 1 + f.size() + a.size(),
            Expr::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Expr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Expr::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Expr::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Expr::Atom(_) => {}
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            Expr::Var(y) => x == y,
            Expr::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
            Expr::Lam(y, b) => x != y && b.occurs_free(x),
            Expr::Atom(_) => false,
        }
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            Expr::Lam(x, b) => {
                out.insert(x.clone());
                b.collect_names(out);
            }
            Expr::Atom(_) => {}
        }
    }

    pub fn contains_atom(&self, pred: &impl Fn(&X) -> bool) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::App(f, a) => f.contains_atom(pred) || a.contains_atom(pred),
            Expr::Lam(_, b) => b.contains_atom(pred),
            Expr::Atom(x) => pred(x),
        }
    }

    /// Capture-avoiding substitution `self[s/x]`.
    ///
    /// Bound variables are renamed only when a binder would actually capture a
    /// free variable of `s`.
    pub fn subst(&self, x: &Name, s: &Expr<X>) -> Expr<X> {
        self.subst_shared(x, &Arc::new(s.clone()))
    }

    /// [`Expr::subst`] where every occurrence of `x` shares the node `s`.
    pub fn subst_shared(&self, x: &Name, s: &Arc<Expr<X>>) -> Expr<X> {
        let fv = s.free_vars();
        self.subst_with(x, s, &fv).unwrap_or_else(|| self.clone())
    }

    fn subst_child(c: &Arc<Expr<X>>, x: &Name, s: &Arc<Expr<X>>, fv_s: &BTreeSet<Name>) -> Option<Arc<Expr<X>>> {
        match &**c {
            Expr::Var(y) if y == x => Some(Arc::clone(s)),
            _ => c.subst_with(x, s, fv_s).map(Arc::new),
        }
    }

    /// Returns `None` when `x` does not occur free, so untouched subterms keep
    /// their sharing.
    fn subst_with(&self, x: &Name, s: &Arc<Expr<X>>, fv_s: &BTreeSet<Name>) -> Option<Expr<X>> {
        match self {
            Expr::Var(y) if y == x => Some((**s).clone()),
            Expr::Var(_) | Expr::Atom(_) => None,
            Expr::App(f, a) => {
                let nf = Self::subst_child(f, x, s, fv_s);
                let na = Self::subst_child(a, x, s, fv_s);
                if nf.is_none() && na.is_none() {
                    return None;
                }
                let nf = nf.unwrap_or_else(|| f.clone());
                let na = na.unwrap_or_else(|| a.clone());
                Some(Expr::App(nf, na))
            }
            Expr::Lam(y, _) if y == x => None,
            Expr::Lam(y, b) => {
                if !fv_s.contains(y) {
                    let nb = Self::subst_child(b, x, s, fv_s)?;
                    return Some(Expr::Lam(y.clone(), nb));
                }
                if !b.occurs_free(x) {
                    return None;
                }
                let mut avoid = b.free_vars();
                avoid.extend(fv_s.iter().cloned());
                avoid.insert(x.clone());
                let z = fresh(&avoid, y);
                let renamed = b.subst(y, &Expr::Var(z.clone()));
                let body = renamed.subst_with(x, s, fv_s).unwrap_or(renamed);
                Some(Expr::Lam(z, Arc::new(body)))
            }
        }
    }

    /// Contracts a redex `(\x.v) v'` at the head of the application spine in
    /// place, reusing every uniquely owned node above it. Returns `false`
    /// when the head of the spine is not a redex.
    pub fn contract_spine_head(&mut self) -> bool {
        let mut depth = 0;
        let mut head: &Expr<X> = self;
        while let Expr::App(f, _) = head {
            depth += 1;
            head = f;
        }
        if depth == 0 || !head.is_lam() {
            return false;
        }
        let mut cur = self;
        for _ in 1..depth {
            match cur {
                Expr::App(f, _) => cur = Arc::make_mut(f),
                _ => unreachable!("spine shorter than measured"),
            }
        }
        let contracted = match &*cur {
            Expr::App(f, a) => match &**f {
                Expr::Lam(x, body) => body.subst_shared(x, a),
                _ => unreachable!("spine head is an abstraction"),
            },
            _ => unreachable!("spine shorter than measured"),
        };
        *cur = contracted;
        true
    }

    /// Simultaneous capture-avoiding substitution of every `(x, s)` pair.
    pub fn subst_many(&self, sigma: &[(Name, Expr<X>)]) -> Expr<X> {
        if sigma.is_empty() {
            return self.clone();
        }
        let mut fv = BTreeSet::new();
        for (_, s) in sigma {
            fv.extend(s.free_vars());
        }
        let live: Vec<&(Name, Expr<X>)> = sigma.iter().collect();
        self.subst_many_with(&live, &fv)
    }

    fn subst_many_with(&self, sigma: &[&(Name, Expr<X>)], fv: &BTreeSet<Name>) -> Expr<X> {
        match self {
            Expr::Var(y) => sigma
                .iter()
                .find(|(x, _)| x == y)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| self.clone()),
            Expr::Atom(_) => self.clone(),
            Expr::App(f, a) => Expr::App(
                Arc::new(f.subst_many_with(sigma, fv)),
                Arc::new(a.subst_many_with(sigma, fv)),
            ),
            Expr::Lam(y, b) => {
                let inner: Vec<&(Name, Expr<X>)> = sigma
                    .iter()
                    .copied()
                    .filter(|(x, _)| x != y && b.occurs_free(x))
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                if !fv.contains(y) {
                    return Expr::Lam(y.clone(), Arc::new(b.subst_many_with(&inner, fv)));
                }
                let mut avoid = b.free_vars();
                avoid.extend(fv.iter().cloned());
                avoid.extend(inner.iter().map(|(x, _)| x.clone()));
                let z = fresh(&avoid, y);
                let renamed = b.subst(y, &Expr::Var(z.clone()));
                Expr::Lam(z, Arc::new(renamed.subst_many_with(&inner, fv)))
            }
        }
    }

    /// Replaces every atom satisfying `pred` by the variable `x`.
    ///
    /// The caller must pick `x` so that no replaced occurrence sits under a
    /// binder for `x` (see [`Expr::safe_name_for`]).
    pub fn replace_atom(&self, pred: &impl Fn(&X) -> bool, x: &Name) -> Expr<X> {
        self.replace_atom_opt(pred, x).unwrap_or_else(|| self.clone())
    }

    fn replace_atom_opt(&self, pred: &impl Fn(&X) -> bool, x: &Name) -> Option<Expr<X>> {
        match self {
            Expr::Var(_) => None,
            Expr::Atom(a) => pred(a).then(|| Expr::Var(x.clone())),
            Expr::App(f, a) => {
                let nf = f.replace_atom_opt(pred, x);
                let na = a.replace_atom_opt(pred, x);
                if nf.is_none() && na.is_none() {
                    return None;
                }
                Some(Expr::App(
                    nf.map(Arc::new).unwrap_or_else(|| f.clone()),
                    na.map(Arc::new).unwrap_or_else(|| a.clone()),
                ))
            }
            Expr::Lam(y, b) => b
                .replace_atom_opt(pred, x)
                .map(|nb| Expr::Lam(y.clone(), Arc::new(nb))),
        }
    }

    /// Picks a name for the atoms matching `pred` so that turning them into
    /// variables neither clashes with a free variable nor gets captured by an
    /// inner binder. `hint` is used verbatim when that is safe.
    pub fn safe_name_for(&self, pred: &impl Fn(&X) -> bool, hint: &Name) -> Name {
        let fv = self.free_vars();
        if !fv.contains(hint) && !self.atom_under_binder(pred, hint) {
            return hint.clone();
        }
        fresh(&self.all_names(), hint)
    }

    fn atom_under_binder(&self, pred: &impl Fn(&X) -> bool, x: &Name) -> bool {
        match self {
            Expr::Var(_) | Expr::Atom(_) => false,
            Expr::App(f, a) => f.atom_under_binder(pred, x) || a.atom_under_binder(pred, x),
            Expr::Lam(y, b) if y == x => b.contains_atom(pred),
            Expr::Lam(_, b) => b.atom_under_binder(pred, x),
        }
    }

    /// Rewrites atoms with `f`, which may fail.
    pub fn try_map_atoms<Y: Atom, E>(&self, f: &impl Fn(&X) -> Result<Expr<Y>, E>) -> Result<Expr<Y>, E> {
        Ok(match self {
            Expr::Var(x) => Expr::Var(x.clone()),
            Expr::App(g, a) => Expr::App(Arc::new(g.try_map_atoms(f)?), Arc::new(a.try_map_atoms(f)?)),
            Expr::Lam(x, b) => Expr::Lam(x.clone(), Arc::new(b.try_map_atoms(f)?)),
            Expr::Atom(a) => f(a)?,
        })
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Expr<X>) -> bool {
        Nameless::from_expr(self) == Nameless::from_expr(other)
    }

    pub fn classify(&self) -> NormalFormClass {
        let (head, args) = self.spine();
        match head {
            Expr::Lam(..) if !args.is_empty() => NormalFormClass::Reducible,
            Expr::Lam(..) => {
                if self.is_hnf() {
                    NormalFormClass::WhnfAndHnf
                } else {
                    NormalFormClass::Whnf
                }
            }
            _ => NormalFormClass::Neutral,
        }
    }

    /// `N ::= x | N v` (atoms count as heads).
    pub fn is_neutral(&self) -> bool {
        !matches!(self.spine().0, Expr::Lam(..))
    }

    /// `WHNF ::= N | \x.v`
    pub fn is_whnf(&self) -> bool {
        self.is_lam() || self.is_neutral()
    }

    /// `HNF ::= N | \x.HNF`
    pub fn is_hnf(&self) -> bool {
        let mut t = self;
        while let Expr::Lam(_, b) = t {
            t = b;
        }
        t.is_neutral()
    }
}

impl Expr<Pure> {
    /// Embeds a pure term into any atom extension.
    pub fn widen<Y: Atom>(&self) -> Expr<Y> {
        self.try_map_atoms::<Y, std::convert::Infallible>(&|a| match *a {})
            .unwrap_or_else(|e| match e {})
    }
}
