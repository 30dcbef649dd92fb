//! Deterministic generation of random closed terms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::Name;
use crate::Term;

const POOL: [&str; 8] = ["x", "y", "z", "w", "u", "v", "f", "g"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Upper bound on [`Expr::size`](crate::Expr::size). Values below 2 are
    /// raised to 2, the size of the smallest closed term.
    pub max_size: usize,
    /// How many distinct binder names to draw from; small pools make
    /// shadowing common.
    pub width: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(max_size: usize, seed: u64) -> Self {
        GenConfig { max_size, width: 3, seed }
    }
}

fn pool_name(i: usize) -> Name {
    match POOL.get(i) {
        Some(s) => Name::from(*s),
        None => Name::from(format!("x{i}")),
    }
}

struct Generator<'a> {
    rng: &'a mut ChaCha8Rng,
    width: usize,
}

impl Generator<'_> {
    /// Smallest term that fits in `scope`.
    fn min_size(scope: &[Name]) -> usize {
        if scope.is_empty() {
            2
        } else {
            1
        }
    }

    /// A term of size at most `budget`, closed under `scope`.
    fn term(&mut self, budget: usize, scope: &mut Vec<Name>) -> Term {
        let min = Self::min_size(scope);
        debug_assert!(budget >= min);
        let can_var = !scope.is_empty();
        let can_lam = budget >= 2;
        let can_app = budget >= 1 + 2 * min;
        // weights shift from leaves to inner nodes as the budget grows
        let w_var = if can_var { if budget <= 3 { 4 } else { 1 } } else { 0 };
        let w_lam = if can_lam { 3 } else { 0 };
        let w_app = if can_app { 5 } else { 0 };
        let pick = self.rng.gen_range(0..w_var + w_lam + w_app);
        if pick < w_var {
            let i = self.rng.gen_range(0..scope.len());
            Term::Var(scope[i].clone())
        } else if pick < w_var + w_lam {
            let x = pool_name(self.rng.gen_range(0..self.width));
            scope.push(x.clone());
            let body = self.term(budget - 1, scope);
            scope.pop();
            Term::lam(x, body)
        } else {
            let left = self.rng.gen_range(min..=budget - 1 - min);
            let f = self.term(left, scope);
            let rest = budget - 1 - f.size();
            let right = self.rng.gen_range(min..=rest);
            let a = self.term(right, scope);
            Term::app(f, a)
        }
    }
}

fn generate(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Term {
    let mut g = Generator { rng, width: cfg.width.max(1) };
    g.term(cfg.max_size.max(2), &mut Vec::new())
}

/// One closed term of size at most `cfg.max_size`, determined by the seed.
pub fn gen_term(cfg: &GenConfig) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    generate(&mut rng, cfg)
}

/// `count` terms drawn from one stream; the first is [`gen_term`]'s.
pub fn gen_corpus(cfg: &GenConfig, count: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..count).map(|_| generate(&mut rng, cfg)).collect()
}
