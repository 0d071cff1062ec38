//! Seeded random terms and membership queries, exhaustive βΩ-normal forms,
//! and shrinking of counterexamples.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::ModelError;
use crate::model::{type_universe, Factor, Model, TypeExpr};
use crate::semantics::{close_with, Env};
use crate::syntax::{Name, Term, Test};

/// Free variables available to generated open terms.
pub const FREE: [&str; 2] = ["u", "v"];

/// Non-ω elements of the depth-`depth` universe, used as labels.
pub fn labels(m: &Model, depth: usize) -> Result<Vec<TypeExpr>, ModelError> {
    Ok(type_universe(m, depth)?.into_iter().filter(|t| !t.is_omega()).collect())
}

/// A membership question `env ⊢ term : target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub env: Env,
    pub term: Term,
    pub target: TypeExpr,
}

impl Query {
    /// `τ_target(term[ε̄_α/x])`.
    pub fn test(&self) -> Test {
        Test::tau(self.target.clone(), close_with(&self.term, &self.env))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    /// Upper bound on constructors.
    pub size: usize,
    /// Whether τ̄ sums may appear inside terms.
    pub tests: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { size: 7, tests: false }
    }
}

fn binder(depth: usize) -> Name {
    // a small pool so that shadowing happens
    ["x", "y", "z"][depth % 3].into()
}

/// A random term over `scope` with at most `size` constructors.
pub fn random_term(rng: &mut impl Rng, scope: &[Name], size: usize, labels: &[TypeExpr], tests: bool) -> Term {
    gen_term(rng, &mut scope.to_vec(), size.max(1), labels, tests)
}

fn gen_term(rng: &mut impl Rng, scope: &mut Vec<Name>, size: usize, labels: &[TypeExpr], tests: bool) -> Term {
    if size <= 1 {
        return leaf(rng, scope, labels, tests);
    }
    let roll = rng.gen_range(0..10);
    if roll < 4 || scope.is_empty() {
        let x = binder(scope.len());
        scope.push(x.clone());
        let b = gen_term(rng, scope, size - 1, labels, tests);
        scope.pop();
        Term::Lam(x, b.into())
    } else if roll < 9 || size < 4 || !tests || labels.is_empty() {
        if size < 3 {
            return leaf(rng, scope, labels, tests);
        }
        let left = rng.gen_range(1..size - 1);
        let f = gen_term(rng, scope, left, labels, tests);
        let a = gen_term(rng, scope, size - 1 - left, labels, tests);
        Term::app(f, a)
    } else {
        let l = labels.choose(rng).expect("non-empty").clone();
        let body = gen_term(rng, scope, size - 2, labels, tests);
        let l2 = labels.choose(rng).expect("non-empty").clone();
        Term::bar(l, Test::tau(l2, body))
    }
}

fn leaf(rng: &mut impl Rng, scope: &[Name], labels: &[TypeExpr], tests: bool) -> Term {
    match scope.choose(rng) {
        Some(x) if rng.gen_ratio(9, 10) => Term::Var(x.clone()),
        _ if tests && !labels.is_empty() && rng.gen_bool(0.5) => {
            Term::ebar(labels.choose(rng).expect("non-empty").clone())
        }
        Some(x) => Term::Var(x.clone()),
        None => Term::Omega,
    }
}

/// A random query: a term over a random subset of [`FREE`], environment
/// types drawn from `labels` or ω, and a non-ω target.
pub fn random_query(rng: &mut impl Rng, labels: &[TypeExpr], cfg: GenConfig) -> Query {
    let n = rng.gen_range(0..=FREE.len());
    let scope: Vec<Name> = FREE[..n].iter().map(|&x| x.into()).collect();
    let size = rng.gen_range(1..=cfg.size);
    let term = random_term(rng, &scope, size, labels, cfg.tests);
    let env = scope
        .into_iter()
        .map(|x| {
            let t = if rng.gen_ratio(1, 5) { TypeExpr::omega() } else { labels.choose(rng).expect("labels").clone() };
            (x, t)
        })
        .collect();
    let target = labels.choose(rng).expect("labels").clone();
    Query { env, term, target }
}

/// Every βΩ-normal form with at most `max_size` constructors whose free
/// variables are among `free`, bound variables named by depth.
pub fn normal_forms(max_size: usize, free: &[&str]) -> Vec<Term> {
    let mut scope: Vec<Name> = free.iter().map(|&x| x.into()).collect();
    let mut out = vec![Term::Omega];
    for size in 1..=max_size {
        out.extend(lams(size, &mut scope));
    }
    out
}

// `λx⃗. y M⃗` of exactly `size` constructors.
fn lams(size: usize, scope: &mut Vec<Name>) -> Vec<Term> {
    let mut out = neutral(size, scope);
    if size >= 2 {
        let x: Name = format!("x{}", scope.len()).into();
        scope.push(x.clone());
        out.extend(lams(size - 1, scope).into_iter().map(|b| Term::Lam(x.clone(), b.into())));
        scope.pop();
    }
    out
}

// `y M₁…Mₖ` of exactly `size` constructors, arguments βΩ-normal.
fn neutral(size: usize, scope: &mut Vec<Name>) -> Vec<Term> {
    let mut out = Vec::new();
    for y in scope.clone() {
        spines(Term::Var(y), size - 1, scope, &mut out);
    }
    out
}

fn spines(head: Term, left: usize, scope: &mut Vec<Name>, out: &mut Vec<Term>) {
    if left == 0 {
        out.push(head);
        return;
    }
    // one App node plus an argument of size `a`
    for a in 1..left {
        let mut args = lams(a, scope);
        if a == 1 {
            args.push(Term::Omega);
        }
        for arg in args {
            spines(Term::app(head.clone(), arg), left - 1 - a, scope, out);
        }
    }
}

/// One-step shrinks of a term: Ω, immediate subterms, and shrinks of a
/// single child.
pub fn shrink_term(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if *t != Term::Omega {
        out.push(Term::Omega);
    }
    match t {
        Term::Var(_) | Term::Omega => {}
        Term::Lam(x, b) => {
            out.push((**b).clone());
            out.extend(shrink_term(b).into_iter().map(|b| Term::Lam(x.clone(), b.into())));
        }
        Term::App(f, a) => {
            out.push((**f).clone());
            out.push((**a).clone());
            out.extend(shrink_term(f).into_iter().map(|f| Term::app(f, (**a).clone())));
            out.extend(shrink_term(a).into_iter().map(|a| Term::app((**f).clone(), a)));
        }
        Term::BarSum(es) => {
            for i in 0..es.len() {
                let mut fewer = es.clone();
                fewer.remove(i);
                out.push(Term::BarSum(fewer));
            }
            for (i, (l, q)) in es.iter().enumerate() {
                for l2 in shrink_type(l) {
                    if !l2.is_omega() {
                        let mut v = es.clone();
                        v[i] = (l2, q.clone());
                        out.push(Term::BarSum(v));
                    }
                }
                for q2 in shrink_test(q) {
                    let mut v = es.clone();
                    v[i] = (l.clone(), q2);
                    out.push(Term::BarSum(v));
                }
            }
        }
    }
    out
}

pub fn shrink_test(q: &Test) -> Vec<Test> {
    let mut out = Vec::new();
    match q {
        Test::Sum(v) | Test::Prod(v) => {
            let mk = if matches!(q, Test::Sum(_)) { Test::Sum } else { Test::Prod };
            for i in 0..v.len() {
                out.push(v[i].clone());
                let mut fewer = v.clone();
                fewer.remove(i);
                out.push(mk(fewer));
                for q2 in shrink_test(&v[i]) {
                    let mut w = v.clone();
                    w[i] = q2;
                    out.push(mk(w));
                }
            }
        }
        Test::Tau(l, m) => {
            out.push(Test::eps());
            for l2 in shrink_type(l) {
                if !l2.is_omega() {
                    out.push(Test::tau(l2, (**m).clone()));
                }
            }
            out.extend(shrink_term(m).into_iter().map(|m| Test::tau(l.clone(), m)));
        }
    }
    out
}

/// Smaller types: ω, single factors, and the components of arrows.
pub fn shrink_type(t: &TypeExpr) -> Vec<TypeExpr> {
    let mut out = Vec::new();
    if t.is_omega() {
        return out;
    }
    out.push(TypeExpr::omega());
    if t.len() > 1 {
        out.extend(t.factors().map(|f| TypeExpr::from_factors([f.clone()])));
    }
    for f in t.factors() {
        if let Factor::Arrow(s, g) = f {
            out.push((**s).clone());
            out.push((**g).clone());
            if !s.is_omega() {
                out.push(TypeExpr::arrow(TypeExpr::omega(), (**g).clone()));
            }
        }
    }
    out
}

/// One-step shrinks of a query: term, target and each environment type.
pub fn shrink_query(q: &Query) -> Vec<Query> {
    let mut out: Vec<Query> =
        shrink_term(&q.term).into_iter().map(|term| Query { term, ..q.clone() }).collect();
    for t in shrink_type(&q.target) {
        if !t.is_omega() {
            out.push(Query { target: t, ..q.clone() });
        }
    }
    for (i, (_, a)) in q.env.iter().enumerate() {
        for a2 in shrink_type(a) {
            let mut env = q.env.clone();
            env[i].1 = a2;
            out.push(Query { env, ..q.clone() });
        }
    }
    out
}

/// Greedy minimisation: repeatedly moves to the first shrink on which
/// `fails` still holds.
pub fn minimize<T: Clone>(start: T, shrinks: impl Fn(&T) -> Vec<T>, mut fails: impl FnMut(&T) -> bool) -> T {
    let mut cur = start;
    // the shrink relation is well-founded, the bound only guards the cost
    for _ in 0..1000 {
        match shrinks(&cur).into_iter().find(|c| fails(c)) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximants::is_bohm_normal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_forms_are_normal_and_distinct() {
        let nfs = normal_forms(5, &["u"]);
        assert!(nfs.iter().all(is_bohm_normal));
        let keys: std::collections::BTreeSet<Term> = nfs.iter().map(Term::alpha_key).collect();
        assert_eq!(keys.len(), nfs.len());
        assert!(nfs.iter().all(|t| t.size() <= 5));
        let small = normal_forms(3, &["u"]);
        assert!(small.contains(&Term::app(Term::var("u"), Term::Omega)));
        assert!(small.contains(&Term::lam("x1", Term::var("x1"))));
    }

    #[test]
    fn generation_is_seeded() {
        let m = crate::model::builtin::load("dinf").unwrap();
        let ls = labels(&m, 2).unwrap();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..20).map(|_| random_query(&mut rng, &ls, GenConfig::default())).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
        for q in run() {
            assert!(q.term.size() <= 7);
            let fv = q.term.free_vars();
            assert!(fv.iter().all(|x| q.env.iter().any(|(y, _)| y == x)));
        }
    }

    #[test]
    fn minimize_reaches_a_local_minimum() {
        let t = Term::app(Term::lam("x", Term::app(Term::var("x"), Term::var("x"))), Term::var("u"));
        // smallest term still mentioning u
        let min = minimize(t, shrink_term, |c| c.free_vars().contains("u"));
        assert_eq!(min, Term::var("u"));
    }
}
