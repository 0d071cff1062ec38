//! Direct approximants, the approximant sequence of a pure term, and
//! approximant witnesses for memberships.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::SemanticsError;
use crate::model::{Model, TypeExpr};
use crate::reduction::{eval, EvalOptions};
use crate::semantics::{close_with, decide_term, CheckOptions, Env};
use crate::syntax::{Expr, Term, Test};

fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut head = t;
    let mut args = Vec::new();
    while let Term::App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    (head, args)
}

fn strip_lams(t: &Term) -> (Vec<&str>, &Term) {
    let mut xs = Vec::new();
    let mut t = t;
    while let Term::Lam(x, b) = t {
        xs.push(&**x);
        t = b;
    }
    (xs, t)
}

fn rebuild(xs: &[&str], head: Term, args: impl IntoIterator<Item = Term>) -> Term {
    let body = Term::apps(head, args);
    xs.iter().rev().fold(body, |b, x| Term::lam(x, b))
}

/// `Ω`, or `λx⃗. y M₁…Mₖ` with every `Mⱼ` of the same shape.
pub fn is_bohm_normal(t: &Term) -> bool {
    if *t == Term::Omega {
        return true;
    }
    let (_, body) = strip_lams(t);
    let (head, args) = spine(body);
    matches!(head, Term::Var(_)) && args.into_iter().all(is_bohm_normal)
}

/// `ω(M)`: `Ω` unless `M` is head normal, otherwise the head variable
/// applied to the direct approximants of the arguments.
pub fn direct_approximant(t: &Term) -> Result<Term, SemanticsError> {
    if !t.is_pure() {
        return Err(SemanticsError::NotPure);
    }
    Ok(omega_of(t))
}

fn omega_of(t: &Term) -> Term {
    let (xs, body) = strip_lams(t);
    let (head, args) = spine(body);
    match head {
        Term::Var(_) => rebuild(&xs, head.clone(), args.into_iter().map(omega_of)),
        _ => Term::Omega,
    }
}

/// One normal-order step of a pure term: the head redex if there is one,
/// otherwise the first argument that can step.
pub fn normal_step(t: &Term) -> Option<Term> {
    let (xs, body) = strip_lams(t);
    if !xs.is_empty() && *body == Term::Omega {
        return Some(Term::Omega);
    }
    let mut head = body;
    let mut args: Vec<&Arc<Term>> = Vec::new();
    while let Term::App(f, a) = head {
        args.push(a);
        head = f;
    }
    args.reverse();
    match head {
        Term::Lam(x, b) if !args.is_empty() => {
            let reduct = b.subst(x, args[0]);
            Some(rebuild_shared(&xs, reduct, &args[1..]))
        }
        Term::Omega if !args.is_empty() => Some(rebuild(&xs, Term::Omega, [])),
        Term::Var(_) => {
            for (i, a) in args.iter().enumerate() {
                if let Some(a2) = normal_step(a) {
                    let mut new_args: Vec<Arc<Term>> = args.iter().map(|a| Arc::clone(a)).collect::<Vec<_>>();
                    new_args[i] = Arc::new(a2);
                    let refs: Vec<&Arc<Term>> = new_args.iter().collect();
                    return Some(rebuild_shared(&xs, head.clone(), &refs));
                }
            }
            None
        }
        _ => None,
    }
}

fn rebuild_shared(xs: &[&str], head: Term, args: &[&Arc<Term>]) -> Term {
    let body = args.iter().fold(head, |f, a| Term::App(Arc::new(f), Arc::clone(a)));
    xs.iter().rev().fold(body, |b, x| Term::lam(x, b))
}

/// The approximant chain of a pure term: direct approximants along its
/// normal-order reduction, without repetitions.
pub struct Approximants {
    cur: Option<Term>,
    steps_left: usize,
    seen: BTreeSet<Term>,
}

impl Iterator for Approximants {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            let t = self.cur.take()?;
            if self.steps_left > 0 {
                self.steps_left -= 1;
                self.cur = normal_step(&t);
            }
            let a = omega_of(&t);
            if self.seen.insert(a.alpha_key()) {
                return Some(a);
            }
        }
    }
}

/// Approximants met within `fuel` reduction steps.
pub fn approximants(t: &Term, fuel: usize) -> Result<Approximants, SemanticsError> {
    if !t.is_pure() {
        return Err(SemanticsError::NotPure);
    }
    Ok(Approximants { cur: Some(t.canonicalize()), steps_left: fuel, seen: BTreeSet::new() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApproxVerdict {
    WitnessFound { approximant: Term, index: usize },
    NoneWithinFuel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxReport {
    pub verdict: ApproxVerdict,
    pub examined: usize,
    /// Approximants on which the type checker and the β-free test run
    /// disagree.
    pub disagreements: Vec<Term>,
}

/// Looks for an approximant of `t` that has `target` under `env`, among the
/// first `budget` approximants met within `fuel` reduction steps. Each
/// approximant is checked both by derivation search and by running its test
/// without β.
pub fn approximability_check(
    m: &Model,
    t: &Term,
    env: &Env,
    target: &TypeExpr,
    fuel: usize,
    budget: usize,
    opts: CheckOptions,
) -> Result<ApproxReport, SemanticsError> {
    let target = m.normalize(target)?;
    let mut examined = 0;
    let mut disagreements = Vec::new();
    for (index, s) in approximants(t, fuel)?.take(budget).enumerate() {
        examined += 1;
        let by_type = approximant_has(m, &s, env, &target, opts)?;
        let by_test = approximant_passes(m, &s, env, &target, fuel)?;
        if by_type != by_test {
            disagreements.push(s.clone());
        }
        if by_type && by_test {
            return Ok(ApproxReport {
                verdict: ApproxVerdict::WitnessFound { approximant: s, index },
                examined,
                disagreements,
            });
        }
    }
    Ok(ApproxReport { verdict: ApproxVerdict::NoneWithinFuel, examined, disagreements })
}

/// Derivation search on a βΩ-normal form, with a depth budget covering
/// its size.
pub fn approximant_has(
    m: &Model,
    s: &Term,
    env: &Env,
    target: &TypeExpr,
    opts: CheckOptions,
) -> Result<bool, SemanticsError> {
    let opts = CheckOptions { depth: opts.depth.max(2 * s.size() + 2), ..opts };
    decide_term(m, env, s, target, opts)
}

/// `τ_target(s[ε̄_α/x])` converges without β steps.
pub fn approximant_passes(
    m: &Model,
    s: &Term,
    env: &Env,
    target: &TypeExpr,
    fuel: usize,
) -> Result<bool, SemanticsError> {
    let target = m.normalize(target)?;
    if target.is_omega() {
        return Ok(true);
    }
    let q = Test::tau(target, close_with(s, env));
    let opts = EvalOptions { fuel, trace: false, forbid_beta: true };
    Ok(eval(&Expr::Test(q), m, opts)?.is_converged())
}

#[cfg(test)]
mod tests;
