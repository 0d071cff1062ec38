//! Intersection-type membership for terms and tests, the direct
//! interpretation by enumeration, and the test-based definability oracle.

mod derive;
mod interp;
mod verify;

pub use derive::{check, check_term, check_test, decide_term, CheckOptions};
pub use interp::{interp_enumerate, interp_member, Interp};
pub use verify::verify;

use std::fmt;

use crate::error::SemanticsError;
use crate::model::{Model, TypeExpr};
use crate::reduction::{eval, EvalOptions, Outcome};
use crate::syntax::{Expr, Name, Term, Test};

/// Ordered variable bindings; later bindings shadow earlier ones.
pub type Env = Vec<(Name, TypeExpr)>;

pub fn lookup<'e>(env: &'e Env, x: &str) -> Option<&'e TypeExpr> {
    env.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgment {
    Term { env: Env, subject: Term, target: TypeExpr },
    /// Tests carry no type.
    Test { env: Env, subject: Test },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Every subject has type ω.
    Top,
    /// `x:α ⊢ x:α`, with weakening.
    Axiom,
    /// From `M:β` and `β ≤ α` infer `M:α`.
    Sub,
    /// ∧-introduction over any number of premises.
    Meet,
    Lam,
    App,
    /// τ̄ sum typed by its `index`-th label.
    Bar { index: usize },
    Tau,
    Prod,
    Sum { index: usize },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Top => f.write_str("top"),
            Rule::Axiom => f.write_str("ax"),
            Rule::Sub => f.write_str("sub"),
            Rule::Meet => f.write_str("meet"),
            Rule::Lam => f.write_str("lam"),
            Rule::App => f.write_str("app"),
            Rule::Bar { index } => write!(f, "bar{index}"),
            Rule::Tau => f.write_str("tau"),
            Rule::Prod => f.write_str("prod"),
            Rule::Sum { index } => write!(f, "sum{index}"),
        }
    }
}

/// A derivation tree. `target` is absent exactly for test judgments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub env: Env,
    pub subject: Expr,
    pub target: Option<TypeExpr>,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    fn fmt_indent(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let env: Vec<String> = self.env.iter().map(|(x, t)| format!("{x}:{t}")).collect();
        write!(f, "{:indent$}{} |- {}", "", env.join(", "), self.subject)?;
        if let Some(t) = &self.target {
            write!(f, " : {t}")?;
        }
        writeln!(f, "  [{}]", self.rule)?;
        for p in &self.premises {
            p.fmt_indent(f, indent + 2)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indent(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Derivable(Derivation),
    NotFound,
}

impl Verdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Verdict::Derivable(_))
    }
}

/// `M[ε̄_α₁/x₁, …]`, with `ε̄_ω` read as `0t`.
pub fn close_with(m: &Term, env: &Env) -> Term {
    let mut out = m.clone();
    for (x, t) in env {
        let arg = if t.is_omega() { Term::zero() } else { Term::ebar(t.clone()) };
        out = out.subst(x, &arg);
    }
    out
}

/// Evaluates `τ_target(M[ε̄_α/x])`.
pub fn oracle(
    m: &Model,
    term: &Term,
    env: &Env,
    target: &TypeExpr,
    fuel: usize,
) -> Result<Outcome, SemanticsError> {
    if let Some(x) = term.free_vars().into_iter().find(|x| lookup(env, x).is_none()) {
        return Err(SemanticsError::Unbound(x.to_string()));
    }
    let target = m.normalize(target)?;
    if target.is_omega() {
        return Ok(Outcome::Converged { result: Expr::Test(Test::eps()), trace: vec![], steps: 0 });
    }
    let env: Env = env.iter().map(|(x, t)| Ok((x.clone(), m.normalize(t)?))).collect::<Result<_, SemanticsError>>()?;
    let q = Test::tau(target, close_with(term, &env));
    Ok(eval(&Expr::Test(q), m, EvalOptions::new(fuel))?)
}

#[cfg(test)]
mod tests;
