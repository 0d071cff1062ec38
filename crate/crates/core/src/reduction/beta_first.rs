//! Splitting a converging reduction into a β prefix followed by test rules.

use super::{enumerate_steps, eval, EvalOptions, Outcome, RuleId, Step};
use crate::error::ReduceError;
use crate::model::Model;
use crate::syntax::Expr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaSplit {
    pub beta: Vec<Step>,
    pub tests: Vec<Step>,
    /// False when the β-free part ends in refutation.
    pub converged: bool,
}

impl BetaSplit {
    pub fn len(&self) -> usize {
        self.beta.len() + self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// β redexes not nested inside another β redex, in depth-first order.
fn outermost_beta(e: &Expr, m: &Model) -> Result<Vec<Step>, ReduceError> {
    let all: Vec<Step> =
        enumerate_steps(e, m)?.into_iter().filter(|s| s.rule == RuleId::Beta).collect();
    let outer = all
        .iter()
        .filter(|s| !all.iter().any(|o| o.path.0.len() < s.path.0.len() && s.path.0.starts_with(&o.path.0)))
        .cloned()
        .collect();
    Ok(outer)
}

/// Searches for `e →β* L` followed by a β-free convergence or refutation
/// from `L`, with at
/// most `budget` steps in total. β redexes are contracted round-robin among
/// the outermost ones, and after each contraction a β-free evaluation is
/// attempted.
pub fn split_beta_first(e: &Expr, m: &Model, budget: usize) -> Result<Option<BetaSplit>, ReduceError> {
    let mut cur = e.canonicalize();
    let mut beta = Vec::new();
    let mut turn = 0usize;
    loop {
        let left = budget.saturating_sub(beta.len());
        let opts = EvalOptions { fuel: left, trace: true, forbid_beta: true };
        match eval(&cur, m, opts)? {
            Outcome::Converged { trace, .. } => {
                return Ok(Some(BetaSplit { beta, tests: trace, converged: true }))
            }
            Outcome::Refuted { trace, .. } => {
                return Ok(Some(BetaSplit { beta, tests: trace, converged: false }))
            }
            Outcome::FuelExhausted { .. } => {}
        }
        if left == 0 {
            return Ok(None);
        }
        let redexes = outermost_beta(&cur, m)?;
        if redexes.is_empty() {
            return Ok(None);
        }
        let s = redexes[turn % redexes.len()].clone();
        turn += 1;
        cur = s.result.clone();
        beta.push(s);
    }
}
