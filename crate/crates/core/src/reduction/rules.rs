//! The rewrite rules applied at a single node.

use std::fmt;

use crate::error::ReduceError;
use crate::model::{Model, TypeExpr};
use crate::syntax::{canon_prod, canon_sum, Expr, Term, Test};

/// Largest τ̄ sum the (ττ̄) rule will enumerate subsets of.
pub const SUBSET_GUARD: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Beta,
    TauBar,
    Tau,
    TauTauBar,
    ProdSum,
    TauBarSum,
    OmegaLam,
    OmegaApp,
    OmegaTau,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::Beta,
        RuleId::TauBar,
        RuleId::Tau,
        RuleId::TauTauBar,
        RuleId::ProdSum,
        RuleId::TauBarSum,
        RuleId::OmegaLam,
        RuleId::OmegaApp,
        RuleId::OmegaTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Beta => "beta",
            RuleId::TauBar => "taubar",
            RuleId::Tau => "tau",
            RuleId::TauTauBar => "tautaubar",
            RuleId::ProdSum => "prodsum",
            RuleId::TauBarSum => "taubarsum",
            RuleId::OmegaLam => "omega-lam",
            RuleId::OmegaApp => "omega-app",
            RuleId::OmegaTau => "omega-tau",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// τ_β(N) with the convention τ_ω(N) := ε.
fn tau_or_eps(label: &TypeExpr, n: &Term) -> Test {
    if label.is_omega() {
        Test::eps()
    } else {
        Test::tau(label.clone(), n.clone())
    }
}

// ε̄_β with the convention ε̄_ω := 0.
fn ebar_or_zero(label: &TypeExpr) -> Term {
    if label.is_omega() {
        Term::zero()
    } else {
        Term::ebar(label.clone())
    }
}

/// The rule that fires at the root of `e`, if any. At most one rule matches
/// any node. On canonical input the result is canonical.
pub fn root_step(e: &Expr, m: &Model) -> Result<Option<(RuleId, Expr)>, ReduceError> {
    Ok(match e {
        Expr::Term(t) => root_term(t, m)?.map(|(r, t)| (r, Expr::Term(t))),
        Expr::Test(q) => root_test(q, m)?.map(|(r, q)| (r, Expr::Test(q))),
    })
}

/// Whether some rule fires at the root, by shape alone.
pub(crate) fn is_term_redex(t: &Term) -> bool {
    match t {
        Term::App(f, _) => matches!(**f, Term::Lam(..) | Term::BarSum(_) | Term::Omega),
        Term::Lam(_, body) => **body == Term::Omega,
        Term::BarSum(es) => es.iter().any(|(_, q)| matches!(q, Test::Sum(_))),
        Term::Var(_) | Term::Omega => false,
    }
}

pub(crate) fn is_test_redex(q: &Test) -> bool {
    match q {
        Test::Tau(_, body) => matches!(**body, Term::Lam(..) | Term::BarSum(_) | Term::Omega),
        Test::Prod(v) => v.iter().any(|q| matches!(q, Test::Sum(_))),
        Test::Sum(_) => false,
    }
}

pub(crate) fn root_term(t: &Term, m: &Model) -> Result<Option<(RuleId, Term)>, ReduceError> {
    match t {
        Term::App(f, n) => match &**f {
            Term::Lam(x, body) => Ok(Some((RuleId::Beta, body.subst_canon(x, n)))),
            Term::BarSum(entries) => {
                let mut out = Vec::new();
                for (alpha, q) in entries {
                    for (beta, gamma) in m.ext_of(alpha)? {
                        // τ̄_ω(Q) is the empty sum
                        if gamma.is_omega() {
                            continue;
                        }
                        out.push((gamma, canon_prod(vec![q.clone(), tau_or_eps(&beta, n)])));
                    }
                }
                out.sort();
                Ok(Some((RuleId::TauBar, Term::BarSum(out))))
            }
            Term::Omega => Ok(Some((RuleId::OmegaApp, Term::Omega))),
            _ => Ok(None),
        },
        Term::Lam(_, body) if **body == Term::Omega => Ok(Some((RuleId::OmegaLam, Term::Omega))),
        Term::BarSum(entries) if entries.iter().any(|(_, q)| matches!(q, Test::Sum(_))) => {
            let mut out = Vec::new();
            for (alpha, q) in entries {
                match q {
                    Test::Sum(v) => out.extend(v.iter().map(|q| (alpha.clone(), q.clone()))),
                    q => out.push((alpha.clone(), q.clone())),
                }
            }
            out.sort();
            Ok(Some((RuleId::TauBarSum, Term::BarSum(out))))
        }
        _ => Ok(None),
    }
}

pub(crate) fn root_test(q: &Test, m: &Model) -> Result<Option<(RuleId, Test)>, ReduceError> {
    match q {
        Test::Tau(alpha, body) => match &**body {
            Term::Lam(x, inner) => {
                let mut out = Vec::new();
                for (beta, gamma) in m.ext_of(alpha)? {
                    out.push(tau_or_eps(&gamma, &inner.subst_canon(x, &ebar_or_zero(&beta))));
                }
                Ok(Some((RuleId::Tau, canon_prod(out))))
            }
            Term::BarSum(entries) => {
                if entries.len() > SUBSET_GUARD {
                    return Err(ReduceError::SumTooLarge(entries.len(), SUBSET_GUARD));
                }
                let mut out = Vec::new();
                for mask in 0u32..(1u32 << entries.len()) {
                    let chosen: Vec<&(TypeExpr, Test)> = entries
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, e)| e)
                        .collect();
                    let meet = TypeExpr::meet_all(chosen.iter().map(|(b, _)| b));
                    if m.leq(&meet, alpha)? {
                        out.push(canon_prod(chosen.iter().map(|(_, q)| q.clone()).collect()));
                    }
                }
                Ok(Some((RuleId::TauTauBar, canon_sum(out))))
            }
            Term::Omega => Ok(Some((RuleId::OmegaTau, Test::zero()))),
            _ => Ok(None),
        },
        Test::Prod(v) if v.iter().any(|q| matches!(q, Test::Sum(_))) => {
            let mut acc: Vec<Vec<Test>> = vec![Vec::new()];
            for q in v {
                let choices: Vec<Test> = match q {
                    Test::Sum(s) => s.clone(),
                    q => vec![q.clone()],
                };
                let mut next = Vec::with_capacity(acc.len() * choices.len());
                for prefix in &acc {
                    for c in &choices {
                        let mut p = prefix.clone();
                        p.push(c.clone());
                        next.push(p);
                    }
                }
                acc = next;
            }
            Ok(Some((RuleId::ProdSum, canon_sum(acc.into_iter().map(canon_prod).collect()))))
        }
        _ => Ok(None),
    }
}
