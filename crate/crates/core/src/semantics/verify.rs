//! Rule-by-rule re-checking of derivation trees.

use super::{lookup, Derivation, Rule};
use crate::error::SemanticsError;
use crate::model::{Model, TypeExpr};
use crate::syntax::{Expr, Term, Test};

fn bad<T>(d: &Derivation, why: &str) -> Result<T, SemanticsError> {
    let target = d.target.as_ref().map(|t| format!(" : {t}")).unwrap_or_default();
    Err(SemanticsError::InvalidDerivation(format!("[{}] {}{}: {}", d.rule, d.subject, target, why)))
}

fn target(d: &Derivation) -> Result<&TypeExpr, SemanticsError> {
    match &d.target {
        Some(t) => Ok(t),
        None => bad(d, "term judgment expected"),
    }
}

fn same_context(d: &Derivation, p: &Derivation) -> Result<(), SemanticsError> {
    if p.env != d.env || p.subject != d.subject {
        return bad(d, "premise changes the subject or environment");
    }
    Ok(())
}

/// Checks every node of `d` against the typing rules.
pub fn verify(d: &Derivation, m: &Model) -> Result<(), SemanticsError> {
    let arity = |n: usize| if d.premises.len() == n { Ok(()) } else { bad(d, "wrong number of premises") };
    match d.rule {
        Rule::Top => {
            arity(0)?;
            if !m.is_omega(target(d)?)? {
                return bad(d, "only ω is given for free");
            }
        }
        Rule::Axiom => {
            arity(0)?;
            let Expr::Term(Term::Var(x)) = &d.subject else { return bad(d, "not a variable") };
            let Some(t) = lookup(&d.env, x) else { return bad(d, "unbound variable") };
            if !m.eq(t, target(d)?)? {
                return bad(d, "type differs from the environment");
            }
        }
        Rule::Sub => {
            arity(1)?;
            let p = &d.premises[0];
            same_context(d, p)?;
            if !m.leq(target(p)?, target(d)?)? {
                return bad(d, "subsumption goes downwards");
            }
        }
        Rule::Meet => {
            if d.premises.is_empty() {
                return bad(d, "empty meet");
            }
            let mut ts = Vec::new();
            for p in &d.premises {
                same_context(d, p)?;
                ts.push(target(p)?.clone());
            }
            if !m.eq(&TypeExpr::meet_all(&ts), target(d)?)? {
                return bad(d, "target is not the meet of the premises");
            }
        }
        Rule::Lam => {
            arity(1)?;
            let Expr::Term(Term::Lam(x, body)) = &d.subject else { return bad(d, "not an abstraction") };
            let p = &d.premises[0];
            let Some(((y, b), rest)) = p.env.split_last() else { return bad(d, "binder missing") };
            if y != x || rest != d.env.as_slice() || p.subject != Expr::Term((**body).clone()) {
                return bad(d, "premise is not the body under the binder");
            }
            let arrow = TypeExpr::arrow(b.clone(), target(p)?.clone());
            if !m.eq(&arrow, target(d)?)? {
                return bad(d, "target is not the arrow of the premise");
            }
        }
        Rule::App => {
            arity(2)?;
            let Expr::Term(Term::App(f, a)) = &d.subject else { return bad(d, "not an application") };
            let (pf, pa) = (&d.premises[0], &d.premises[1]);
            if pf.env != d.env || pa.env != d.env {
                return bad(d, "premise changes the environment");
            }
            if pf.subject != Expr::Term((**f).clone()) || pa.subject != Expr::Term((**a).clone()) {
                return bad(d, "premises are not the function and the argument");
            }
            let arrow = TypeExpr::arrow(target(pa)?.clone(), target(d)?.clone());
            if !m.eq(target(pf)?, &arrow)? {
                return bad(d, "function type does not match");
            }
        }
        Rule::Bar { index } => {
            arity(1)?;
            let Expr::Term(Term::BarSum(es)) = &d.subject else { return bad(d, "not a τ̄ sum") };
            let Some((l, q)) = es.get(index) else { return bad(d, "index out of range") };
            let p = &d.premises[0];
            if p.env != d.env || p.subject != Expr::Test(q.clone()) || p.target.is_some() {
                return bad(d, "premise is not the selected test");
            }
            if !m.eq(l, target(d)?)? {
                return bad(d, "target is not the selected label");
            }
        }
        Rule::Tau => {
            arity(1)?;
            let Expr::Test(Test::Tau(l, t)) = &d.subject else { return bad(d, "not a τ test") };
            let p = &d.premises[0];
            if d.target.is_some() || p.env != d.env || p.subject != Expr::Term((**t).clone()) {
                return bad(d, "premise is not the body");
            }
            if !m.eq(target(p)?, l)? {
                return bad(d, "premise type is not the label");
            }
        }
        Rule::Prod => {
            let Expr::Test(Test::Prod(v)) = &d.subject else { return bad(d, "not a product") };
            arity(v.len())?;
            for (q, p) in v.iter().zip(&d.premises) {
                if p.env != d.env || p.subject != Expr::Test(q.clone()) || p.target.is_some() {
                    return bad(d, "premise is not the factor");
                }
            }
        }
        Rule::Sum { index } => {
            arity(1)?;
            let Expr::Test(Test::Sum(v)) = &d.subject else { return bad(d, "not a sum") };
            let p = &d.premises[0];
            let Some(q) = v.get(index) else { return bad(d, "index out of range") };
            if p.env != d.env || p.subject != Expr::Test(q.clone()) || p.target.is_some() {
                return bad(d, "premise is not the selected summand");
            }
        }
    }
    if d.target.is_some() == matches!(d.subject, Expr::Test(_)) {
        return bad(d, "target presence does not match the subject kind");
    }
    for p in &d.premises {
        verify(p, m)?;
    }
    Ok(())
}
