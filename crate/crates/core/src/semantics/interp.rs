//! The direct interpretation of pure terms, evaluated clause by clause.
//!
//! Membership is asked of arbitrary elements, but the existential witnesses
//! of the abstraction and application clauses range over a finite type
//! universe, and the meets inside the clauses over families of at most
//! [`FAMILY`] elements.

use std::collections::{BTreeSet, HashMap};

use super::{lookup, Env};
use crate::error::SemanticsError;
use crate::model::{type_universe, Model, TypeExpr};
use crate::syntax::{Name, Term};

pub const FAMILY: usize = 3;

/// `⟦M⟧` on the universe: all `(α⃗, β)` with `α⃗` and `β` universe elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interp {
    pub vars: Vec<Name>,
    pub universe: Vec<TypeExpr>,
    pub members: BTreeSet<(Vec<TypeExpr>, TypeExpr)>,
}

impl Interp {
    pub fn contains(&self, args: &[TypeExpr], target: &TypeExpr) -> bool {
        self.members.contains(&(args.to_vec(), target.clone()))
    }
}

struct Eval<'m> {
    m: &'m Model,
    u: Vec<TypeExpr>,
    gens: HashMap<(Term, Env), Vec<TypeExpr>>,
}

impl Eval<'_> {
    // Some meet of at most FAMILY generators lies below `t`.
    fn generated(&self, gens: &[TypeExpr], t: &TypeExpr) -> Result<bool, SemanticsError> {
        if t.is_omega() {
            return Ok(true);
        }
        let n = gens.len();
        for g in gens {
            if self.m.leq(g, t)? {
                return Ok(true);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.m.leq(&gens[i].meet(&gens[j]), t)? {
                    return Ok(true);
                }
                if FAMILY >= 3 {
                    for k in j + 1..n {
                        if self.m.leq(&TypeExpr::meet_all([&gens[i], &gens[j], &gens[k]]), t)? {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    fn member(&mut self, t: &Term, env: &Env, target: &TypeExpr) -> Result<bool, SemanticsError> {
        let target = self.m.normalize(target)?;
        if target.is_omega() {
            return Ok(true);
        }
        match t {
            Term::Var(x) => {
                let a = lookup(env, x).ok_or_else(|| SemanticsError::Unbound(x.to_string()))?;
                Ok(self.m.leq(a, &target)?)
            }
            Term::Omega => Ok(false),
            Term::BarSum(_) => Err(SemanticsError::NotPure),
            Term::Lam(..) | Term::App(..) => {
                let gens = self.generators(t, env)?;
                self.generated(&gens, &target)
            }
        }
    }

    // Elements whose finite meets, closed upwards, make up ⟦t⟧ under `env`:
    // the arrows `β → γ` with `γ ∈ ⟦body⟧` for an abstraction, the results
    // `β` with `γ → β ∈ ⟦f⟧` and `γ ∈ ⟦a⟧` for an application.
    fn generators(&mut self, t: &Term, env: &Env) -> Result<Vec<TypeExpr>, SemanticsError> {
        let key = (t.clone(), env.clone());
        if let Some(g) = self.gens.get(&key) {
            return Ok(g.clone());
        }
        let u = self.u.clone();
        let mut out = BTreeSet::new();
        match t {
            Term::Lam(y, body) => {
                for b in &u {
                    let mut inner = env.clone();
                    inner.push((y.clone(), b.clone()));
                    for g in u.iter().filter(|g| !g.is_omega()) {
                        if self.member(body, &inner, g)? {
                            out.insert(self.m.normalize(&TypeExpr::arrow(b.clone(), g.clone()))?);
                        }
                    }
                }
            }
            Term::App(f, a) => {
                for g in &u {
                    if !self.member(a, env, g)? {
                        continue;
                    }
                    for b in u.iter().filter(|b| !b.is_omega()) {
                        if self.member(f, env, &TypeExpr::arrow(g.clone(), b.clone()))? {
                            out.insert(b.clone());
                        }
                    }
                }
            }
            _ => unreachable!("generators of an abstraction or application"),
        }
        out.remove(&TypeExpr::omega());
        let out: Vec<TypeExpr> = out.into_iter().collect();
        self.gens.insert(key, out.clone());
        Ok(out)
    }
}

fn universe(m: &Model, depth: usize) -> Result<Vec<TypeExpr>, SemanticsError> {
    let mut seen = BTreeSet::new();
    let mut u = Vec::new();
    for t in type_universe(m, depth)? {
        let t = m.normalize(&t)?;
        if seen.insert(t.clone()) {
            u.push(t);
        }
    }
    Ok(u)
}

/// Enumerates `⟦M⟧` over the depth-`type_depth` universe, with the free
/// variables of `M` in sorted order.
pub fn interp_enumerate(m: &Model, term: &Term, type_depth: usize) -> Result<Interp, SemanticsError> {
    if !term.is_pure() {
        return Err(SemanticsError::NotPure);
    }
    let vars: Vec<Name> = term.free_vars().into_iter().collect();
    let u = universe(m, type_depth)?;
    let mut ev = Eval { m, u: u.clone(), gens: HashMap::new() };
    let mut members = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let args: Vec<TypeExpr> = idx.iter().map(|&i| u[i].clone()).collect();
        let env: Env = vars.iter().cloned().zip(args.iter().cloned()).collect();
        for b in &u {
            if ev.member(term, &env, b)? {
                members.insert((args.clone(), b.clone()));
            }
        }
        // odometer over U^n
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(Interp { vars, universe: u, members });
            }
            idx[k] += 1;
            if idx[k] < u.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Whether `target ∈ ⟦M⟧(env)`, with witnesses from the depth-`type_depth`
/// universe.
pub fn interp_member(
    m: &Model,
    term: &Term,
    env: &Env,
    target: &TypeExpr,
    type_depth: usize,
) -> Result<bool, SemanticsError> {
    if !term.is_pure() {
        return Err(SemanticsError::NotPure);
    }
    let env: Env = env.iter().map(|(x, t)| Ok((x.clone(), m.normalize(t)?))).collect::<Result<_, SemanticsError>>()?;
    let mut ev = Eval { m, u: universe(m, type_depth)?, gens: HashMap::new() };
    ev.member(term, &env, target)
}
