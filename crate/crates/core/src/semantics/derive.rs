//! Syntax-directed derivation search.
//!
//! Applications headed by a variable or a τ̄ sum are typed exactly: the head
//! has a least type, and each argument selects the ext pairs of the current
//! type whose source it inhabits. Other applications guess the argument type
//! as the meet of every candidate of a finite pool that the argument
//! inhabits.

use std::collections::{BTreeSet, HashMap};

use super::{lookup, Derivation, Env, Judgment, Rule, Verdict};
use crate::error::SemanticsError;
use crate::model::{type_universe, Model, TypeExpr};
use crate::syntax::{Expr, Term, Test};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Maximal nesting of rule applications.
    pub depth: usize,
    /// Leaf bound of the type universe used as the argument candidate pool.
    pub pool_depth: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { depth: 12, pool_depth: 2 }
    }
}

type Key = (Env, Expr, Option<TypeExpr>);

struct Search<'m> {
    m: &'m Model,
    pool: Vec<TypeExpr>,
    memo: HashMap<Key, Option<Derivation>>,
    exhausted: bool,
    /// Without witnesses, nodes keep only rule, target and premises.
    witness: bool,
}

pub fn check(j: &Judgment, m: &Model, opts: CheckOptions) -> Result<Verdict, SemanticsError> {
    match j {
        Judgment::Term { env, subject, target } => check_term(m, env, subject, target, opts),
        Judgment::Test { env, subject } => check_test(m, env, subject, opts),
    }
}

pub fn check_term(
    m: &Model,
    env: &Env,
    subject: &Term,
    target: &TypeExpr,
    opts: CheckOptions,
) -> Result<Verdict, SemanticsError> {
    let subject = subject.canonicalize();
    let env = prepare(m, env, &Expr::Term(subject.clone()))?;
    let target = m.normalize(target)?;
    let mut s = Search::new(m, &env, &Expr::Term(subject.clone()), &target, opts)?;
    let found = s.term(&mut env.clone(), &subject, &target, opts.depth)?;
    s.finish(found)
}

/// Like [`check_term`], without building the derivation.
pub fn decide_term(
    m: &Model,
    env: &Env,
    subject: &Term,
    target: &TypeExpr,
    opts: CheckOptions,
) -> Result<bool, SemanticsError> {
    let subject = subject.canonicalize();
    let env = prepare(m, env, &Expr::Term(subject.clone()))?;
    let target = m.normalize(target)?;
    let mut s = Search::new(m, &env, &Expr::Term(subject.clone()), &target, opts)?;
    s.witness = false;
    let found = s.term(&mut env.clone(), &subject, &target, opts.depth)?;
    Ok(s.finish(found)?.is_derivable())
}

pub fn check_test(m: &Model, env: &Env, subject: &Test, opts: CheckOptions) -> Result<Verdict, SemanticsError> {
    let subject = subject.canonicalize();
    let env = prepare(m, env, &Expr::Test(subject.clone()))?;
    let mut s = Search::new(m, &env, &Expr::Test(subject.clone()), &TypeExpr::omega(), opts)?;
    let found = s.test(&mut env.clone(), &subject, opts.depth)?;
    s.finish(found)
}

fn prepare(m: &Model, env: &Env, subject: &Expr) -> Result<Env, SemanticsError> {
    let env: Env = env.iter().map(|(x, t)| Ok((x.clone(), m.normalize(t)?))).collect::<Result<_, SemanticsError>>()?;
    if let Some(x) = subject.free_vars().into_iter().find(|x| lookup(&env, x).is_none()) {
        return Err(SemanticsError::Unbound(x.to_string()));
    }
    Ok(env)
}

fn labels_term(t: &Term, out: &mut BTreeSet<TypeExpr>) {
    match t {
        Term::Var(_) | Term::Omega => {}
        Term::Lam(_, b) => labels_term(b, out),
        Term::App(f, a) => {
            labels_term(f, out);
            labels_term(a, out);
        }
        Term::BarSum(es) => {
            for (l, q) in es {
                out.insert(l.clone());
                labels_test(q, out);
            }
        }
    }
}

fn labels_test(q: &Test, out: &mut BTreeSet<TypeExpr>) {
    match q {
        Test::Sum(v) | Test::Prod(v) => v.iter().for_each(|q| labels_test(q, out)),
        Test::Tau(l, t) => {
            out.insert(l.clone());
            labels_term(t, out);
        }
    }
}

impl<'m> Search<'m> {
    fn new(m: &'m Model, env: &Env, subject: &Expr, target: &TypeExpr, opts: CheckOptions) -> Result<Self, SemanticsError> {
        let mut seen = BTreeSet::new();
        let mut pool = Vec::new();
        let mut extra = BTreeSet::new();
        match subject {
            Expr::Term(t) => labels_term(t, &mut extra),
            Expr::Test(q) => labels_test(q, &mut extra),
        }
        extra.insert(target.clone());
        extra.extend(env.iter().map(|(_, t)| t.clone()));
        for t in type_universe(m, opts.pool_depth)?.into_iter().chain(extra) {
            let t = m.normalize(&t)?;
            if !t.is_omega() && seen.insert(t.clone()) {
                pool.push(t);
            }
        }
        Ok(Search { m, pool, memo: HashMap::new(), exhausted: false, witness: true })
    }

    fn node(&self, env: &Env, subject: impl FnOnce() -> Expr, target: Option<TypeExpr>, rule: Rule, premises: Vec<Derivation>) -> Derivation {
        let (env, subject) =
            if self.witness { (env.clone(), subject()) } else { (Env::new(), Expr::Term(Term::Omega)) };
        Derivation { env, subject, target, rule, premises }
    }

    fn finish(&self, found: Option<Derivation>) -> Result<Verdict, SemanticsError> {
        match found {
            Some(d) => Ok(Verdict::Derivable(d)),
            None if self.exhausted => Err(SemanticsError::Budget),
            None => Ok(Verdict::NotFound),
        }
    }

    // Runs `f`, memoising its answer unless the depth budget interfered.
    // Only argument candidates are memoised; elsewhere the search visits
    // each subterm a bounded number of times.
    fn memo(
        &mut self,
        key: Key,
        f: impl FnOnce(&mut Self) -> Result<Option<Derivation>, SemanticsError>,
    ) -> Result<Option<Derivation>, SemanticsError> {
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let outer = std::mem::replace(&mut self.exhausted, false);
        let r = f(self)?;
        if r.is_some() || !self.exhausted {
            self.memo.insert(key, r.clone());
        }
        self.exhausted |= outer;
        Ok(r)
    }

    fn sub(&self, d: Derivation, target: &TypeExpr) -> Derivation {
        if d.target.as_ref() == Some(target) {
            return d;
        }
        let (env, subject) = (d.env.clone(), d.subject.clone());
        Derivation { env, subject, target: Some(target.clone()), rule: Rule::Sub, premises: vec![d] }
    }

    fn meet(&self, env: &Env, subject: impl FnOnce() -> Expr, premises: Vec<Derivation>) -> Result<Derivation, SemanticsError> {
        if premises.len() == 1 {
            return Ok(premises.into_iter().next().expect("one premise"));
        }
        if premises.is_empty() {
            return Ok(self.node(env, subject, Some(TypeExpr::omega()), Rule::Top, vec![]));
        }
        let t = TypeExpr::meet_all(premises.iter().map(|d| d.target.as_ref().expect("term judgment")));
        let t = self.m.normalize(&t)?;
        Ok(self.node(env, subject, Some(t), Rule::Meet, premises))
    }

    fn term(&mut self, env: &mut Env, t: &Term, target: &TypeExpr, depth: usize) -> Result<Option<Derivation>, SemanticsError> {
        let subject = || Expr::Term(t.clone());
        if target.is_omega() {
            return Ok(Some(self.node(env, subject, Some(TypeExpr::omega()), Rule::Top, vec![])));
        }
        if depth == 0 {
            self.exhausted = true;
            return Ok(None);
        }
        if target.len() > 1 {
            let mut ds = Vec::new();
            for f in target.factors() {
                let f = self.m.normalize(&TypeExpr::from_factors([f.clone()]))?;
                match self.term(env, t, &f, depth - 1)? {
                    Some(d) => ds.push(d),
                    None => return Ok(None),
                }
            }
            let d = self.meet(env, subject, ds)?;
            return Ok(Some(self.sub(d, target)));
        }
        self.factor(env, t, target, depth)
    }

    // `target` is a single non-ω factor.
    fn factor(&mut self, env: &mut Env, t: &Term, target: &TypeExpr, depth: usize) -> Result<Option<Derivation>, SemanticsError> {
        let subject = || Expr::Term(t.clone());
        match t {
            Term::Omega => Ok(None),
            Term::Lam(x, body) => {
                let mut ds = Vec::new();
                for (b, g) in self.m.ext_of(target)? {
                    env.push((x.clone(), b.clone()));
                    let d = self.term(env, body, &g, depth - 1);
                    env.pop();
                    let Some(d) = d? else { return Ok(None) };
                    let arrow = self.m.normalize(&TypeExpr::arrow(b, g))?;
                    ds.push(self.node(env, subject, Some(arrow), Rule::Lam, vec![d]));
                }
                let d = self.meet(env, subject, ds)?;
                self.up(d, target)
            }
            Term::Var(_) | Term::BarSum(_) | Term::App(..) => {
                let mut head = t;
                let mut args = Vec::new();
                while let Term::App(f, a) = head {
                    args.push(&**a);
                    head = f;
                }
                args.reverse();
                match head {
                    Term::Var(_) | Term::BarSum(_) => {
                        let Some(mut d) = self.least(env, head, depth - 1)? else { return Ok(None) };
                        let mut fun = if self.witness { head.clone() } else { Term::Omega };
                        for a in args {
                            let cur = d.target.clone().expect("term judgment");
                            let mut chosen = Vec::new();
                            let mut src = Vec::new();
                            let mut tgt = Vec::new();
                            for (b, g) in self.m.ext_of(&cur)? {
                                if let Some(da) = self.term(env, a, &b, depth - 1)? {
                                    chosen.push(da);
                                    src.push(b);
                                    tgt.push(g);
                                }
                            }
                            let arg_ty = self.m.normalize(&TypeExpr::meet_all(&src))?;
                            let res_ty = self.m.normalize(&TypeExpr::meet_all(&tgt))?;
                            if res_ty.is_omega() {
                                return Ok(None);
                            }
                            let arrow = self.m.normalize(&TypeExpr::arrow(arg_ty, res_ty.clone()))?;
                            let df = self.sub(d, &arrow);
                            let da = self.meet(env, || Expr::Term(a.clone()), chosen)?;
                            if self.witness {
                                fun = Term::app(fun, a.clone());
                            }
                            d = self.node(env, || Expr::Term(fun.clone()), Some(res_ty), Rule::App, vec![df, da]);
                        }
                        self.up(d, target)
                    }
                    Term::Omega => Ok(None),
                    Term::Lam(..) | Term::App(..) => {
                        let Term::App(f, a) = t else { unreachable!("spine with arguments") };
                        let mut chosen = Vec::new();
                        let mut src = Vec::new();
                        for c in self.pool.clone() {
                            let key = (env.clone(), Expr::Term((**a).clone()), Some(c.clone()));
                            if let Some(da) = self.memo(key, |s| s.term(env, a, &c, depth - 1))? {
                                chosen.push(da);
                                src.push(c);
                            }
                        }
                        let arg_ty = self.m.normalize(&TypeExpr::meet_all(&src))?;
                        let arrow = self.m.normalize(&TypeExpr::arrow(arg_ty, target.clone()))?;
                        let Some(df) = self.term(env, f, &arrow, depth - 1)? else { return Ok(None) };
                        let da = self.meet(env, || Expr::Term((**a).clone()), chosen)?;
                        Ok(Some(self.node(env, subject, Some(target.clone()), Rule::App, vec![df, da])))
                    }
                }
            }
        }
    }

    fn up(&self, d: Derivation, target: &TypeExpr) -> Result<Option<Derivation>, SemanticsError> {
        let have = d.target.as_ref().expect("term judgment");
        if self.m.leq(have, target)? {
            Ok(Some(self.sub(d, target)))
        } else {
            Ok(None)
        }
    }

    // The least type of a variable or τ̄ sum.
    fn least(&mut self, env: &mut Env, head: &Term, depth: usize) -> Result<Option<Derivation>, SemanticsError> {
        let subject = || Expr::Term(head.clone());
        match head {
            Term::Var(x) => {
                let t = lookup(env, x).ok_or_else(|| SemanticsError::Unbound(x.to_string()))?;
                Ok(Some(self.node(env, subject, Some(t.clone()), Rule::Axiom, vec![])))
            }
            Term::BarSum(es) => {
                if depth == 0 {
                    self.exhausted = true;
                    return Ok(None);
                }
                let mut ds = Vec::new();
                for (i, (l, q)) in es.iter().enumerate() {
                    if let Some(dq) = self.test(env, q, depth - 1)? {
                        ds.push(self.node(env, subject, Some(l.clone()), Rule::Bar { index: i }, vec![dq]));
                    }
                }
                Ok(Some(self.meet(env, subject, ds)?))
            }
            _ => unreachable!("least type of a variable or τ̄ sum"),
        }
    }

    fn test(&mut self, env: &mut Env, q: &Test, depth: usize) -> Result<Option<Derivation>, SemanticsError> {
        if depth == 0 {
            self.exhausted = true;
            return Ok(None);
        }
        let subject = || Expr::Test(q.clone());
        let s = self;
        match q {
            Test::Tau(l, t) => {
                Ok(s.term(env, t, l, depth - 1)?.map(|d| s.node(env, subject, None, Rule::Tau, vec![d])))
            }
            Test::Prod(v) => {
                let mut ds = Vec::new();
                for q in v {
                    let Some(d) = s.test(env, q, depth - 1)? else { return Ok(None) };
                    ds.push(d);
                }
                Ok(Some(s.node(env, subject, None, Rule::Prod, ds)))
            }
            Test::Sum(v) => {
                for (i, q) in v.iter().enumerate() {
                    if let Some(d) = s.test(env, q, depth - 1)? {
                        return Ok(Some(s.node(env, subject, None, Rule::Sum { index: i }, vec![d])));
                    }
                }
                Ok(None)
            }
        }
    }
}
