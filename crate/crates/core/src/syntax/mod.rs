//! Terms and tests of the λ-calculus with D-tests, extended with Ω.

mod parse;
mod print;

pub use parse::{parse_expr, parse_term, parse_test};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::model::TypeExpr;

pub type Name = Arc<str>;

// Binder multiplicities.
type Bound = HashMap<Name, usize>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Name),
    Lam(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// A sum of τ̄ operators; empty is the term `0t`.
    BarSum(Vec<(TypeExpr, Test)>),
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Test {
    /// Empty is the failing test 0.
    Sum(Vec<Test>),
    /// Empty is the succeeding test ε.
    Prod(Vec<Test>),
    Tau(TypeExpr, Arc<Term>),
}

/// Either side of the calculus; reduction works on both.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Term(Term),
    Test(Test),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.into())
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.into(), Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// Left-nested application of `f` to `args`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn zero() -> Term {
        Term::BarSum(Vec::new())
    }

    /// τ̄_α(Q).
    pub fn bar(label: TypeExpr, q: Test) -> Term {
        Term::BarSum(vec![(label, q)])
    }

    /// ε̄_α.
    pub fn ebar(label: TypeExpr) -> Term {
        Term::bar(label, Test::eps())
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Bound::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Bound, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains_key(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, b) => {
                *bound.entry(x.clone()).or_default() += 1;
                b.collect_fv(bound, out);
                if let Some(n) = bound.get_mut(x) {
                    *n -= 1;
                    if *n == 0 {
                        bound.remove(x);
                    }
                }
            }
            Term::App(f, a) => {
                f.collect_fv(bound, out);
                a.collect_fv(bound, out);
            }
            Term::BarSum(es) => {
                for (_, q) in es {
                    q.collect_fv(bound, out);
                }
            }
            Term::Omega => {}
        }
    }

    /// No test constructs.
    pub fn is_pure(&self) -> bool {
        match self {
            Term::Var(_) | Term::Omega => true,
            Term::Lam(_, b) => b.is_pure(),
            Term::App(f, a) => f.is_pure() && a.is_pure(),
            Term::BarSum(_) => false,
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Omega => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::BarSum(es) => 1 + es.iter().map(|(_, q)| q.size()).sum::<usize>(),
        }
    }

    pub fn canonicalize(&self) -> Term {
        self.canon().unwrap_or_else(|| self.clone())
    }

    // `None` when already canonical.
    fn canon(&self) -> Option<Term> {
        match self {
            Term::Var(_) | Term::Omega => None,
            Term::Lam(x, b) => b.canon().map(|b| Term::Lam(x.clone(), Arc::new(b))),
            Term::App(f, a) => match (f.canon(), a.canon()) {
                (None, None) => None,
                (f2, a2) => Some(Term::App(share(f, f2), share(a, a2))),
            },
            Term::BarSum(es) => {
                let kids: Vec<Option<Test>> = es.iter().map(|(_, q)| q.canon()).collect();
                if kids.iter().all(Option::is_none) && es.windows(2).all(|w| w[0] <= w[1]) {
                    return None;
                }
                let mut v: Vec<_> = es
                    .iter()
                    .zip(kids)
                    .map(|((l, q), k)| (l.clone(), k.unwrap_or_else(|| q.clone())))
                    .collect();
                v.sort();
                Some(Term::BarSum(v))
            }
        }
    }

    /// Capture-avoiding `self[n/x]`.
    pub fn subst(&self, x: &str, n: &Term) -> Term {
        let fv = n.free_vars();
        self.subst_with(x, n, &fv, false).unwrap_or_else(|| self.clone())
    }

    /// Substitution into a canonical term of a canonical term, re-sorting only
    /// the sums it rebuilds.
    pub(crate) fn subst_canon(&self, x: &str, n: &Term) -> Term {
        let fv = n.free_vars();
        self.subst_with(x, n, &fv, true).unwrap_or_else(|| self.clone())
    }

    // `None` when `x` does not occur free.
    fn subst_with(&self, x: &str, n: &Term, fv: &BTreeSet<Name>, canon: bool) -> Option<Term> {
        match self {
            Term::Var(y) => (&**y == x).then(|| n.clone()),
            Term::Omega => None,
            Term::App(f, a) => match (f.subst_with(x, n, fv, canon), a.subst_with(x, n, fv, canon)) {
                (None, None) => None,
                (f2, a2) => Some(Term::App(share(f, f2), share(a, a2))),
            },
            Term::BarSum(es) => {
                let kids: Vec<Option<Test>> = es.iter().map(|(_, q)| q.subst_with(x, n, fv, canon)).collect();
                if kids.iter().all(Option::is_none) {
                    return None;
                }
                let mut v: Vec<_> =
                    es.iter().zip(kids).map(|((l, q), k)| (l.clone(), k.unwrap_or_else(|| q.clone()))).collect();
                if canon {
                    v.sort();
                }
                Some(Term::BarSum(v))
            }
            Term::Lam(y, b) => {
                if &**y == x {
                    return None;
                }
                if fv.contains(y) {
                    let bfv = b.free_vars();
                    if !bfv.contains(x) {
                        return None;
                    }
                    let mut avoid = fv.clone();
                    avoid.extend(bfv);
                    avoid.insert(x.into());
                    let y2 = fresh(y, &avoid);
                    let fresh_fv = BTreeSet::from([y2.clone()]);
                    let b2 = b.subst_with(y, &Term::Var(y2.clone()), &fresh_fv, canon).unwrap_or_else(|| (**b).clone());
                    let b3 = b2.subst_with(x, n, fv, canon).unwrap_or(b2);
                    Some(Term::Lam(y2, Arc::new(b3)))
                } else {
                    b.subst_with(x, n, fv, canon).map(|b| Term::Lam(y.clone(), Arc::new(b)))
                }
            }
        }
    }

    /// Bound variables renamed by binding depth, then canonicalised; two terms
    /// are α-equivalent iff their keys are equal.
    pub fn alpha_key(&self) -> Term {
        self.rename_levels(&mut Vec::new()).canonicalize()
    }

    fn rename_levels(&self, env: &mut Vec<(Name, Name)>) -> Term {
        match self {
            Term::Var(x) => match env.iter().rev().find(|(o, _)| o == x) {
                Some((_, n)) => Term::Var(n.clone()),
                None => self.clone(),
            },
            Term::Omega => Term::Omega,
            Term::Lam(x, b) => {
                let n: Name = format!("#{}", env.len()).into();
                env.push((x.clone(), n.clone()));
                let b = b.rename_levels(env);
                env.pop();
                Term::Lam(n, Arc::new(b))
            }
            Term::App(f, a) => Term::app(f.rename_levels(env), a.rename_levels(env)),
            Term::BarSum(es) => Term::BarSum(
                es.iter()
                    .map(|(l, q)| (l.clone(), q.rename_levels(env)))
                    .collect(),
            ),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.alpha_key() == other.alpha_key()
    }
}

impl Test {
    pub fn eps() -> Test {
        Test::Prod(Vec::new())
    }

    pub fn zero() -> Test {
        Test::Sum(Vec::new())
    }

    pub fn tau(label: TypeExpr, m: Term) -> Test {
        Test::Tau(label, Arc::new(m))
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Test::Prod(v) if v.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Test::Sum(v) if v.is_empty())
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Bound::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Bound, out: &mut BTreeSet<Name>) {
        match self {
            Test::Sum(v) | Test::Prod(v) => {
                for q in v {
                    q.collect_fv(bound, out);
                }
            }
            Test::Tau(_, m) => m.collect_fv(bound, out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Test::Sum(v) | Test::Prod(v) => 1 + v.iter().map(Test::size).sum::<usize>(),
            Test::Tau(_, m) => 1 + m.size(),
        }
    }

    /// Flattens nested sums and products, drops neutral elements, collapses
    /// singletons and sorts.
    pub fn canonicalize(&self) -> Test {
        self.canon().unwrap_or_else(|| self.clone())
    }

    fn canon(&self) -> Option<Test> {
        match self {
            Test::Tau(l, m) => m.canon().map(|m| Test::Tau(l.clone(), Arc::new(m))),
            Test::Sum(v) | Test::Prod(v) => {
                let is_sum = matches!(self, Test::Sum(_));
                let same = |q: &Test| matches!((is_sum, q), (true, Test::Sum(_)) | (false, Test::Prod(_)));
                let kids: Vec<Option<Test>> = v.iter().map(Test::canon).collect();
                if v.len() != 1
                    && kids.iter().all(Option::is_none)
                    && !v.iter().any(same)
                    && v.windows(2).all(|w| w[0] <= w[1])
                {
                    return None;
                }
                let mut out = Vec::new();
                for (q, k) in v.iter().zip(kids) {
                    match k.unwrap_or_else(|| q.clone()) {
                        Test::Sum(inner) if is_sum => out.extend(inner),
                        Test::Prod(inner) if !is_sum => out.extend(inner),
                        q => out.push(q),
                    }
                }
                Some(collapse(out, if is_sum { Test::Sum } else { Test::Prod }))
            }
        }
    }

    pub fn subst(&self, x: &str, n: &Term) -> Test {
        let fv = n.free_vars();
        self.subst_with(x, n, &fv, false).unwrap_or_else(|| self.clone())
    }

    fn subst_with(&self, x: &str, n: &Term, fv: &BTreeSet<Name>, canon: bool) -> Option<Test> {
        match self {
            Test::Sum(v) | Test::Prod(v) => {
                let kids: Vec<Option<Test>> = v.iter().map(|q| q.subst_with(x, n, fv, canon)).collect();
                if kids.iter().all(Option::is_none) {
                    return None;
                }
                let mut v: Vec<Test> = v.iter().zip(kids).map(|(q, k)| k.unwrap_or_else(|| q.clone())).collect();
                if canon {
                    v.sort();
                }
                Some(if matches!(self, Test::Sum(_)) { Test::Sum(v) } else { Test::Prod(v) })
            }
            Test::Tau(l, m) => m.subst_with(x, n, fv, canon).map(|m| Test::Tau(l.clone(), Arc::new(m))),
        }
    }

    fn rename_levels(&self, env: &mut Vec<(Name, Name)>) -> Test {
        match self {
            Test::Sum(v) => Test::Sum(v.iter().map(|q| q.rename_levels(env)).collect()),
            Test::Prod(v) => Test::Prod(v.iter().map(|q| q.rename_levels(env)).collect()),
            Test::Tau(l, m) => Test::Tau(l.clone(), Arc::new(m.rename_levels(env))),
        }
    }

    pub fn alpha_key(&self) -> Test {
        self.rename_levels(&mut Vec::new()).canonicalize()
    }

    pub fn alpha_eq(&self, other: &Test) -> bool {
        self.alpha_key() == other.alpha_key()
    }
}

fn share(old: &Arc<Term>, new: Option<Term>) -> Arc<Term> {
    new.map_or_else(|| old.clone(), Arc::new)
}

// Flattening, collapsing and sorting at one node whose children are
// canonical.
pub(crate) fn canon_sum(v: Vec<Test>) -> Test {
    let mut out = Vec::with_capacity(v.len());
    for q in v {
        match q {
            Test::Sum(inner) => out.extend(inner),
            q => out.push(q),
        }
    }
    collapse(out, Test::Sum)
}

pub(crate) fn canon_prod(v: Vec<Test>) -> Test {
    let mut out = Vec::with_capacity(v.len());
    for q in v {
        match q {
            Test::Prod(inner) => out.extend(inner),
            q => out.push(q),
        }
    }
    collapse(out, Test::Prod)
}

pub(crate) fn collapse(mut v: Vec<Test>, mk: fn(Vec<Test>) -> Test) -> Test {
    if v.len() == 1 {
        return v.pop().unwrap();
    }
    v.sort();
    mk(v)
}

impl Expr {
    pub fn canonicalize(&self) -> Expr {
        match self {
            Expr::Term(t) => Expr::Term(t.canonicalize()),
            Expr::Test(q) => Expr::Test(q.canonicalize()),
        }
    }

    pub fn alpha_key(&self) -> Expr {
        match self {
            Expr::Term(t) => Expr::Term(t.alpha_key()),
            Expr::Test(q) => Expr::Test(q.alpha_key()),
        }
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        self.alpha_key() == other.alpha_key()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            Expr::Term(t) => t.free_vars(),
            Expr::Test(q) => q.free_vars(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Term(t) => t.size(),
            Expr::Test(q) => q.size(),
        }
    }

    pub fn subst(&self, x: &str, n: &Term) -> Expr {
        match self {
            Expr::Term(t) => Expr::Term(t.subst(x, n)),
            Expr::Test(q) => Expr::Test(q.subst(x, n)),
        }
    }

    pub fn as_test(&self) -> Option<&Test> {
        match self {
            Expr::Test(q) => Some(q),
            Expr::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Expr::Term(t) => Some(t),
            Expr::Test(_) => None,
        }
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<Test> for Expr {
    fn from(q: Test) -> Self {
        Expr::Test(q)
    }
}

/// `base` primed until it avoids `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut s = base.to_string();
    loop {
        s.push('\'');
        if !avoid.contains(s.as_str()) {
            return s.into();
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => t.fmt(f),
            Expr::Test(q) => q.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests;
