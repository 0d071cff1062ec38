//! Head and full reduction of terms and tests, fuel-bounded evaluation and
//! replayable traces.

mod beta_first;
mod rules;

pub use beta_first::{split_beta_first, BetaSplit};
pub use rules::{root_step, RuleId, SUBSET_GUARD};

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::ReduceError;
use crate::model::Model;
use crate::syntax::{canon_prod, canon_sum, Expr, Term, Test};

/// Child indices from the root of a canonical AST. Lambda body, function and
/// argument are 0, 0 and 1; τ̄ entries, summands and factors are numbered
/// in canonical order; the body of τ is 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<usize>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl std::str::FromStr for Path {
    type Err = String;

    fn from_str(s: &str) -> Result<Path, String> {
        if s == "root" {
            return Ok(Path::default());
        }
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|e| format!("bad path `{s}`: {e}")))
            .collect::<Result<_, _>>()
            .map(Path)
    }
}

/// One rewrite: rule, redex position in the previous AST, canonical result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub path: Path,
    pub result: Expr,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--{}@{}--> {}", self.rule, self.path, self.result)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Converged { result: Expr, trace: Vec<Step>, steps: usize },
    Refuted { trace: Vec<Step>, steps: usize },
    /// `stuck` is set when no redex was left, as for a bare Ω.
    FuelExhausted { last: Expr, trace: Vec<Step>, steps: usize, stuck: bool },
}

impl Outcome {
    pub fn steps(&self) -> usize {
        match self {
            Outcome::Converged { steps, .. }
            | Outcome::Refuted { steps, .. }
            | Outcome::FuelExhausted { steps, .. } => *steps,
        }
    }

    pub fn trace(&self) -> &[Step] {
        match self {
            Outcome::Converged { trace, .. }
            | Outcome::Refuted { trace, .. }
            | Outcome::FuelExhausted { trace, .. } => trace,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, Outcome::Converged { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted { .. })
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Outcome::FuelExhausted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Converged { .. } => "CONVERGED",
            Outcome::Refuted { .. } => "REFUTED",
            Outcome::FuelExhausted { .. } => "FUEL-OUT",
        }
    }
}

#[derive(Clone, Copy)]
enum Node<'a> {
    Term(&'a Term),
    Test(&'a Test),
}

impl<'a> Node<'a> {
    fn of(e: &'a Expr) -> Self {
        match e {
            Expr::Term(t) => Node::Term(t),
            Expr::Test(q) => Node::Test(q),
        }
    }

    fn child(self, i: usize) -> Option<Node<'a>> {
        match self {
            Node::Term(Term::Lam(_, b)) if i == 0 => Some(Node::Term(b)),
            Node::Term(Term::App(f, _)) if i == 0 => Some(Node::Term(f)),
            Node::Term(Term::App(_, a)) if i == 1 => Some(Node::Term(a)),
            Node::Term(Term::BarSum(es)) => es.get(i).map(|(_, q)| Node::Test(q)),
            Node::Test(Test::Sum(v) | Test::Prod(v)) => v.get(i).map(Node::Test),
            Node::Test(Test::Tau(_, m)) if i == 0 => Some(Node::Term(m)),
            _ => None,
        }
    }

    fn count(self) -> usize {
        match self {
            Node::Term(Term::Var(_) | Term::Omega) => 0,
            Node::Term(Term::Lam(..)) | Node::Test(Test::Tau(..)) => 1,
            Node::Term(Term::App(..)) => 2,
            Node::Term(Term::BarSum(es)) => es.len(),
            Node::Test(Test::Sum(v) | Test::Prod(v)) => v.len(),
        }
    }

    fn is_redex(self) -> bool {
        match self {
            Node::Term(t) => rules::is_term_redex(t),
            Node::Test(q) => rules::is_test_redex(q),
        }
    }

    fn step(self, m: &Model) -> Result<Option<(RuleId, Expr)>, ReduceError> {
        Ok(match self {
            Node::Term(t) => rules::root_term(t, m)?.map(|(r, t)| (r, Expr::Term(t))),
            Node::Test(q) => rules::root_test(q, m)?.map(|(r, q)| (r, Expr::Test(q))),
        })
    }
}

fn subexpr<'a>(e: &'a Expr, path: &[usize]) -> Option<Node<'a>> {
    let mut cur = Node::of(e);
    for &i in path {
        cur = cur.child(i)?;
    }
    Some(cur)
}

fn into_term(e: Expr) -> Term {
    match e {
        Expr::Term(t) => t,
        Expr::Test(_) => unreachable!("term position"),
    }
}

fn into_test(e: Expr) -> Test {
    match e {
        Expr::Test(q) => q,
        Expr::Term(_) => unreachable!("test position"),
    }
}

// Replaces the node at `path` by the canonical `new`, restoring canonical
// form on the way up. Siblings are shared.
fn replace_at(node: Node, path: &[usize], new: Expr) -> Expr {
    let Some((&i, rest)) = path.split_first() else {
        #[cfg(test)]
        assert_eq!(new, new.canonicalize(), "rule output is canonical");
        return new;
    };
    let below = replace_at(node.child(i).expect("valid path"), rest, new);
    match node {
        Node::Term(t) => Expr::Term(match t {
            Term::Lam(x, _) => Term::Lam(x.clone(), Arc::new(into_term(below))),
            Term::App(f, a) if i == 0 => Term::App(Arc::new(into_term(below)), a.clone()),
            Term::App(f, _) => Term::App(f.clone(), Arc::new(into_term(below))),
            Term::BarSum(es) => {
                let mut es = es.clone();
                es[i].1 = into_test(below);
                es.sort();
                Term::BarSum(es)
            }
            Term::Var(_) | Term::Omega => unreachable!("leaf"),
        }),
        Node::Test(q) => Expr::Test(match q {
            Test::Sum(v) => {
                let mut v = v.clone();
                v[i] = into_test(below);
                canon_sum(v)
            }
            Test::Prod(v) => {
                let mut v = v.clone();
                v[i] = into_test(below);
                canon_prod(v)
            }
            Test::Tau(l, _) => Test::Tau(l.clone(), Arc::new(into_term(below))),
        }),
    }
}

/// Path of the head redex, following the head contextual rules.
pub fn head_redex(e: &Expr) -> Option<Path> {
    let mut path = Vec::new();
    head_path(Node::of(e), &mut path).then_some(Path(path))
}

fn head_path(n: Node, path: &mut Vec<usize>) -> bool {
    if n.is_redex() {
        return true;
    }
    let descend = |i: usize, path: &mut Vec<usize>| {
        path.push(i);
        if head_path(n.child(i).expect("child exists"), path) {
            return true;
        }
        path.pop();
        false
    };
    match n {
        Node::Term(Term::Lam(..)) => descend(0, path),
        Node::Term(Term::App(f, _)) if matches!(**f, Term::App(..)) => descend(0, path),
        Node::Test(Test::Tau(_, body)) if matches!(**body, Term::App(..)) => descend(0, path),
        Node::Term(Term::BarSum(_)) | Node::Test(Test::Sum(_) | Test::Prod(_)) => {
            (0..n.count()).any(|i| descend(i, path))
        }
        _ => false,
    }
}

/// Applies `rule` at `path`; errors if that redex is not there.
pub fn apply_at(e: &Expr, rule: RuleId, path: &Path, m: &Model) -> Result<Expr, ReduceError> {
    let err = || ReduceError::Replay { rule: rule.to_string(), path: path.to_string() };
    let sub = subexpr(e, &path.0).ok_or_else(err)?;
    match sub.step(m)? {
        Some((r, new)) if r == rule => Ok(replace_at(Node::of(e), &path.0, new)),
        _ => Err(err()),
    }
}

/// The head step of canonical `e`, if any.
pub fn step_head(e: &Expr, m: &Model) -> Result<Option<Step>, ReduceError> {
    let Some(path) = head_redex(e) else { return Ok(None) };
    let sub = subexpr(e, &path.0).expect("head path is valid");
    let (rule, new) = sub.step(m)?.expect("head path is a redex");
    let result = replace_at(Node::of(e), &path.0, new);
    Ok(Some(Step { rule, path, result }))
}

/// All one-step reducts of canonical `e` under the full contextual closure.
pub fn enumerate_steps(e: &Expr, m: &Model) -> Result<Vec<Step>, ReduceError> {
    let mut out = Vec::new();
    collect_steps(e, Node::of(e), m, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn collect_steps(
    whole: &Expr,
    n: Node,
    m: &Model,
    path: &mut Vec<usize>,
    out: &mut Vec<Step>,
) -> Result<(), ReduceError> {
    if n.is_redex() {
        let (rule, new) = n.step(m)?.expect("shape test agrees with the rules");
        out.push(Step { rule, path: Path(path.clone()), result: replace_at(Node::of(whole), path, new) });
    }
    for i in 0..n.count() {
        path.push(i);
        collect_steps(whole, n.child(i).expect("child exists"), m, path, out)?;
        path.pop();
    }
    Ok(())
}

/// `Π τ_α(x M…)`, ε included.
pub fn is_head_normal_product(q: &Test) -> bool {
    let head_var = |q: &Test| match q {
        Test::Tau(_, body) => {
            let mut t = &**body;
            while let Term::App(f, _) = t {
                t = f;
            }
            matches!(t, Term::Var(_))
        }
        _ => false,
    };
    match q {
        Test::Prod(v) => v.iter().all(head_var),
        q => head_var(q),
    }
}

/// May-head-normal form.
pub fn is_mhnf(e: &Expr) -> bool {
    match e {
        Expr::Test(Test::Sum(v)) => v.iter().any(is_head_normal_product),
        Expr::Test(q) => is_head_normal_product(q),
        Expr::Term(t) => {
            let mut t = t;
            while let Term::Lam(_, b) = t {
                t = b;
            }
            match t {
                Term::BarSum(es) => es.iter().any(|(_, q)| is_head_normal_product(q)),
                _ => {
                    let mut h = t;
                    while let Term::App(f, _) = h {
                        h = f;
                    }
                    matches!(h, Term::Var(_))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub fuel: usize,
    pub trace: bool,
    /// Treat summands whose head step is β as blocked.
    pub forbid_beta: bool,
}

impl EvalOptions {
    pub fn new(fuel: usize) -> Self {
        EvalOptions { fuel, trace: false, forbid_beta: false }
    }

    pub fn traced(mut self) -> Self {
        self.trace = true;
        self
    }
}

/// Head evaluation. Summands of a test are scheduled round-robin with a
/// shared step budget; the first summand in head normal form decides
/// convergence.
pub fn eval(e: &Expr, m: &Model, opts: EvalOptions) -> Result<Outcome, ReduceError> {
    let e = e.canonicalize();
    match e {
        Expr::Test(q) => eval_test(q, m, opts),
        Expr::Term(t) => eval_term(t, m, opts),
    }
}

fn eval_term(t: Term, m: &Model, opts: EvalOptions) -> Result<Outcome, ReduceError> {
    let mut cur = Expr::Term(t);
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if is_mhnf(&cur) {
            return Ok(Outcome::Converged { result: cur, trace, steps });
        }
        if steps >= opts.fuel {
            return Ok(Outcome::FuelExhausted { last: cur, trace, steps, stuck: false });
        }
        match step_head(&cur, m)? {
            Some(s) if !(opts.forbid_beta && s.rule == RuleId::Beta) => {
                steps += 1;
                cur = s.result.clone();
                if opts.trace {
                    trace.push(s);
                }
            }
            _ => return Ok(Outcome::FuelExhausted { last: cur, trace, steps, stuck: true }),
        }
    }
}

fn summands(q: Test) -> Vec<Test> {
    match q {
        Test::Sum(v) => v,
        q => vec![q],
    }
}

fn whole(queue: &VecDeque<Test>, parked: &[Test]) -> Test {
    let v: Vec<Test> = queue.iter().chain(parked).cloned().collect();
    Test::Sum(v).canonicalize()
}

fn eval_test(q: Test, m: &Model, opts: EvalOptions) -> Result<Outcome, ReduceError> {
    let mut queue: VecDeque<Test> = summands(q).into();
    // summands with no admissible head step that are not head normal
    let mut parked: Vec<Test> = Vec::new();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if queue.iter().any(is_head_normal_product) {
            let result = Expr::Test(whole(&queue, &parked));
            return Ok(Outcome::Converged { result, trace, steps });
        }
        if queue.is_empty() {
            if parked.is_empty() {
                return Ok(Outcome::Refuted { trace, steps });
            }
            let last = Expr::Test(whole(&queue, &parked));
            return Ok(Outcome::FuelExhausted { last, trace, steps, stuck: true });
        }
        if steps >= opts.fuel {
            let last = Expr::Test(whole(&queue, &parked));
            return Ok(Outcome::FuelExhausted { last, trace, steps, stuck: false });
        }
        let s = queue.pop_front().expect("non-empty");
        let step = step_head(&Expr::Test(s.clone()), m)?;
        match step {
            Some(st) if !(opts.forbid_beta && st.rule == RuleId::Beta) => {
                steps += 1;
                if opts.trace {
                    let mut path = st.path.0.clone();
                    let before_all = {
                        let mut v: Vec<Test> = queue.iter().chain(&parked).cloned().collect();
                        v.push(s.clone());
                        Test::Sum(v).canonicalize()
                    };
                    if let Test::Sum(v) = &before_all {
                        let i = v.iter().position(|x| *x == s).expect("summand present");
                        path.insert(0, i);
                    }
                    let new_summands = match &st.result {
                        Expr::Test(t) => summands(t.clone()),
                        Expr::Term(_) => unreachable!("test summand"),
                    };
                    let mut v: Vec<Test> = queue.iter().chain(&parked).cloned().collect();
                    v.extend(new_summands.iter().cloned());
                    let result = Expr::Test(Test::Sum(v).canonicalize());
                    trace.push(Step { rule: st.rule, path: Path(path), result });
                    queue.extend(new_summands);
                } else if let Expr::Test(t) = st.result {
                    queue.extend(summands(t));
                }
            }
            _ => parked.push(s),
        }
    }
}

/// Replays a trace from `start`, checking every recorded result.
pub fn replay(start: &Expr, steps: &[(RuleId, Path)], m: &Model) -> Result<Vec<Step>, ReduceError> {
    let mut cur = start.canonicalize();
    let mut out = Vec::new();
    for (rule, path) in steps {
        cur = apply_at(&cur, *rule, path, m)?;
        out.push(Step { rule: *rule, path: path.clone(), result: cur.clone() });
    }
    Ok(out)
}

/// Evaluation by uniformly random steps of the full contextual closure.
/// `forbid_beta` is ignored.
pub fn eval_random(e: &Expr, m: &Model, opts: EvalOptions, rng: &mut impl Rng) -> Result<Outcome, ReduceError> {
    let mut cur = e.canonicalize();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if is_mhnf(&cur) {
            return Ok(Outcome::Converged { result: cur, trace, steps });
        }
        if matches!(&cur, Expr::Test(q) if q.is_zero()) {
            return Ok(Outcome::Refuted { trace, steps });
        }
        if steps >= opts.fuel {
            return Ok(Outcome::FuelExhausted { last: cur, trace, steps, stuck: false });
        }
        let all = enumerate_steps(&cur, m)?;
        if all.is_empty() {
            return Ok(Outcome::FuelExhausted { last: cur, trace, steps, stuck: true });
        }
        let pick = rng.gen_range(0..all.len());
        let step = all.into_iter().nth(pick).expect("in range");
        cur = step.result.clone();
        if opts.trace {
            trace.push(step);
        }
        steps += 1;
    }
}

#[cfg(test)]
mod tests;
