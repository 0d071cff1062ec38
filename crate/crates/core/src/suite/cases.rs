use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaseVerdict, Record, SuiteError, SuiteReport, SuiteSpec, TraceArtifact};
use crate::approximants::{
    approximability_check, approximant_has, approximant_passes, direct_approximant, ApproxVerdict,
};
use crate::error::SemanticsError;
use crate::gen::{labels, minimize, normal_forms, random_query, shrink_query, shrink_term, GenConfig, Query};
use crate::model::{builtin, sp_search, sp_verify, type_universe, Model, StratWitness, DEFAULT_SP_ATOM_BOUND};
use crate::reduction::{enumerate_steps, eval, eval_random, split_beta_first, EvalOptions, Outcome};
use crate::semantics::{decide_term, oracle, CheckOptions, Env};
use crate::syntax::{parse_expr, parse_term, Expr, Term};
use crate::unfold::leq_bounded;

/// One displayed reduction: start, final result, and each step's rule with
/// the reduct shown after it (empty when not shown).
#[derive(Debug, Clone, Copy)]
pub struct Line {
    pub model: &'static str,
    pub start: &'static str,
    pub result: &'static str,
    pub steps: &'static [(&'static str, &'static str)],
}

pub type Blocks = &'static [(&'static str, &'static [Line])];

pub const EXAMPLE_BLOCKS: Blocks = &[
    (
        "park",
        &[Line {
            model: "pinf",
            start: r"tau[*](\x. x x)",
            result: "eps",
            steps: &[
                ("tau", "tau[*](ebar[*] ebar[*])"),
                ("taubar", "tau[*](bar[*](tau[*](ebar[*])))"),
                ("tautaubar", ""),
                ("tautaubar", "eps"),
            ],
        }],
    ),
    (
        "scott",
        &[
            Line {
                model: "dinf",
                start: r"tau[*]((\x y. x y) ebar[*])",
                result: "eps",
                steps: &[
                    ("beta", r"tau[*](\y. ebar[*] y)"),
                    ("tau", "tau[*](ebar[*] 0t)"),
                    ("taubar", "tau[*](ebar[*])"),
                    ("tautaubar", "eps"),
                ],
            },
            Line {
                model: "dinf",
                start: r"tau[*]((\x y. y x) ebar[*])",
                result: "0",
                steps: &[
                    ("beta", r"tau[*](\y. y ebar[*])"),
                    ("tau", "tau[*](0t ebar[*])"),
                    ("taubar", "tau[*](0t)"),
                    ("tautaubar", "0"),
                ],
            },
        ],
    ),
    (
        "norm",
        &[
            Line {
                model: "norm",
                start: r"tau[p](\x. x)",
                result: "eps",
                steps: &[("tau", "tau[p](ebar[q])"), ("tautaubar", "eps")],
            },
            Line {
                model: "norm",
                start: r"tau[q](\x. x)",
                result: "0",
                steps: &[("tau", "tau[q](ebar[p])"), ("tautaubar", "0")],
            },
        ],
    ),
    (
        "z",
        &[
            Line {
                model: "z5",
                start: "tau[2](ebar[0] y)",
                result: "0",
                steps: &[("taubar", "tau[2](ebar[1])"), ("tautaubar", "0")],
            },
            Line {
                model: "z5",
                start: "tau[2](ebar[0] y z)",
                result: "eps",
                steps: &[("taubar", ""), ("taubar", "tau[2](ebar[2])"), ("tautaubar", "eps")],
            },
            Line {
                model: "z5",
                start: "tau[2](ebar[0] y z w)",
                result: "0",
                steps: &[("taubar", ""), ("taubar", ""), ("taubar", "tau[2](ebar[3])"), ("tautaubar", "0")],
            },
        ],
    ),
];

/// Expected SP verdicts of the shipped models.
pub const SP_TABLE: &[(&str, bool)] = &[
    ("dinf", true),
    ("norm", true),
    ("z1", true),
    ("z2", true),
    ("z3", true),
    ("z4", true),
    ("z5", true),
    ("pinf", false),
    ("u1", false),
    ("u2", false),
    ("u3", false),
];

/// The polarity witnesses given with the SP examples.
pub fn reference_witness(model: &str) -> Option<StratWitness> {
    let m = builtin::load(model)?;
    let src = match model {
        "dinf" => "* 1 false".to_string(),
        "norm" => "p 1 false\nq 1 true".to_string(),
        z if z.starts_with('z') => {
            let mut src = String::new();
            for a in m.atoms() {
                src.push_str(&format!("{a} 1 {}\n", a.parse::<u32>().ok()? % 2 == 0));
            }
            src
        }
        _ => return None,
    };
    StratWitness::parse(&m, &src).ok()
}

fn load(name: &str) -> Result<Model, SuiteError> {
    builtin::load(name).ok_or_else(|| SuiteError::Unknown(format!("model {name}")))
}

fn record(spec: &SuiteSpec, case: String, verdict: CaseVerdict, fuel: usize, detail: String) -> Record {
    Record { suite: spec.name.clone(), case, verdict, fuel, artifact: None, detail, trace: None }
}

fn pass_if(ok: bool) -> CaseVerdict {
    if ok {
        CaseVerdict::Pass
    } else {
        CaseVerdict::Fail
    }
}

fn opts(spec: &SuiteSpec) -> CheckOptions {
    CheckOptions { depth: spec.depth, pool_depth: spec.pool_depth }
}

// `None` when the search ran out of depth.
fn decide(m: &Model, env: &Env, t: &Term, target: &crate::model::TypeExpr, o: CheckOptions) -> Result<Option<bool>, SuiteError> {
    match decide_term(m, env, t, target, o) {
        Ok(b) => Ok(Some(b)),
        Err(SemanticsError::Budget) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn decided(o: &Outcome) -> Option<bool> {
    match o {
        Outcome::Converged { .. } => Some(true),
        Outcome::Refuted { .. } => Some(false),
        Outcome::FuelExhausted { .. } => None,
    }
}

fn show_query(q: &Query) -> String {
    let env: Vec<String> = q.env.iter().map(|(x, t)| format!("{x}:{t}")).collect();
    format!("{} |- {} : {}", env.join(", "), q.term, q.target)
}

fn traced(model: &str, m: &Model, e: &Expr, fuel: usize) -> Result<TraceArtifact, SuiteError> {
    let out = eval(e, m, EvalOptions::new(fuel).traced())?;
    Ok(TraceArtifact {
        model: model.to_string(),
        start: e.canonicalize(),
        steps: out.trace().iter().map(|s| (s.rule, s.path.clone())).collect(),
    })
}

pub(super) fn paper_traces(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    for (name, lines) in EXAMPLE_BLOCKS {
        let mut ok = true;
        let mut used = 0;
        let mut notes = Vec::new();
        let mut first_bad = None;
        for line in *lines {
            let m = load(line.model)?;
            let e = parse_expr(&m, line.start)?;
            let out = eval(&e, &m, EvalOptions::new(spec.fuel).traced())?;
            used += out.steps();
            let result = match &out {
                Outcome::Converged { result, .. } => result.to_string(),
                Outcome::Refuted { .. } => "0".to_string(),
                Outcome::FuelExhausted { .. } => out.label().to_string(),
            };
            let rules: Vec<&str> = out.trace().iter().map(|s| s.rule.name()).collect();
            let want: Vec<&str> = line.steps.iter().map(|(r, _)| *r).collect();
            let shown_ok = line.steps.len() == out.trace().len()
                && line
                    .steps
                    .iter()
                    .zip(out.trace())
                    .all(|((_, shown), s)| shown.is_empty() || s.result.to_string() == *shown);
            let line_ok = result == line.result && rules == want && shown_ok;
            if !line_ok {
                notes.push(format!("{}: got {result} via {}", line.start, rules.join(",")));
                if first_bad.is_none() {
                    first_bad = Some(traced(line.model, &m, &e, spec.fuel)?);
                }
            }
            ok &= line_ok;
        }
        let mut r = record(spec, name.to_string(), pass_if(ok), used, notes.join("; "));
        r.trace = first_bad;
        report.records.push(r);
    }
    Ok(report)
}

pub(super) fn sp_table(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    for (name, expected) in SP_TABLE {
        let m = load(name)?;
        let found = sp_search(&m, DEFAULT_SP_ATOM_BOUND)?;
        let detail = match &found {
            Some(w) => format!("SP: yes ({})", w.display(&m)),
            None => "SP: no".to_string(),
        };
        report.records.push(record(spec, name.to_string(), pass_if(found.is_some() == *expected), 0, detail));
        if let Some(w) = reference_witness(name) {
            let rep = sp_verify(&m, &w)?;
            let detail = format!("{}: {}", w.display(&m), rep.to_string().trim());
            report.records.push(record(spec, format!("{name}-witness"), pass_if(rep.is_valid()), 0, detail));
        }
    }
    Ok(report)
}

pub(super) fn extensionality(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    for name in ["dinf", "norm"] {
        let m = load(name)?;
        let id = parse_term(&m, r"\x. x")?;
        let one = parse_term(&m, r"\x y. x y")?;
        let universe = type_universe(&m, 2)?;
        let (mut disagree, mut undecided, mut bad) = (0, 0, Vec::new());
        for t in &universe {
            let a = decide(&m, &Env::new(), &id, t, opts(spec))?;
            let b = decide(&m, &Env::new(), &one, t, opts(spec))?;
            match (a, b) {
                (Some(a), Some(b)) if a != b => {
                    disagree += 1;
                    bad.push(t.to_string());
                }
                (Some(_), Some(_)) => {}
                _ => undecided += 1,
            }
        }
        let verdict = if disagree > 0 {
            CaseVerdict::Fail
        } else if undecided > 0 {
            CaseVerdict::Inconclusive
        } else {
            CaseVerdict::Pass
        };
        let detail = format!("{} types, {disagree} disagreements {}", universe.len(), bad.join(" "));
        report.records.push(record(spec, name.to_string(), verdict, 0, detail));
        report.stats.push((format!("{name}.types"), universe.len() as f64));
        report.stats.push((format!("{name}.disagreements"), disagree as f64));
        report.stats.push((format!("{name}.undecided"), undecided as f64));
    }
    Ok(report)
}

/// The seeded random queries behind the definability and β-first suites.
pub fn corpus(model: &str, seed: u64, n: usize) -> Result<Vec<Query>, SuiteError> {
    let m = load(model)?;
    let ls = labels(&m, 2)?;
    let salt = model.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(u64::from(b)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    Ok((0..n).map(|_| random_query(&mut rng, &ls, GenConfig::default())).collect())
}

// Derivation search against the oracle on one query.
fn both(m: &Model, q: &Query, spec: &SuiteSpec) -> Result<(Option<bool>, Outcome), SuiteError> {
    let by_check = decide(m, &q.env, &q.term, &q.target, opts(spec))?;
    let by_test = oracle(m, &q.term, &q.env, &q.target, spec.fuel)?;
    Ok((by_check, by_test))
}

fn contradicts(m: &Model, q: &Query, spec: &SuiteSpec) -> bool {
    match both(m, q, spec) {
        Ok((Some(a), o)) => decided(&o).is_some_and(|b| a != b),
        _ => false,
    }
}

pub(super) fn definability(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let n = spec.cases.unwrap_or(200);
    for name in ["dinf", "norm"] {
        let m = load(name)?;
        let (mut both_decided, mut contradictions) = (0, 0);
        for (i, q) in corpus(name, spec.seed, n)?.into_iter().enumerate() {
            let (a, o) = both(&m, &q, spec)?;
            let b = decided(&o);
            let case = format!("{name}/{i:03}");
            let mut r = match (a, b) {
                (Some(a), Some(b)) if a == b => {
                    both_decided += 1;
                    record(spec, case, CaseVerdict::Pass, o.steps(), show_query(&q))
                }
                (Some(a), Some(b)) => {
                    both_decided += 1;
                    contradictions += 1;
                    let min = minimize(q.clone(), shrink_query, |c| contradicts(&m, c, spec));
                    let detail = format!("check={a} oracle={b}; minimal: {}", show_query(&min));
                    let mut r = record(spec, case, CaseVerdict::Fail, o.steps(), detail);
                    r.trace = Some(traced(name, &m, &Expr::Test(min.test()), spec.fuel)?);
                    r
                }
                _ => record(spec, case, CaseVerdict::Inconclusive, o.steps(), show_query(&q)),
            };
            r.detail = format!("{} [check {:?}, oracle {}]", r.detail, a, o.label());
            report.records.push(r);
        }
        report.stats.push((format!("{name}.queries"), n as f64));
        report.stats.push((format!("{name}.decided_fraction"), both_decided as f64 / n.max(1) as f64));
        report.stats.push((format!("{name}.contradictions"), contradictions as f64));
    }
    Ok(report)
}

pub(super) fn approx_sens(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let forms = normal_forms(5, &["u"]);
    for name in ["dinf", "norm"] {
        let m = load(name)?;
        let universe = type_universe(&m, 1)?;
        let targets: Vec<_> = universe.iter().filter(|t| !t.is_omega()).cloned().collect();
        let (mut triples, mut disagreements, mut undecided) = (0, 0, 0);
        for (i, s) in forms.iter().enumerate() {
            let envs: Vec<Env> = if s.free_vars().is_empty() {
                vec![Env::new()]
            } else {
                universe.iter().map(|a| vec![("u".into(), a.clone())]).collect()
            };
            let approx = direct_approximant(s)?;
            let mut bad = Vec::new();
            let mut open = false;
            let mut used = 0;
            for env in &envs {
                for t in &targets {
                    triples += 1;
                    let a = approximant_passes(&m, s, env, t, spec.fuel)?;
                    let o = oracle(&m, &approx, env, t, spec.fuel)?;
                    used += o.steps();
                    let c = approximant_has(&m, s, env, t, opts(spec))?;
                    match decided(&o) {
                        Some(b) if a == b && b == c => {}
                        Some(b) => bad.push(format!("{}:{} passes={a} oracle={b} check={c}", env.first().map_or("-".into(), |(_, a)| a.to_string()), t)),
                        None => open = true,
                    }
                }
            }
            disagreements += bad.len();
            let verdict = if !bad.is_empty() {
                CaseVerdict::Fail
            } else if open {
                undecided += 1;
                CaseVerdict::Inconclusive
            } else {
                CaseVerdict::Pass
            };
            report.records.push(record(spec, format!("{name}/{i:03}"), verdict, used, format!("{s} {}", bad.join("; "))));
        }
        report.stats.push((format!("{name}.forms"), forms.len() as f64));
        report.stats.push((format!("{name}.triples"), triples as f64));
        report.stats.push((format!("{name}.disagreements"), disagreements as f64));
        report.stats.push((format!("{name}.undecided"), undecided as f64));
    }
    Ok(report)
}

/// `(λxy.y(xx))(λxy.y(xx))`.
pub const KERTH_V: &str = r"(\x y. y (x x)) (\x y. y (x x))";

pub(super) fn kerth(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let m = load("kerth")?;
    let v = parse_term(&m, KERTH_V)?;
    let b = m.parse_type("b")?;
    let env = Env::new();
    let derivable = decide(&m, &env, &v, &b, opts(spec))?;
    let verdict = match derivable {
        Some(true) => CaseVerdict::Pass,
        Some(false) => CaseVerdict::Fail,
        None => CaseVerdict::Inconclusive,
    };
    let shown = match derivable {
        Some(true) => "derivable",
        Some(false) => "not found",
        None => "undecided",
    };
    report.records.push(record(spec, "check".into(), verdict, 0, format!("|- V : b {shown}")));
    for fuel in [spec.fuel, 10 * spec.fuel] {
        let o = oracle(&m, &v, &env, &b, fuel)?;
        let ok = matches!(o, Outcome::FuelExhausted { stuck: false, .. });
        report.records.push(record(spec, format!("oracle-{fuel}"), pass_if(ok), o.steps(), o.label().to_string()));
    }
    let rep = approximability_check(&m, &v, &env, &b, spec.fuel, spec.budget, opts(spec))?;
    let ok = rep.verdict == ApproxVerdict::NoneWithinFuel && rep.examined == spec.budget && rep.disagreements.is_empty();
    let detail = format!("{:?} after {} approximants, {} disagreements", rep.verdict, rep.examined, rep.disagreements.len());
    report.records.push(record(spec, "approximants".into(), pass_if(ok), rep.examined, detail));
    report.stats.push(("approximants_examined".into(), rep.examined as f64));
    report.stats.push(("disagreements".into(), rep.disagreements.len() as f64));
    Ok(report)
}

pub(super) fn beta_first(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let n = spec.cases.unwrap_or(200);
    for name in ["dinf", "norm"] {
        let m = load(name)?;
        let (mut converging, mut split_ok, mut worst) = (0, 0, 0.0f64);
        for (i, q) in corpus(name, spec.seed, n)?.into_iter().enumerate() {
            let e = Expr::Test(q.test());
            let o = eval(&e, &m, EvalOptions::new(spec.fuel))?;
            if !o.is_converged() {
                continue;
            }
            converging += 1;
            let split = split_beta_first(&e, &m, 10 * spec.fuel)?;
            let ok = split.as_ref().is_some_and(|s| s.converged);
            let used = split.as_ref().map_or(10 * spec.fuel, |s| s.len());
            if ok {
                split_ok += 1;
                worst = worst.max(used as f64 / o.steps().max(1) as f64);
            }
            let mut r = record(spec, format!("{name}/{i:03}"), pass_if(ok), used, show_query(&q));
            if !ok {
                r.trace = Some(traced(name, &m, &e, spec.fuel)?);
            }
            report.records.push(r);
        }
        report.stats.push((format!("{name}.converging"), converging as f64));
        report.stats.push((format!("{name}.split"), split_ok as f64));
        report.stats.push((format!("{name}.worst_ratio"), worst));
    }
    Ok(report)
}

// Head strategy against random full-closure reduction on a closed test.
fn strategies_agree(m: &Model, e: &Expr, fuel: usize, seed: u64) -> Result<Option<bool>, SuiteError> {
    let head = decided(&eval(e, m, EvalOptions::new(fuel))?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = decided(&eval_random(e, m, EvalOptions::new(fuel), &mut rng)?);
    Ok(match (head, random) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    })
}

// A one-step reduct of the subject whose membership verdict differs.
fn reduct_violation(m: &Model, q: &Query, spec: &SuiteSpec) -> Result<Option<Term>, SuiteError> {
    let Some(before) = decide(m, &q.env, &q.term, &q.target, opts(spec))? else { return Ok(None) };
    for s in enumerate_steps(&Expr::Term(q.term.clone()), m)? {
        let Expr::Term(t) = s.result else { continue };
        if decide(m, &q.env, &t, &q.target, opts(spec))?.is_some_and(|after| after != before) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

pub(super) fn confluence(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let n = spec.cases.unwrap_or(500);
    let triples = (n / 5).max(100);
    let cfg = GenConfig { size: 6, tests: true };
    for name in ["dinf", "norm"] {
        let m = load(name)?;
        let ls = labels(&m, 2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(name.len() as u64));
        let (mut agree, mut violations) = (0, 0);
        for i in 0..n {
            let q = random_query(&mut rng, &ls, cfg);
            let e = Expr::Test(q.test());
            let run_seed: u64 = rng.gen();
            let case = format!("a/{name}/{i:03}");
            match strategies_agree(&m, &e, spec.fuel, run_seed)? {
                Some(true) => {
                    agree += 1;
                    report.records.push(record(spec, case, CaseVerdict::Pass, 0, e.to_string()));
                }
                Some(false) => {
                    violations += 1;
                    let min = minimize(q.term.clone(), shrink_term, |t| {
                        let c = Query { term: t.clone(), ..q.clone() };
                        matches!(strategies_agree(&m, &Expr::Test(c.test()), spec.fuel, run_seed), Ok(Some(false)))
                    });
                    let min = Expr::Test(Query { term: min, ..q.clone() }.test());
                    let mut r = record(spec, case, CaseVerdict::Fail, 0, format!("minimal: {min}"));
                    r.trace = Some(traced(name, &m, &min, spec.fuel)?);
                    report.records.push(r);
                }
                None => report.records.push(record(spec, case, CaseVerdict::Inconclusive, 0, e.to_string())),
            }
        }
        let mut sampled = 0;
        let mut attempts = 0;
        while sampled < triples && attempts < 50 * triples {
            attempts += 1;
            let q = random_query(&mut rng, &ls, cfg);
            let steps = enumerate_steps(&Expr::Term(q.term.clone()), &m)?;
            let Some(step) = steps.choose(&mut rng) else { continue };
            let Expr::Term(reduct) = &step.result else { continue };
            let case = format!("b/{name}/{sampled:03}");
            sampled += 1;
            let before = decide(&m, &q.env, &q.term, &q.target, opts(spec))?;
            let after = decide(&m, &q.env, reduct, &q.target, opts(spec))?;
            let detail = format!("{} --{}@{}--> {reduct}", show_query(&q), step.rule, step.path);
            match (before, after) {
                (Some(a), Some(b)) if a == b => report.records.push(record(spec, case, CaseVerdict::Pass, 1, detail)),
                (Some(_), Some(_)) => {
                    violations += 1;
                    let min = minimize(q.clone(), shrink_query, |c| matches!(reduct_violation(&m, c, spec), Ok(Some(_))));
                    let witness = reduct_violation(&m, &min, spec)?.map_or("-".into(), |t| t.to_string());
                    let detail = format!("{detail}; minimal: {} reduct {witness}", show_query(&min));
                    report.records.push(record(spec, case, CaseVerdict::Fail, 1, detail));
                }
                _ => report.records.push(record(spec, case, CaseVerdict::Inconclusive, 1, detail)),
            }
        }
        report.stats.push((format!("{name}.strategy_agree"), agree as f64));
        report.stats.push((format!("{name}.triples"), sampled as f64));
        report.stats.push((format!("{name}.violations"), violations as f64));
    }
    Ok(report)
}

/// Models of the subtyping suite.
pub const SUBTYPING_MODELS: &[&str] = &["dinf", "pinf", "norm", "z5", "u3", "kerth"];

pub(super) fn subtyping(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = SuiteReport::default();
    let depth = spec.cases.unwrap_or(3);
    for name in SUBTYPING_MODELS {
        let m = load(name)?;
        let universe = type_universe(&m, depth)?;
        let (mut decided_pairs, mut disagree, mut bad) = (0, 0, Vec::new());
        for a in &universe {
            for b in &universe {
                let fast = m.leq(a, b)?;
                if let Some(slow) = leq_bounded(&m, a, b, UNFOLD_DEPTH)? {
                    decided_pairs += 1;
                    if slow != fast {
                        disagree += 1;
                        if bad.len() < 5 {
                            bad.push(format!("{a} <= {b}: leq={fast} unfold={slow}"));
                        }
                    }
                }
            }
        }
        let pairs = universe.len() * universe.len();
        let detail = format!("{pairs} pairs, {decided_pairs} decided, {disagree} disagreements {}", bad.join("; "));
        report.records.push(record(spec, name.to_string(), pass_if(disagree == 0), decided_pairs, detail));
        report.stats.push((format!("{name}.pairs"), pairs as f64));
        report.stats.push((format!("{name}.decided"), decided_pairs as f64));
        report.stats.push((format!("{name}.disagreements"), disagree as f64));
    }
    Ok(report)
}

/// Unfolding depth of the subtyping oracle.
pub const UNFOLD_DEPTH: usize = 4;
