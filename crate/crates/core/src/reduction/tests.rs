use super::*;
use crate::model::builtin;
use crate::syntax::parse_expr;

fn run(model: &str, src: &str, fuel: usize) -> (Model, Outcome) {
    let m = builtin::load(model).unwrap();
    let e = parse_expr(&m, src).unwrap();
    let out = eval(&e, &m, EvalOptions::new(fuel).traced()).unwrap();
    (m, out)
}

fn rules(out: &Outcome) -> Vec<&'static str> {
    out.trace().iter().map(|s| s.rule.name()).collect()
}

#[test]
fn park_converges() {
    let (_, out) = run("pinf", r"tau[*](\x. x x)", 50);
    assert!(out.is_converged(), "{out:?}");
    assert_eq!(rules(&out)[..2], ["tau", "taubar"]);
    if let Outcome::Converged { result, .. } = &out {
        assert_eq!(result.to_string(), "eps");
    }
}

#[test]
fn scott_refutes() {
    let (_, out) = run("dinf", r"tau[*]((\x y. y x) ebar[*])", 50);
    assert!(out.is_refuted(), "{out:?}");
    assert_eq!(rules(&out), ["beta", "tau", "taubar", "tautaubar"]);
    let printed: Vec<String> = out.trace().iter().map(|s| s.result.to_string()).collect();
    assert_eq!(printed[1], "tau[*](0t ebar[*])");
    assert_eq!(printed[2], "tau[*](0t)");
}

#[test]
fn delta_refutes_in_dinf() {
    let (_, out) = run("dinf", r"tau[*](\x. x x)", 10_000);
    assert!(out.is_refuted(), "{out:?}");
    let (_, out) = run("pinf", r"tau[*]((\x. x x) (\x. x x))", 2_000);
    assert!(matches!(out, Outcome::FuelExhausted { stuck: false, .. }), "{out:?}");
}

#[test]
fn norm_identity() {
    let (_, out) = run("norm", r"tau[p](\x. x)", 50);
    assert!(out.is_converged());
    assert_eq!(rules(&out), ["tau", "tautaubar"]);
    assert_eq!(out.trace()[0].result.to_string(), "tau[p](ebar[q])");
    let (_, out) = run("norm", r"tau[q](\x. x)", 50);
    assert!(out.is_refuted());
    assert_eq!(rules(&out), ["tau", "tautaubar"]);
}

#[test]
fn z_climbs() {
    let (_, out) = run("z5", "tau[2](ebar[0] y z)", 50);
    assert!(out.is_converged(), "{out:?}");
    assert_eq!(rules(&out), ["taubar", "taubar", "tautaubar"]);
    assert_eq!(out.trace()[1].result.to_string(), "tau[2](ebar[2])");
}

#[test]
fn bare_omega_is_stuck() {
    let m = builtin::load("dinf").unwrap();
    let out = eval(&Expr::Term(Term::Omega), &m, EvalOptions::new(10)).unwrap();
    assert!(matches!(out, Outcome::FuelExhausted { stuck: true, steps: 0, .. }));
    let (_, out) = run("dinf", "tau[*](Omega)", 10);
    assert!(out.is_refuted());
}

#[test]
fn mhnf_shapes() {
    let m = builtin::load("dinf").unwrap();
    let p = |s: &str| parse_expr(&m, s).unwrap();
    assert!(is_mhnf(&p("eps")));
    assert!(is_mhnf(&p("tau[*](x y)")));
    assert!(is_mhnf(&p("tau[*](x y) + tau[*](\\x. x)")));
    assert!(!is_mhnf(&p("tau[*](\\x. x)")));
    assert!(!is_mhnf(&p("0")));
    assert!(is_mhnf(&p("\\x. x Omega")));
    assert!(!is_mhnf(&p("(\\x. x) y")));
}

#[test]
fn full_closure() {
    let m = builtin::load("norm").unwrap();
    let e = parse_expr(&m, r"(\x. x)((\y. y) z)").unwrap();
    assert_eq!(enumerate_steps(&e, &m).unwrap().len(), 2);
    let e = parse_expr(&m, "tau[p](ebar[q])").unwrap();
    let s = enumerate_steps(&e, &m).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].result.to_string(), "eps");
    let e = parse_expr(&m, "tau[p](x y)").unwrap();
    assert!(enumerate_steps(&e, &m).unwrap().is_empty());
}

#[test]
fn traces_replay() {
    for (model, src) in [
        ("pinf", r"tau[*](\x. x x)"),
        ("dinf", r"tau[*]((\x y. y x) ebar[*])"),
        ("z5", "tau[2](ebar[0] y z) + tau[1](\\x. x)"),
    ] {
        let (m, out) = run(model, src, 50);
        let start = parse_expr(&m, src).unwrap();
        let script: Vec<(RuleId, Path)> = out.trace().iter().map(|s| (s.rule, s.path.clone())).collect();
        let replayed = replay(&start, &script, &m).unwrap();
        assert_eq!(replayed, out.trace());
    }
}

#[test]
fn replay_rejects_wrong_rule() {
    let m = builtin::load("dinf").unwrap();
    let e = parse_expr(&m, r"tau[*]((\x y. y x) ebar[*])").unwrap();
    assert!(apply_at(&e, RuleId::Tau, &Path::default(), &m).is_err());
    assert!(apply_at(&e, RuleId::Beta, &Path(vec![0]), &m).is_ok());
}

#[test]
fn beta_first_scott() {
    let m = builtin::load("dinf").unwrap();
    let e = parse_expr(&m, r"tau[*]((\x y. y x) ebar[*]) + eps").unwrap();
    let split = split_beta_first(&e, &m, 100).unwrap().unwrap();
    assert!(split.beta.is_empty() && split.converged);
    let e = parse_expr(&m, r"tau[*]((\x y. y x) ebar[*])").unwrap();
    let split = split_beta_first(&e, &m, 100).unwrap().unwrap();
    assert_eq!(split.beta.len(), 1);
    assert!(!split.converged);
    let m = builtin::load("pinf").unwrap();
    let e = parse_expr(&m, r"tau[*](\y. (\x. y) z)").unwrap();
    let split = split_beta_first(&e, &m, 100).unwrap().unwrap();
    assert_eq!(split.beta.len(), 1);
    assert!(split.converged);
    assert!(split.tests.iter().all(|s| s.rule != RuleId::Beta));
}

#[test]
fn path_round_trip() {
    for p in ["root", "0", "1.0.3"] {
        assert_eq!(p.parse::<Path>().unwrap().to_string(), p);
    }
}
