use super::*;
use crate::model::builtin;
use crate::syntax::parse_term;

fn p(s: &str) -> Term {
    let m = builtin::load("dinf").unwrap();
    parse_term(&m, s).unwrap()
}

#[test]
fn direct() {
    assert_eq!(direct_approximant(&p(r"(\x. x) y")).unwrap(), Term::Omega);
    assert_eq!(direct_approximant(&p(r"\x. x ((\y. y) z)")).unwrap(), p(r"\x. x Omega"));
    assert_eq!(direct_approximant(&p(r"\x y z. y")).unwrap(), p(r"\x y z. y"));
    assert!(direct_approximant(&p("ebar[*]")).is_err());
}

#[test]
fn bohm_normal() {
    assert!(is_bohm_normal(&Term::Omega));
    assert!(is_bohm_normal(&p(r"\x. x Omega")));
    assert!(!is_bohm_normal(&p(r"(\x. x) y")));
    assert!(!is_bohm_normal(&p(r"\x. Omega")));
    assert!(!is_bohm_normal(&p(r"x (Omega y)")));
}

#[test]
fn chains() {
    let id: Vec<Term> = approximants(&p(r"\x. x"), 10).unwrap().collect();
    assert_eq!(id, vec![p(r"\x. x")]);
    let delta: Vec<Term> = approximants(&p(r"(\x. x x) (\x. x x)"), 100).unwrap().collect();
    assert_eq!(delta, vec![Term::Omega]);
    let y = r"(\f. (\z. f (z z)) (\z. f (z z))) (\g x. x (g x))";
    let chain: Vec<Term> = approximants(&p(y), 60).unwrap().take(4).collect();
    assert_eq!(chain[0], Term::Omega);
    assert_eq!(chain[1], p(r"\x. x Omega"));
    assert_eq!(chain[2], p(r"\x. x (x Omega)"));
    assert_eq!(chain[3], p(r"\x. x (x (x Omega))"));
    for s in approximants(&p(y), 200).unwrap() {
        assert!(is_bohm_normal(&s));
    }
}

#[test]
fn norm_identity_witness() {
    let m = builtin::load("norm").unwrap();
    let i = parse_term(&m, r"\x. x").unwrap();
    let target = m.parse_type("p").unwrap();
    let r = approximability_check(&m, &i, &Env::new(), &target, 100, 10, CheckOptions::default()).unwrap();
    assert_eq!(r.verdict, ApproxVerdict::WitnessFound { approximant: i, index: 0 });
    let r = approximability_check(&m, &Term::Omega, &Env::new(), &target, 100, 10, CheckOptions::default())
        .unwrap();
    assert_eq!(r.verdict, ApproxVerdict::NoneWithinFuel);
    assert!(r.disagreements.is_empty());
}
