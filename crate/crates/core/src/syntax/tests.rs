use super::*;
use crate::error::ParseError;
use crate::model::builtin;

fn pinf() -> crate::model::Model {
    builtin::load("pinf").unwrap()
}

#[test]
fn parses_self_application() {
    let m = pinf();
    let t = parse_term(&m, "\\x. x x").unwrap();
    assert_eq!(t, Term::lam("x", Term::app(Term::var("x"), Term::var("x"))));
}

#[test]
fn parses_park_test() {
    let m = pinf();
    let q = parse_test(&m, "tau[*](ebar[*] ebar[*])").unwrap();
    let star = m.parse_type("*").unwrap();
    let want = Test::tau(star.clone(), Term::app(Term::ebar(star.clone()), Term::ebar(star)));
    assert_eq!(q, want);
}

#[test]
fn omega_label_is_rejected() {
    let m = pinf();
    assert!(matches!(parse_test(&m, "tau[w](x)"), Err(ParseError::OmegaLabel { .. })));
    assert!(matches!(parse_term(&m, "ebar[w]"), Err(ParseError::OmegaLabel { .. })));
}

#[test]
fn syntax_errors_carry_positions() {
    let m = pinf();
    match parse_term(&m, "\\x. (x") {
        Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn substitution_examples() {
    let n = Term::var("n");
    assert_eq!(Term::var("x").subst("x", &n), n);
    let t = Term::lam("y", Term::var("x")).subst("x", &Term::var("y"));
    match &t {
        Term::Lam(y2, b) => {
            assert_ne!(&**y2, "y");
            assert_eq!(**b, Term::var("y"));
        }
        _ => panic!("{t}"),
    }
    let m = pinf();
    let a = m.parse_type("*").unwrap();
    let q = Test::tau(a.clone(), Term::var("x")).subst("x", &Term::ebar(a.clone()));
    assert_eq!(q, Test::tau(a.clone(), Term::ebar(a)));
}

#[test]
fn canonicalize_examples() {
    let m = pinf();
    let p = parse_test(&m, "tau[*](x)").unwrap();
    let s = Test::Sum(vec![Test::Sum(vec![p.clone()]), Test::zero()]);
    assert_eq!(s.canonicalize(), p);
    assert_eq!(Test::Prod(vec![Test::eps(), p.clone()]).canonicalize(), p);
    let r = parse_test(&m, "tau[*](y)").unwrap();
    let nested = Test::Prod(vec![p.clone(), Test::Prod(vec![r.clone(), Test::eps()])]);
    let mut want = vec![p, r];
    want.sort();
    assert_eq!(nested.canonicalize(), Test::Prod(want));
}

#[test]
fn sums_keep_duplicates() {
    let m = pinf();
    let q = parse_test(&m, "tau[*](x) + tau[*](x)").unwrap();
    assert!(matches!(q, Test::Sum(ref v) if v.len() == 2));
}

#[test]
fn print_round_trip() {
    let m = pinf();
    for src in [
        "\\x y. y (x x)",
        "(\\x. x) (\\y. y) z",
        "bar[*](tau[*](x) * (eps + 0)) + ebar[* -> *]",
        "x (\\y. y) Omega 0t",
        "(ebar[*] + ebar[*]) x",
    ] {
        let t = parse_term(&m, src).unwrap();
        let back = parse_term(&m, &t.to_string()).unwrap();
        assert!(t.alpha_eq(&back), "{src} -> {t} -> {back}");
    }
    let q = parse_test(&m, "tau[*](x) * (tau[*](y) + eps) + 0").unwrap();
    assert_eq!(parse_test(&m, &q.to_string()).unwrap(), q);
}

#[test]
fn alpha_equivalence() {
    let m = pinf();
    let a = parse_term(&m, "\\x. \\y. x y").unwrap();
    let b = parse_term(&m, "\\u. \\v. u v").unwrap();
    let c = parse_term(&m, "\\u. \\v. v u").unwrap();
    assert!(a.alpha_eq(&b));
    assert!(!a.alpha_eq(&c));
}

mod props {
    use super::*;
    use crate::gen::{labels, random_term};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn term(seed: u64, size: usize) -> Term {
        let m = builtin::load("dinf").unwrap();
        let ls = labels(&m, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scope: Vec<Name> = vec!["u".into(), "v".into()];
        random_term(&mut rng, &scope, size, &ls, true)
    }

    proptest! {
        #[test]
        fn subst_canon_is_canonical_subst(seed: u64, size in 1usize..12, arg in 1usize..6) {
            let t = term(seed, size).canonicalize();
            let n = term(seed.wrapping_add(1), arg).canonicalize();
            let got = t.subst_canon("u", &n);
            prop_assert_eq!(&got, &t.subst("u", &n).canonicalize());
            prop_assert_eq!(&got, &got.canonicalize());
        }
    }
}
