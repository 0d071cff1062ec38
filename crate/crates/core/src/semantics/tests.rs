use super::*;
use crate::model::{builtin, type_universe};
use crate::syntax::parse_term;

fn ty(m: &Model, s: &str) -> TypeExpr {
    m.parse_type(s).unwrap()
}

fn closed(m: &Model, src: &str, target: &str) -> Verdict {
    let t = parse_term(m, src).unwrap();
    let v = check_term(m, &Env::new(), &t, &ty(m, target), CheckOptions::default()).unwrap();
    if let Verdict::Derivable(d) = &v {
        verify(d, m).unwrap();
    }
    v
}

#[test]
fn norm_identity() {
    let m = builtin::load("norm").unwrap();
    assert!(closed(&m, r"\x. x", "p").is_derivable());
    assert_eq!(closed(&m, r"\x. x", "q"), Verdict::NotFound);
}

#[test]
fn identity_has_every_endo_arrow() {
    for name in ["dinf", "norm", "z3", "kerth"] {
        let m = builtin::load(name).unwrap();
        for a in type_universe(&m, 2).unwrap() {
            let t = TypeExpr::arrow(a.clone(), a);
            let i = parse_term(&m, r"\x. x").unwrap();
            let v = check_term(&m, &Env::new(), &i, &t, CheckOptions::default()).unwrap();
            assert!(v.is_derivable(), "{name}: {t}");
        }
    }
}

#[test]
fn one_and_identity_agree() {
    for name in ["dinf", "norm"] {
        let m = builtin::load(name).unwrap();
        for t in type_universe(&m, 2).unwrap() {
            let a = closed(&m, r"\x. x", &t.to_string()).is_derivable();
            let b = closed(&m, r"\x y. x y", &t.to_string()).is_derivable();
            assert_eq!(a, b, "{name}: {t}");
        }
    }
}

#[test]
fn kerth_v_has_b() {
    let m = builtin::load("kerth").unwrap();
    let v = closed(&m, r"(\x y. y (x x)) (\x y. y (x x))", "b");
    assert!(v.is_derivable());
}

#[test]
fn oracle_cases() {
    let m = builtin::load("norm").unwrap();
    let i = parse_term(&m, r"\x. x").unwrap();
    assert!(oracle(&m, &i, &Env::new(), &ty(&m, "p"), 50).unwrap().is_converged());
    assert!(oracle(&m, &i, &Env::new(), &ty(&m, "q"), 50).unwrap().is_refuted());
    let x = parse_term(&m, "x").unwrap();
    let env: Env = vec![("x".into(), ty(&m, "q"))];
    assert!(oracle(&m, &x, &env, &ty(&m, "q"), 50).unwrap().is_converged());
    assert!(matches!(
        oracle(&m, &x, &Env::new(), &ty(&m, "q"), 50),
        Err(SemanticsError::Unbound(_))
    ));
}

#[test]
fn test_judgments() {
    let m = builtin::load("norm").unwrap();
    let q = crate::syntax::parse_test(&m, r"tau[p](\x. x) + tau[q](\x. x)").unwrap();
    let v = check_test(&m, &Env::new(), &q, CheckOptions::default()).unwrap();
    let Verdict::Derivable(d) = v else { panic!("sum should be derivable") };
    verify(&d, &m).unwrap();
    let q = crate::syntax::parse_test(&m, r"tau[p](\x. x) * tau[q](\x. x)").unwrap();
    assert_eq!(check_test(&m, &Env::new(), &q, CheckOptions::default()).unwrap(), Verdict::NotFound);
}

#[test]
fn bar_sums_are_typed_by_their_labels() {
    let m = builtin::load("norm").unwrap();
    assert!(closed(&m, "ebar[q]", "p").is_derivable());
    assert!(!closed(&m, "ebar[p]", "q").is_derivable());
    assert!(closed(&m, "ebar[p] + bar[q](0)", "p").is_derivable());
    assert!(!closed(&m, "0t", "p").is_derivable());
}

#[test]
fn tampered_derivation_is_rejected() {
    let m = builtin::load("norm").unwrap();
    let Verdict::Derivable(mut d) = closed(&m, r"\x. x", "p") else { panic!() };
    d.target = Some(ty(&m, "q"));
    assert!(verify(&d, &m).is_err());
}

#[test]
fn interp_clauses() {
    let m = builtin::load("dinf").unwrap();
    let x = parse_term(&m, "x").unwrap();
    let i = interp_enumerate(&m, &x, 2).unwrap();
    for a in &i.universe {
        for b in &i.universe {
            assert_eq!(i.contains(std::slice::from_ref(a), b), m.leq(a, b).unwrap());
        }
    }
    let id = parse_term(&m, r"\x. x").unwrap();
    let i = interp_enumerate(&m, &id, 2).unwrap();
    assert!(i.contains(&[], &ty(&m, "* -> *")));
    assert!(!i.contains(&[], &ty(&m, "*")));
    let om = parse_term(&m, "Omega").unwrap();
    let i = interp_enumerate(&m, &om, 2).unwrap();
    assert_eq!(i.members.len(), 1);
    assert!(i.contains(&[], &TypeExpr::omega()));
}

#[test]
fn interp_matches_check_on_small_terms() {
    for name in ["dinf", "norm"] {
        let m = builtin::load(name).unwrap();
        for src in [r"\x. x", r"\x y. x y", r"\x. x x", r"\x y. y x", r"\f x. f (f x)", r"(\x. x) (\y. y)"] {
            let t = parse_term(&m, src).unwrap();
            let i = interp_enumerate(&m, &t, 2).unwrap();
            for b in &i.universe {
                let c = check_term(&m, &Env::new(), &t, b, CheckOptions::default()).unwrap();
                assert_eq!(i.contains(&[], b), c.is_derivable(), "{name}: {src} : {b}");
            }
        }
    }
}
