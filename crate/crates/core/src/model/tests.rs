use super::*;

fn m(name: &str) -> Model {
    builtin::load(name).unwrap()
}

fn t(m: &Model, s: &str) -> TypeExpr {
    m.parse_type(s).unwrap()
}

#[test]
fn shipped_models_validate() {
    for (name, _) in builtin::SOURCES {
        let r = check_model(&m(name));
        assert!(r.is_valid(), "{name}: {r}");
    }
}

#[test]
fn ext_of_examples() {
    let d = m("dinf");
    let e = d.ext_of(&t(&d, "*")).unwrap();
    assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![(TypeExpr::omega(), t(&d, "*"))]);
    assert!(d.ext_of(&TypeExpr::omega()).unwrap().is_empty());
    let n = m("norm");
    // p -> q folds to the atom q through the arrow table
    let x = TypeExpr::arrow(t(&n, "p"), t(&n, "q")).meet(&t(&n, "p"));
    let e = n.ext_of(&x).unwrap();
    let want: ExtSet = [(t(&n, "p"), t(&n, "q")), (t(&n, "q"), t(&n, "p"))].into_iter().collect();
    assert_eq!(e, want);
}

#[test]
fn meet_examples() {
    let n = m("norm");
    assert_eq!(n.meet(&t(&n, "p"), &t(&n, "q")).unwrap(), t(&n, "q"));
    assert_eq!(n.meet(&t(&n, "p"), &TypeExpr::omega()).unwrap(), t(&n, "p"));
    let d = m("dinf");
    let x = d.meet(&t(&d, "w -> *"), &t(&d, "*")).unwrap();
    assert_eq!(x, t(&d, "*"));
}

#[test]
fn leq_examples() {
    let n = m("norm");
    assert!(n.leq(&t(&n, "q"), &t(&n, "p")).unwrap());
    assert!(!n.leq(&t(&n, "p"), &t(&n, "q")).unwrap());
    assert!(n.leq(&t(&n, "p -> q"), &TypeExpr::omega()).unwrap());
    let d = m("dinf");
    assert!(!d.leq(&TypeExpr::omega(), &t(&d, "*")).unwrap());
    assert!(d.eq(&t(&d, "*"), &t(&d, "w -> *")).unwrap());
    assert!(!d.eq(&t(&d, "*"), &t(&d, "* -> *")).unwrap());
    let z = m("z5");
    assert!(z.leq(&t(&z, "w -> 3"), &t(&z, "2")).unwrap());
    assert!(!z.leq(&t(&z, "2"), &t(&z, "3")).unwrap());
}

#[test]
fn kerth_order() {
    let k = m("kerth");
    for x in ["b", "c", "d"] {
        assert!(k.leq(&t(&k, "a"), &t(&k, x)).unwrap());
        assert!(!k.leq(&t(&k, x), &t(&k, "a")).unwrap());
    }
    assert!(!k.leq(&t(&k, "b"), &t(&k, "c")).unwrap());
    assert!(!k.leq(&t(&k, "c"), &t(&k, "d")).unwrap());
    assert!(!k.leq(&t(&k, "d"), &t(&k, "c")).unwrap());
}

#[test]
fn commutativity_violation() {
    let m = Model::parse("atoms w a b\nmeet a b = a\nmeet b a = b\next a = (w -> a)\next b = (w -> b)\n").unwrap();
    assert!(check_model(&m).has(ViolationKind::Commutativity));
}

#[test]
fn altered_norm_is_rejected() {
    let n = m("norm");
    let q = t(&n, "q");
    let bad = n.with_ext("q", vec![(q.clone(), q)]).unwrap();
    assert!(check_model(&bad).has(ViolationKind::ExtReconstruction));
}

#[test]
fn sp_examples() {
    let d = m("dinf");
    let w = StratWitness { rank: vec![1], polarity: vec![false] };
    assert!(sp_verify(&d, &w).unwrap().is_valid());
    let n = m("norm");
    let (p, q) = (n.atom_index("p").unwrap(), n.atom_index("q").unwrap());
    let mut w = StratWitness { rank: vec![1, 1], polarity: vec![false, false] };
    w.polarity[q] = true;
    w.polarity[p] = false;
    assert!(sp_verify(&n, &w).unwrap().is_valid());
    let pk = m("pinf");
    for v in [false, true] {
        for r in 1..3 {
            let rep = sp_verify(&pk, &StratWitness { rank: vec![r], polarity: vec![v] }).unwrap();
            assert!(rep.has(ViolationKind::SpSourcePolarity));
        }
    }
}

#[test]
fn sp_search_verdicts() {
    for name in ["dinf", "norm", "z1", "z2", "z3", "z4", "z5"] {
        assert!(sp_search(&m(name), DEFAULT_SP_ATOM_BOUND).unwrap().is_some(), "{name}");
    }
    for name in ["pinf", "u1", "u2", "u3"] {
        assert!(sp_search(&m(name), DEFAULT_SP_ATOM_BOUND).unwrap().is_none(), "{name}");
    }
    let one = Model::parse("atoms w\n").unwrap();
    assert!(sp_search(&one, DEFAULT_SP_ATOM_BOUND).unwrap().is_some());
    assert!(matches!(
        sp_search(&m("kerth"), DEFAULT_SP_ATOM_BOUND),
        Err(ModelError::TooManyAtoms { .. })
    ));
}

#[test]
fn universe_sizes() {
    let d = m("dinf");
    let u1 = type_universe(&d, 1).unwrap();
    assert_eq!(u1.len(), 2);
    let u2 = type_universe(&d, 2).unwrap();
    // w, *, * -> *; (w -> *) folds to *, (w -> w) and (* -> w) to w
    assert_eq!(u2.len(), 3);
}

#[test]
fn dsl_round_trip() {
    for (name, _) in builtin::SOURCES {
        let a = m(name);
        let b = Model::parse(&a.to_dsl()).unwrap();
        assert_eq!(a.to_dsl(), b.to_dsl());
    }
}
