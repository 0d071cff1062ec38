use defim::gen::{labels, random_term};
use defim::model::{builtin, type_universe, Model};
use defim::reduction::{eval, EvalOptions};
use defim::syntax::{parse_term, Expr, Name, Term, Test};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model() -> Model {
    builtin::load("norm").unwrap()
}

fn term(m: &Model, seed: u64, size: usize) -> Term {
    let ls = labels(m, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scope: Vec<Name> = vec!["u".into(), "v".into()];
    random_term(&mut rng, &scope, size, &ls, true)
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(seed: u64, size in 1usize..14) {
        let t = term(&model(), seed, size).canonicalize();
        prop_assert_eq!(t.canonicalize(), t);
    }

    #[test]
    fn printing_round_trips(seed: u64, size in 1usize..14) {
        let m = model();
        let t = term(&m, seed, size);
        let back = parse_term(&m, &t.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn alpha_key_is_stable(seed: u64, size in 1usize..14) {
        let t = term(&model(), seed, size);
        let k = t.alpha_key();
        prop_assert_eq!(k.alpha_key(), k.clone());
        prop_assert!(t.alpha_eq(&k));
    }

    #[test]
    fn substitution_bounds_free_variables(seed: u64, size in 1usize..14, arg in 1usize..6) {
        let m = model();
        let t = term(&m, seed, size);
        let n = term(&m, seed ^ 0x5eed, arg);
        let s = t.subst("u", &n);
        let mut allowed = t.free_vars();
        allowed.remove("u");
        allowed.extend(n.free_vars());
        prop_assert!(s.free_vars().is_subset(&allowed));
        if !t.free_vars().contains("u") {
            prop_assert!(s.alpha_eq(&t));
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed: u64, size in 1usize..10, pick: prop::sample::Index) {
        let m = model();
        let ls = labels(&m, 2).unwrap();
        let t = term(&m, seed, size);
        let e = Expr::Test(Test::tau(pick.get(&ls).clone(), t));
        let a = eval(&e, &m, EvalOptions::new(2_000)).unwrap();
        let b = eval(&e, &m, EvalOptions::new(2_000)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn meet_is_a_lower_bound(i: prop::sample::Index, j: prop::sample::Index) {
        let m = builtin::load("z3").unwrap();
        let u = type_universe(&m, 2).unwrap();
        let (a, b) = (i.get(&u), j.get(&u));
        let c = m.meet(a, b).unwrap();
        prop_assert!(m.leq(&c, a).unwrap() && m.leq(&c, b).unwrap());
        prop_assert!(m.leq(a, a).unwrap());
        prop_assert_eq!(m.leq(a, b).unwrap(), m.eq(&c, a).unwrap());
    }
}
