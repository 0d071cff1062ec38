use criterion::{black_box, criterion_group, criterion_main, Criterion};

use defim::approximants::approximability_check;
use defim::model::{builtin, sp_search, type_universe, DEFAULT_SP_ATOM_BOUND};
use defim::reduction::{eval, EvalOptions};
use defim::semantics::{check_term, CheckOptions, Env};
use defim::syntax::{parse_expr, parse_term};

fn reduce(c: &mut Criterion) {
    let pinf = builtin::load("pinf").unwrap();
    let park = parse_expr(&pinf, r"tau[*](\x. x x)").unwrap();
    c.bench_function("eval park", |b| b.iter(|| eval(black_box(&park), &pinf, EvalOptions::new(10_000)).unwrap()));
    let omega = parse_expr(&pinf, r"tau[*]((\x. x x) (\x. x x))").unwrap();
    c.bench_function("eval omega 10^4", |b| b.iter(|| eval(black_box(&omega), &pinf, EvalOptions::new(10_000)).unwrap()));
}

fn check(c: &mut Criterion) {
    let kerth = builtin::load("kerth").unwrap();
    let v = parse_term(&kerth, r"(\x y. y (x x)) (\x y. y (x x))").unwrap();
    let b = kerth.parse_type("b").unwrap();
    let env = Env::new();
    c.bench_function("check kerth V : b", |bn| {
        bn.iter(|| check_term(&kerth, &env, black_box(&v), &b, CheckOptions::default()).unwrap())
    });
    let mut g = c.benchmark_group("approximants");
    g.sample_size(10);
    g.bench_function("kerth 100", |bn| {
        bn.iter(|| approximability_check(&kerth, &v, &env, &b, 10_000, 100, CheckOptions::default()).unwrap())
    });
    g.finish();
}

fn subtyping(c: &mut Criterion) {
    let z5 = builtin::load("z5").unwrap();
    let u = type_universe(&z5, 2).unwrap();
    c.bench_function("leq z5 depth-2 universe", |b| {
        b.iter(|| {
            z5.clear_cache();
            u.iter().flat_map(|x| u.iter().map(move |y| (x, y))).filter(|(x, y)| z5.leq(x, y).unwrap()).count()
        })
    });
    let u3 = builtin::load("u3").unwrap();
    c.bench_function("sp_search u3", |b| b.iter(|| sp_search(black_box(&u3), DEFAULT_SP_ATOM_BOUND).unwrap()));
}

criterion_group!(benches, reduce, check, subtyping);
criterion_main!(benches);
