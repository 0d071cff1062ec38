//! Acceptance criteria 1 to 9, one line each.
//!
//! A criterion listed in `EXPECTED_FAIL` is reported as FAIL but does not
//! fail the run; the run fails on any other FAIL and on an expected failure
//! that passes.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use defim::model::{builtin, sp_search, sp_verify, DEFAULT_SP_ATOM_BOUND};
use defim::reduction::{eval, EvalOptions, Outcome};
use defim::suite::{reference_witness, run, CaseVerdict, SuiteReport, SuiteSpec};
use defim::syntax::parse_expr;

/// Criteria whose failure is known and recorded.
const EXPECTED_FAIL: &[u32] = &[2];

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, cond: bool, note: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn info(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

fn suite(name: &str) -> SuiteReport {
    run(&SuiteSpec::new(name)).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn stat(r: &SuiteReport, key: &str) -> f64 {
    r.stat(key).unwrap_or_else(|| panic!("missing stat {key}"))
}

fn no_failures(c: &mut Check, r: &SuiteReport) {
    c.require(r.count(CaseVerdict::Fail) == 0, format!("{} failing cases", r.count(CaseVerdict::Fail)));
}

fn result_of(model: &str, src: &str) -> String {
    let m = builtin::load(model).expect("builtin");
    let e = parse_expr(&m, src).expect("parses");
    match eval(&e, &m, EvalOptions::new(10_000)).expect("evaluates") {
        Outcome::Converged { result, .. } => result.to_string(),
        Outcome::Refuted { .. } => "0".into(),
        o => o.label().to_string(),
    }
}

fn criterion_1() -> Check {
    let mut c = Check::new();
    let start = Instant::now();
    let cases = [
        ("pinf", r"tau[*](\x. x x)", "eps"),
        ("dinf", r"tau[*]((\x y. x y) ebar[*])", "eps"),
        ("dinf", r"tau[*]((\x y. y x) ebar[*])", "0"),
        ("norm", r"tau[p](\x. x)", "eps"),
        ("norm", r"tau[q](\x. x)", "0"),
        ("z5", "tau[2](ebar[0] y)", "0"),
        ("z5", "tau[2](ebar[0] y z)", "eps"),
        ("z5", "tau[2](ebar[0] y z w)", "0"),
    ];
    for (model, src, want) in cases {
        let got = result_of(model, src);
        c.require(got == want, format!("{src} gave {got}, expected {want}"));
    }
    let r = suite("paper-traces");
    c.require(r.records.len() == 4 && r.count(CaseVerdict::Pass) == 4, format!("traces {}/4", r.count(CaseVerdict::Pass)));
    let t = start.elapsed();
    c.require(t < Duration::from_secs(1), format!("took {t:?}"));
    c.info(format!("{}/4 blocks in {:.0?}", r.count(CaseVerdict::Pass), t));
    c
}

fn criterion_2() -> Check {
    let mut c = Check::new();
    let table = [
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
    for (name, sp) in table {
        let m = builtin::load(name).expect("builtin");
        let start = Instant::now();
        let found = sp_search(&m, DEFAULT_SP_ATOM_BOUND).expect("search");
        let t = start.elapsed();
        c.require(found.is_some() == sp, format!("{name}: SP {}", found.is_some()));
        c.require(t < Duration::from_secs(10), format!("{name}: search took {t:?}"));
    }
    for name in ["dinf", "norm", "z1", "z2", "z3", "z4", "z5"] {
        let m = builtin::load(name).expect("builtin");
        let w = reference_witness(name).expect("witness");
        let rep = sp_verify(&m, &w).expect("verify");
        c.require(rep.is_valid(), format!("{name} witness {}", rep.to_string().lines().next().unwrap_or("")));
    }
    c
}

fn criterion_3() -> Check {
    let mut c = Check::new();
    let r = suite("extensionality");
    for m in ["dinf", "norm"] {
        let d = stat(&r, &format!("{m}.disagreements"));
        let u = stat(&r, &format!("{m}.undecided"));
        c.require(d == 0.0 && u == 0.0, format!("{m}: {d} disagreements, {u} undecided"));
        c.info(format!("{m} {} types", stat(&r, &format!("{m}.types"))));
    }
    no_failures(&mut c, &r);
    c
}

fn criterion_4() -> Check {
    let mut c = Check::new();
    let r = suite("definability");
    for m in ["dinf", "norm"] {
        let n = stat(&r, &format!("{m}.queries"));
        let f = stat(&r, &format!("{m}.decided_fraction"));
        let k = stat(&r, &format!("{m}.contradictions"));
        c.require(n >= 200.0, format!("{m}: {n} queries"));
        c.require(k == 0.0, format!("{m}: {k} contradictions"));
        c.require(f >= 0.8, format!("{m}: decided {f:.3}"));
        c.info(format!("{m} {n} queries decided {f:.3}"));
    }
    no_failures(&mut c, &r);
    c
}

fn criterion_5() -> Check {
    let mut c = Check::new();
    let r = suite("approx-sens");
    for m in ["dinf", "norm"] {
        let d = stat(&r, &format!("{m}.disagreements"));
        let t = stat(&r, &format!("{m}.triples"));
        c.require(d == 0.0, format!("{m}: {d} disagreements"));
        c.require(t > 0.0, format!("{m}: no triples"));
        c.info(format!("{m} {t} triples"));
    }
    no_failures(&mut c, &r);
    c
}

fn criterion_6() -> Check {
    let mut c = Check::new();
    let r = suite("kerth");
    for case in ["check", "oracle-10000", "oracle-100000", "approximants"] {
        let v = r.records.iter().find(|x| x.case == case).map(|x| x.verdict);
        c.require(v == Some(CaseVerdict::Pass), format!("{case}: {v:?}"));
    }
    let n = stat(&r, "approximants_examined");
    c.require(n == 1000.0, format!("{n} approximants examined"));
    c.require(stat(&r, "disagreements") == 0.0, "approximant disagreements");
    c.info(format!("{n} approximants examined"));
    c
}

fn criterion_7() -> Check {
    let mut c = Check::new();
    let r = suite("beta-first");
    for m in ["dinf", "norm"] {
        let conv = stat(&r, &format!("{m}.converging"));
        let split = stat(&r, &format!("{m}.split"));
        c.require(conv > 0.0 && split == conv, format!("{m}: {split}/{conv} split"));
        c.info(format!("{m} {split}/{conv}"));
    }
    no_failures(&mut c, &r);
    c
}

fn criterion_8() -> Check {
    let mut c = Check::new();
    let r = suite("confluence");
    let a_cases = r.records.iter().filter(|x| x.case.starts_with("a/")).count();
    c.require(a_cases >= 500, format!("{a_cases} strategy cases"));
    for m in ["dinf", "norm"] {
        let t = stat(&r, &format!("{m}.triples"));
        let v = stat(&r, &format!("{m}.violations"));
        c.require(t >= 100.0, format!("{m}: {t} triples"));
        c.require(v == 0.0, format!("{m}: {v} violations"));
    }
    no_failures(&mut c, &r);
    c.info(format!("{a_cases} strategy cases"));
    c
}

fn criterion_9() -> Check {
    let mut c = Check::new();
    let r = suite("subtyping");
    for m in ["dinf", "pinf", "norm", "z5", "u3", "kerth"] {
        let d = stat(&r, &format!("{m}.disagreements"));
        let k = stat(&r, &format!("{m}.decided"));
        c.require(d == 0.0, format!("{m}: {d} disagreements"));
        c.require(k > 0.0, format!("{m}: nothing decided"));
        c.info(format!("{m} {k} decided"));
    }
    no_failures(&mut c, &r);
    c
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Check); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (n, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let c = f();
        let xfail = EXPECTED_FAIL.contains(&n);
        let tag = match (c.ok, xfail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if c.ok == xfail {
            unexpected += 1;
        }
        println!("criterion {n}: {tag} [{:.1?}] {}", start.elapsed(), c.notes.join("; "));
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected results");
        ExitCode::FAILURE
    }
}
