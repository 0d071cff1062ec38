use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use defim::approximants::{approximability_check, approximants, ApproxVerdict};
use defim::model::{builtin, check_model, sp_search, sp_verify, StratWitness, DEFAULT_SP_ATOM_BOUND};
use defim::reduction::{eval, eval_random, replay, EvalOptions, Outcome};
use defim::semantics::{check_term, oracle, CheckOptions, Env, Verdict};
use defim::suite::{self, CaseVerdict, SuiteSpec, TraceArtifact, SUITES};
use defim::syntax::{parse_expr, parse_term};
use defim::{Model, SemanticsError};

#[derive(Parser)]
#[command(name = "defim", version, about = "Filter models, tests and approximants")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Model file or shipped model name.
    #[arg(long, global = true, default_value = "dinf")]
    model: String,
    /// Reduction step budget.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
    /// Derivation depth budget.
    #[arg(long, global = true, default_value_t = 12)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit 3 on inconclusive results.
    #[arg(long, global = true)]
    strict: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model and optionally check stratified positivity.
    Model {
        /// Model file or shipped model name; defaults to --model.
        file: Option<String>,
        #[arg(long)]
        sp: bool,
        /// Verify this rank and polarity assignment instead of searching.
        #[arg(long, requires = "sp")]
        witness: Option<PathBuf>,
    },
    /// Reduce a term or test.
    Reduce {
        #[arg(long, value_enum, default_value_t = Strategy::Head)]
        strategy: Strategy,
        #[arg(long)]
        trace: bool,
        /// Replay a trace file instead of reducing.
        #[arg(long, conflicts_with = "expr")]
        replay: Option<PathBuf>,
        #[arg(required_unless_present = "replay")]
        expr: Option<String>,
    },
    /// Decide `env |- term : target`.
    Member {
        /// Comma-separated `x:<type>` bindings.
        #[arg(long, default_value = "")]
        env: String,
        #[arg(long)]
        target: String,
        /// Run the test oracle instead of derivation search.
        #[arg(long, conflicts_with = "cross_check")]
        oracle: bool,
        /// Run both and report agreement.
        #[arg(long)]
        cross_check: bool,
        term: String,
    },
    /// List the approximants met within the fuel.
    Approx {
        /// Stop after this many approximants.
        #[arg(long)]
        limit: Option<usize>,
        term: String,
    },
    /// Look for an approximant that has the target type.
    ApproxMember {
        #[arg(long, default_value = "")]
        env: String,
        #[arg(long)]
        target: String,
        /// Number of approximants examined.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        term: String,
    },
    /// Property suites.
    Suite {
        #[command(subcommand)]
        action: SuiteAction,
    },
}

#[derive(Subcommand)]
enum SuiteAction {
    /// Run a suite, or `all`.
    Run {
        name: String,
        /// Directory for traces of failing cases.
        #[arg(long)]
        artifacts: Option<PathBuf>,
        /// Override the suite's case count.
        #[arg(long)]
        cases: Option<usize>,
        /// Approximant budget of the Kerth suite.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// List the suites.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Head,
    Full,
}

/// Bad input, reported with exit status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

type Res = Result<u8, InputError>;

fn input<E: Into<anyhow::Error>>(e: E) -> InputError {
    InputError(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Res {
    let g = cli.global;
    match cli.command {
        Command::Model { file, sp, witness } => cmd_model(&g, file.as_deref().unwrap_or(&g.model), sp, witness.as_deref()),
        Command::Reduce { strategy, trace, replay, expr } => match replay {
            Some(file) => cmd_replay(&g, &file),
            None => cmd_reduce(&g, strategy, trace, expr.as_deref().unwrap_or_default()),
        },
        Command::Member { env, target, oracle, cross_check, term } => {
            cmd_member(&g, &env, &target, oracle, cross_check, &term)
        }
        Command::Approx { limit, term } => cmd_approx(&g, limit, &term),
        Command::ApproxMember { env, target, budget, term } => cmd_approx_member(&g, &env, &target, budget, &term),
        Command::Suite { action: SuiteAction::List } => {
            for (name, about) in SUITES {
                println!("{name:<16}{about}");
            }
            Ok(0)
        }
        Command::Suite { action: SuiteAction::Run { name, artifacts, cases, budget } } => {
            cmd_suite(&g, &name, artifacts, cases, budget)
        }
    }
}

/// Reads a model file, or a shipped model when no such file exists.
fn load_model_unchecked(spec: &str) -> Result<Model, InputError> {
    let path = FsPath::new(spec);
    if path.exists() {
        let src = fs::read_to_string(path).with_context(|| format!("reading {spec}")).map_err(input)?;
        Model::parse(&src).with_context(|| format!("in {spec}")).map_err(input)
    } else {
        builtin::load(spec).ok_or_else(|| {
            let names: Vec<&str> = builtin::names().collect();
            input(anyhow!("no model file `{spec}` and no shipped model of that name ({})", names.join(", ")))
        })
    }
}

/// A model that also passes validation.
fn load_model(spec: &str) -> Result<Model, InputError> {
    let m = load_model_unchecked(spec)?;
    let rep = check_model(&m);
    if !rep.is_valid() {
        return Err(input(anyhow!("model `{}` is {}", m.name(), rep.to_string().trim_end())));
    }
    Ok(m)
}

fn parse_env(m: &Model, src: &str) -> Result<Env, InputError> {
    let mut env = Env::new();
    for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, t) = part.split_once(':').ok_or_else(|| input(anyhow!("binding `{part}` is not `x:<type>`")))?;
        env.push((x.trim().into(), m.parse_type(t.trim()).map_err(input)?));
    }
    Ok(env)
}

fn inconclusive(g: &Global) -> u8 {
    if g.strict {
        3
    } else {
        0
    }
}

fn cmd_model(g: &Global, file: &str, sp: bool, witness: Option<&FsPath>) -> Res {
    let m = load_model_unchecked(file)?;
    let rep = check_model(&m);
    if !rep.is_valid() {
        if g.json {
            let v: Vec<String> = rep.violations.iter().map(ToString::to_string).collect();
            println!("{}", json!({ "model": m.name(), "valid": false, "violations": v }));
        } else {
            print!("{rep}");
        }
        return Ok(2);
    }
    if !sp {
        if g.json {
            println!("{}", json!({ "model": m.name(), "valid": true }));
        } else {
            println!("VALID");
        }
        return Ok(0);
    }
    match witness {
        Some(path) => {
            let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
            let w = StratWitness::parse(&m, &src).map_err(input)?;
            let r = sp_verify(&m, &w).map_err(input)?;
            if g.json {
                let v: Vec<String> = r.violations.iter().map(ToString::to_string).collect();
                println!(
                    "{}",
                    json!({ "model": m.name(), "valid": true, "witness": w.display(&m).to_string(), "sp": r.is_valid(), "violations": v })
                );
            } else if r.is_valid() {
                println!("VALID; SP: yes ({})", w.display(&m));
            } else {
                print!("VALID; SP witness ({}) {r}", w.display(&m));
            }
            Ok(if r.is_valid() { 0 } else { 1 })
        }
        None => {
            let found = sp_search(&m, DEFAULT_SP_ATOM_BOUND).map_err(input)?;
            if g.json {
                let w = found.as_ref().map(|w| w.display(&m).to_string());
                println!("{}", json!({ "model": m.name(), "valid": true, "sp": found.is_some(), "witness": w }));
            } else {
                match &found {
                    Some(w) => println!("VALID; SP: yes ({})", w.display(&m)),
                    None => println!("VALID; SP: no"),
                }
            }
            Ok(0)
        }
    }
}

fn outcome_json(o: &Outcome) -> serde_json::Value {
    let trace: Vec<String> = o.trace().iter().map(ToString::to_string).collect();
    match o {
        Outcome::Converged { result, steps, .. } => {
            json!({ "outcome": o.label(), "result": result.to_string(), "steps": steps, "trace": trace })
        }
        Outcome::Refuted { steps, .. } => json!({ "outcome": o.label(), "result": "0", "steps": steps, "trace": trace }),
        Outcome::FuelExhausted { last, steps, stuck, .. } => {
            json!({ "outcome": o.label(), "last": last.to_string(), "steps": steps, "stuck": stuck, "trace": trace })
        }
    }
}

fn outcome_line(o: &Outcome) -> String {
    match o {
        Outcome::Converged { result, steps, .. } => format!("CONVERGED {result} ({steps} steps)"),
        Outcome::Refuted { steps, .. } => format!("REFUTED ({steps} steps)"),
        Outcome::FuelExhausted { last, steps, stuck: true, .. } => format!("FUEL-OUT stuck at {last} ({steps} steps)"),
        Outcome::FuelExhausted { last, steps, .. } => format!("FUEL-OUT at {last} ({steps} steps)"),
    }
}

fn cmd_reduce(g: &Global, strategy: Strategy, trace: bool, src: &str) -> Res {
    let m = load_model(&g.model)?;
    let e = parse_expr(&m, src).map_err(input)?;
    let opts = EvalOptions { fuel: g.fuel, trace, forbid_beta: false };
    let out = match strategy {
        Strategy::Head => eval(&e, &m, opts),
        Strategy::Full => eval_random(&e, &m, opts, &mut ChaCha8Rng::seed_from_u64(g.seed)),
    }
    .map_err(input)?;
    if g.json {
        println!("{}", outcome_json(&out));
    } else {
        println!("{}", e.canonicalize());
        for s in out.trace() {
            println!("{s}");
        }
        println!("{}", outcome_line(&out));
    }
    Ok(if out.is_decided() { 0 } else { inconclusive(g) })
}

fn cmd_replay(g: &Global, file: &FsPath) -> Res {
    let src = fs::read_to_string(file).with_context(|| format!("reading {}", file.display())).map_err(input)?;
    let (model, start, steps) = TraceArtifact::parse_script(&src).map_err(|e| input(anyhow!("{}: {e}", file.display())))?;
    let m = load_model(&model)?;
    let start = parse_expr(&m, &start).map_err(input)?;
    match replay(&start, &steps, &m) {
        Ok(done) => {
            let last = done.last().map_or_else(|| start.canonicalize(), |s| s.result.clone());
            if g.json {
                let trace: Vec<String> = done.iter().map(ToString::to_string).collect();
                println!("{}", json!({ "replayed": true, "result": last.to_string(), "trace": trace }));
            } else {
                println!("{}", start.canonicalize());
                for s in &done {
                    println!("{s}");
                }
                println!("REPLAYED {} steps, final {last}", done.len());
            }
            Ok(0)
        }
        Err(e) => {
            if g.json {
                println!("{}", json!({ "replayed": false, "error": e.to_string() }));
            } else {
                println!("REPLAY FAILED: {e}");
            }
            Ok(1)
        }
    }
}

fn check_opts(g: &Global) -> CheckOptions {
    CheckOptions { depth: g.depth, ..CheckOptions::default() }
}

fn cmd_member(g: &Global, env: &str, target: &str, use_oracle: bool, cross: bool, src: &str) -> Res {
    let m = load_model(&g.model)?;
    let env = parse_env(&m, env)?;
    let target = m.parse_type(target).map_err(input)?;
    let term = parse_term(&m, src).map_err(input)?;
    let derived = if use_oracle {
        None
    } else {
        Some(match check_term(&m, &env, &term, &target, check_opts(g)) {
            Ok(v) => Some(v),
            Err(SemanticsError::Budget) => None,
            Err(e) => return Err(input(e)),
        })
    };
    let ran = if use_oracle || cross { Some(oracle(&m, &term, &env, &target, g.fuel).map_err(input)?) } else { None };
    let check_label = derived.as_ref().map(|d| match d {
        Some(Verdict::Derivable(_)) => "DERIVABLE",
        Some(Verdict::NotFound) => "NOT-FOUND",
        None => "BUDGET",
    });
    let agree = match (&derived, &ran) {
        (Some(Some(d)), Some(o)) if o.is_decided() => Some(d.is_derivable() == o.is_converged()),
        _ => None,
    };
    if g.json {
        let derivation = match &derived {
            Some(Some(Verdict::Derivable(d))) => Some(d.to_string()),
            _ => None,
        };
        println!(
            "{}",
            json!({
                "check": check_label,
                "derivation": derivation,
                "oracle": ran.as_ref().map(Outcome::label),
                "agree": agree,
            })
        );
    } else {
        match &derived {
            Some(Some(Verdict::Derivable(d))) => print!("DERIVABLE\n{d}"),
            Some(Some(Verdict::NotFound)) => println!("NOT-FOUND"),
            Some(None) => println!("INCONCLUSIVE: derivation depth {} exhausted", g.depth),
            None => {}
        }
        if let Some(o) = &ran {
            println!("ORACLE: {} ({} steps)", o.label(), o.steps());
        }
        if cross {
            match agree {
                Some(true) => println!("AGREE"),
                Some(false) => println!("DISAGREE"),
                None => println!("UNDECIDED"),
            }
        }
    }
    let undecided = matches!(derived, Some(None)) || ran.as_ref().is_some_and(|o| !o.is_decided());
    Ok(match agree {
        Some(false) => 1,
        _ if undecided => inconclusive(g),
        _ => 0,
    })
}

fn cmd_approx(g: &Global, limit: Option<usize>, src: &str) -> Res {
    let m = load_model(&g.model)?;
    let term = parse_term(&m, src).map_err(input)?;
    let chain = approximants(&term, g.fuel).map_err(input)?;
    for (i, a) in chain.take(limit.unwrap_or(usize::MAX)).enumerate() {
        if g.json {
            println!("{}", json!({ "index": i, "approximant": a.to_string() }));
        } else {
            println!("{i}\t{a}");
        }
    }
    Ok(0)
}

fn cmd_approx_member(g: &Global, env: &str, target: &str, budget: usize, src: &str) -> Res {
    let m = load_model(&g.model)?;
    let env = parse_env(&m, env)?;
    let target = m.parse_type(target).map_err(input)?;
    let term = parse_term(&m, src).map_err(input)?;
    let rep = approximability_check(&m, &term, &env, &target, g.fuel, budget, check_opts(g)).map_err(input)?;
    let disagreements: Vec<String> = rep.disagreements.iter().map(ToString::to_string).collect();
    if g.json {
        let (verdict, witness, index) = match &rep.verdict {
            ApproxVerdict::WitnessFound { approximant, index } => ("WITNESS", Some(approximant.to_string()), Some(*index)),
            ApproxVerdict::NoneWithinFuel => ("NONE-WITHIN-FUEL", None, None),
        };
        println!(
            "{}",
            json!({ "verdict": verdict, "witness": witness, "index": index, "examined": rep.examined, "disagreements": disagreements })
        );
    } else {
        match &rep.verdict {
            ApproxVerdict::WitnessFound { approximant, index } => println!("WITNESS #{index} {approximant}"),
            ApproxVerdict::NoneWithinFuel => println!("NONE-WITHIN-FUEL after {} approximants", rep.examined),
        }
        for d in &disagreements {
            println!("DISAGREE {d}");
        }
    }
    Ok(if !disagreements.is_empty() {
        1
    } else if rep.verdict == ApproxVerdict::NoneWithinFuel {
        inconclusive(g)
    } else {
        0
    })
}

fn cmd_suite(g: &Global, name: &str, artifacts: Option<PathBuf>, cases: Option<usize>, budget: usize) -> Res {
    let names: Vec<&str> = if name == "all" {
        SUITES.iter().map(|(n, _)| *n).collect()
    } else if SUITES.iter().any(|(n, _)| *n == name) {
        vec![name]
    } else {
        let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
        return Err(input(anyhow!("unknown suite `{name}` (one of: all, {})", known.join(", "))));
    };
    let (mut failed, mut open) = (false, false);
    for n in names {
        let spec = SuiteSpec {
            fuel: g.fuel,
            depth: g.depth,
            seed: g.seed,
            cases,
            budget,
            artifacts: artifacts.clone(),
            ..SuiteSpec::new(n)
        };
        let report = match suite::run(&spec) {
            Ok(r) => r,
            Err(e) => return Err(input(e)),
        };
        for r in &report.records {
            if g.json {
                println!("{}", serde_json::to_string(r).map_err(input)?);
            } else {
                println!("{}", r.line());
            }
        }
        eprint!("{}", report.summary());
        failed |= report.count(CaseVerdict::Fail) > 0;
        open |= report.count(CaseVerdict::Inconclusive) > 0;
    }
    Ok(if failed {
        1
    } else if open {
        inconclusive(g)
    } else {
        0
    })
}
