use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn defim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defim")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("defim-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn model_sp_reports() {
    let o = defim(&["model", "dinf", "--sp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID; SP: yes (rank *=1, V(*)=false)\n");
    let o = defim(&["model", "pinf", "--sp"]);
    assert_eq!(stdout(&o), "VALID; SP: no\n");
}

#[test]
fn model_witness_files() {
    let good = scratch("norm.sp");
    fs::write(&good, "p 1 false\nq 1 true\n").unwrap();
    let o = defim(&["model", "norm", "--sp", "--witness", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID; SP: yes (rank p=1, q=1, V(p)=false, V(q)=true)\n");
    let parity = scratch("z1.sp");
    fs::write(&parity, "0 1 true\n1 1 false\n").unwrap();
    let o = defim(&["model", "z1", "--sp", "--witness", parity.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn broken_model_exits_2() {
    let file = scratch("broken.dm");
    fs::write(&file, "model bad\natoms w a b\nmeet a b = a\next a = (w -> b)\next b = (w -> a)\n").unwrap();
    let o = defim(&["model", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("INVALID (3 violations)\n"));
    let syntax = scratch("syntax.dm");
    fs::write(&syntax, "model bad\natoms\n").unwrap();
    assert_eq!(defim(&["model", syntax.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(defim(&["model", "no-such-model"]).status.code(), Some(2));
}

#[test]
fn reduce_prints_the_park_trace() {
    let o = defim(&["--model", "pinf", "reduce", "--trace", r"tau[*](\x. x x)"]);
    assert_eq!(o.status.code(), Some(0));
    let want = "tau[*](\\x. x x)\n\
                --tau@root--> tau[*](ebar[*] ebar[*])\n\
                --taubar@0--> tau[*](bar[*](tau[*](ebar[*])))\n\
                --tautaubar@root--> tau[*](ebar[*])\n\
                --tautaubar@root--> eps\n\
                CONVERGED eps (4 steps)\n";
    assert_eq!(stdout(&o), want);
}

#[test]
fn reduce_strategies_and_fuel() {
    let o = defim(&["--model", "dinf", "--seed", "5", "reduce", "--strategy", "full", r"tau[*]((\x y. y x) ebar[*])"]);
    assert!(stdout(&o).contains("\nREFUTED ("));
    let omega = r"tau[*]((\x. x x) (\x. x x))";
    let o = defim(&["--model", "pinf", "--fuel", "50", "reduce", omega]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FUEL-OUT"));
    let o = defim(&["--model", "pinf", "--fuel", "50", "--strict", "reduce", omega]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(defim(&["reduce", r"\x. ("]).status.code(), Some(2));
}

#[test]
fn replay_reproduces_the_final_ast() {
    let script = scratch("scott.trace");
    fs::write(&script, "model dinf\nstart tau[*]((\\x y. x y) ebar[*])\nbeta@0\ntau@root\ntaubar@0\ntautaubar@root\n").unwrap();
    let o = defim(&["reduce", "--replay", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("REPLAYED 4 steps, final eps\n"));
    let direct = stdout(&defim(&["reduce", "--trace", r"tau[*]((\x y. x y) ebar[*])"]));
    let replayed = stdout(&o);
    assert_eq!(direct.lines().take(5).collect::<Vec<_>>(), replayed.lines().take(5).collect::<Vec<_>>());
    let bad = scratch("bad.trace");
    fs::write(&bad, "model dinf\nstart tau[*](\\x. x)\nbeta@root\n").unwrap();
    assert_eq!(defim(&["reduce", "--replay", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn member_modes() {
    let o = defim(&["--model", "norm", "member", "--target", "p", "--cross-check", r"\x. x"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("DERIVABLE\n"));
    assert!(out.contains("ORACLE: CONVERGED"));
    assert!(out.ends_with("AGREE\n"));
    let o = defim(&["--model", "norm", "member", "--target", "q", r"\x. x"]);
    assert_eq!(stdout(&o), "NOT-FOUND\n");
    let o = defim(&["--model", "norm", "member", "--target", "q", "--oracle", r"\x. x"]);
    assert_eq!(stdout(&o), "ORACLE: REFUTED (2 steps)\n");
    let o = defim(&["--model", "norm", "member", "--env", "u:q", "--target", "p", "u"]);
    assert!(stdout(&o).starts_with("DERIVABLE"));
    assert_eq!(defim(&["--model", "norm", "member", "--env", "u", "--target", "p", "u"]).status.code(), Some(2));
}

#[test]
fn approx_lists_the_chain() {
    let o = defim(&["--fuel", "4", "approx", r"\f. (\x. f (x x)) (\x. f (x x))"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "0\tOmega");
    assert!(lines.len() >= 3);
    assert_eq!(defim(&["approx", "ebar[*]"]).status.code(), Some(2));
}

#[test]
fn kerth_has_no_witness() {
    let v = r"(\x y. y (x x)) (\x y. y (x x))";
    let o = defim(&["--model", "kerth", "approx-member", "--target", "b", "--budget", "20", v]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "NONE-WITHIN-FUEL after 20 approximants\n");
    let o = defim(&["--model", "kerth", "--strict", "approx-member", "--target", "b", "--budget", "20", v]);
    assert_eq!(o.status.code(), Some(3));
    let o = defim(&["--model", "dinf", "approx-member", "--target", "* -> *", r"\x. x"]);
    assert_eq!(stdout(&o), "WITNESS #0 \\x. x\n");
}

#[test]
fn suites_run_reproducibly() {
    let o = defim(&["suite", "run", "paper-traces"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    assert!(stdout(&o).starts_with("suite=paper-traces\tcase=park\tverdict=PASS\tfuel=4\tartifact=-\n"));
    let a = defim(&["--seed", "9", "suite", "run", "definability", "--cases", "30"]);
    let b = defim(&["--seed", "9", "suite", "run", "definability", "--cases", "30"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 60);
    // the parity witnesses are rejected, so the table run fails
    assert_eq!(defim(&["suite", "run", "sp-table"]).status.code(), Some(1));
    assert_eq!(defim(&["suite", "run", "nope"]).status.code(), Some(2));
    assert_eq!(stdout(&defim(&["suite", "list"])).lines().count(), 9);
}

#[test]
fn json_output_parses() {
    let o = defim(&["--json", "--model", "pinf", "reduce", r"tau[*](\x. x x)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "CONVERGED");
    assert_eq!(v["result"], "eps");
    let o = defim(&["--json", "suite", "run", "paper-traces"]);
    for line in stdout(&o).lines() {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["verdict"], "PASS");
    }
    let o = defim(&["--json", "model", "pinf", "--sp"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sp"], false);
}
