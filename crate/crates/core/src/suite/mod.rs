//! The property-suite runner: worked examples, equivalence checks and
//! spot checks, reported as line-delimited records.
//!
//! Each record is one line of tab-separated `key=value` fields:
//!
//! ```text
//! suite=<name>\tcase=<id>\tverdict=<PASS|FAIL|INCONCLUSIVE>\tfuel=<steps>\tartifact=<path|->
//! ```
//!
//! `fuel` is the number of reduction steps (or search units) the case
//! consumed. `artifact` names a replayable trace file written for a failing
//! case when an artifact directory is set, and is `-` otherwise. Records
//! come in case order and contain nothing run-dependent, so a fixed seed
//! gives byte-identical output.

mod cases;

use std::fmt;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{ModelError, ParseError, ReduceError, SemanticsError};
use crate::reduction::{Path, RuleId};
use crate::syntax::Expr;

/// Suite names with a one-line description, in run order.
pub const SUITES: &[(&str, &str)] = &[
    ("paper-traces", "S1 the four example reduction blocks"),
    ("sp-table", "S2 stratified positivity of the shipped models"),
    ("extensionality", "S3 I and 1 have the same types"),
    ("definability", "S4 derivation search against the test oracle"),
    ("approx-sens", "S5 three-way agreement on small normal forms"),
    ("kerth", "S6 a non-approximable membership"),
    ("beta-first", "S7 beta steps can be moved first"),
    ("confluence", "S8 strategy and reduction invariance"),
    ("subtyping", "S9 leq against bounded unfolding"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSpec {
    pub name: String,
    /// Reduction step budget.
    pub fuel: usize,
    /// Derivation depth budget.
    pub depth: usize,
    /// Type-universe depth of the argument pool.
    pub pool_depth: usize,
    pub seed: u64,
    /// Overrides the suite's own case count where it has one.
    pub cases: Option<usize>,
    /// Approximant budget for the Kerth suite.
    pub budget: usize,
    /// Where traces of failing cases are written.
    pub artifacts: Option<PathBuf>,
}

impl SuiteSpec {
    pub fn new(name: &str) -> Self {
        SuiteSpec {
            name: name.to_string(),
            fuel: 10_000,
            depth: 12,
            pool_depth: 2,
            seed: 0,
            cases: None,
            budget: 1000,
            artifacts: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CaseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseVerdict::Pass => "PASS",
            CaseVerdict::Fail => "FAIL",
            CaseVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// A parsed trace script: model name, start text and steps.
pub type Script = (String, String, Vec<(RuleId, Path)>);

/// A reduction trace that `reduce --replay` accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceArtifact {
    pub model: String,
    pub start: Expr,
    pub steps: Vec<(RuleId, Path)>,
}

impl TraceArtifact {
    /// `model <name>`, `start <expr>`, then one `rule@path` per line.
    pub fn to_script(&self) -> String {
        let mut out = format!("model {}\nstart {}\n", self.model, self.start);
        for (r, p) in &self.steps {
            out.push_str(&format!("{r}@{p}\n"));
        }
        out
    }

    /// Reads the model name, the start text and the steps.
    pub fn parse_script(src: &str) -> Result<Script, String> {
        let mut model = None;
        let mut start = None;
        let mut steps = Vec::new();
        for (no, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(m) = line.strip_prefix("model ") {
                model = Some(m.trim().to_string());
            } else if let Some(s) = line.strip_prefix("start ") {
                start = Some(s.trim().to_string());
            } else {
                let (r, p) = line.split_once('@').ok_or_else(|| format!("line {}: expected rule@path", no + 1))?;
                let rule = RuleId::from_name(r.trim()).ok_or_else(|| format!("line {}: unknown rule `{r}`", no + 1))?;
                let path = p.trim().parse::<Path>().map_err(|e| format!("line {}: {e}", no + 1))?;
                steps.push((rule, path));
            }
        }
        let model = model.ok_or("missing `model` line")?;
        let start = start.ok_or("missing `start` line")?;
        Ok((model, start, steps))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub suite: String,
    pub case: String,
    pub verdict: CaseVerdict,
    pub fuel: usize,
    pub artifact: Option<String>,
    /// Free text for the human summary.
    pub detail: String,
    #[serde(skip)]
    pub trace: Option<TraceArtifact>,
}

impl Record {
    pub fn line(&self) -> String {
        format!(
            "suite={}\tcase={}\tverdict={}\tfuel={}\tartifact={}",
            self.suite,
            self.case,
            self.verdict,
            self.fuel,
            self.artifact.as_deref().unwrap_or("-")
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub records: Vec<Record>,
    /// Named measurements, e.g. decided fractions and disagreement counts.
    pub stats: Vec<(String, f64)>,
}

impl SuiteReport {
    pub fn count(&self, v: CaseVerdict) -> usize {
        self.records.iter().filter(|r| r.verdict == v).count()
    }

    pub fn stat(&self, key: &str) -> Option<f64> {
        self.stats.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// 0 pass, 1 any failure, 3 inconclusive cases under `strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.count(CaseVerdict::Fail) > 0 {
            1
        } else if strict && self.count(CaseVerdict::Inconclusive) > 0 {
            3
        } else {
            0
        }
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{}: {}/{} PASS, {} FAIL, {} INCONCLUSIVE\n",
            self.suite,
            self.count(CaseVerdict::Pass),
            self.records.len(),
            self.count(CaseVerdict::Fail),
            self.count(CaseVerdict::Inconclusive)
        );
        for (k, v) in &self.stats {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for r in self.records.iter().filter(|r| r.verdict == CaseVerdict::Fail) {
            out.push_str(&format!("  FAIL {}: {}\n", r.case, r.detail));
        }
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("writing artifact: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs one suite.
pub fn run(spec: &SuiteSpec) -> Result<SuiteReport, SuiteError> {
    let mut report = match spec.name.as_str() {
        "paper-traces" => cases::paper_traces(spec)?,
        "sp-table" => cases::sp_table(spec)?,
        "extensionality" => cases::extensionality(spec)?,
        "definability" => cases::definability(spec)?,
        "approx-sens" => cases::approx_sens(spec)?,
        "kerth" => cases::kerth(spec)?,
        "beta-first" => cases::beta_first(spec)?,
        "confluence" => cases::confluence(spec)?,
        "subtyping" => cases::subtyping(spec)?,
        other => return Err(SuiteError::Unknown(other.to_string())),
    };
    report.suite = spec.name.clone();
    if let Some(dir) = &spec.artifacts {
        for r in &mut report.records {
            if let (CaseVerdict::Fail, Some(t)) = (r.verdict, &r.trace) {
                fs::create_dir_all(dir)?;
                let file = dir.join(format!("{}-{}.trace", r.suite, r.case.replace(['/', ' '], "_")));
                fs::write(&file, t.to_script())?;
                r.artifact = Some(file.display().to_string());
            }
        }
    }
    Ok(report)
}

pub use cases::{corpus, reference_witness, Blocks, Line, KERTH_V, EXAMPLE_BLOCKS, SP_TABLE, SUBTYPING_MODELS, UNFOLD_DEPTH};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;
    use crate::reduction::{eval, EvalOptions};
    use crate::syntax::parse_expr;

    #[test]
    fn trace_scripts_round_trip() {
        let m = builtin::load("dinf").unwrap();
        let start = parse_expr(&m, r"tau[*]((\x y. x y) ebar[*])").unwrap();
        let out = eval(&start, &m, EvalOptions::new(100).traced()).unwrap();
        let steps: Vec<(RuleId, Path)> = out.trace().iter().map(|s| (s.rule, s.path.clone())).collect();
        let t = TraceArtifact { model: "dinf".into(), start: start.clone(), steps: steps.clone() };
        let (model, src, back) = TraceArtifact::parse_script(&t.to_script()).unwrap();
        assert_eq!(model, "dinf");
        assert_eq!(parse_expr(&m, &src).unwrap(), start);
        assert_eq!(back, steps);
        assert!(TraceArtifact::parse_script("start eps\n").is_err());
        assert!(TraceArtifact::parse_script("model dinf\nstart eps\nnope@root\n").is_err());
    }

    #[test]
    fn records_are_reproducible() {
        let spec = SuiteSpec { cases: Some(20), ..SuiteSpec::new("definability") };
        let a: Vec<String> = run(&spec).unwrap().records.iter().map(Record::line).collect();
        let b: Vec<String> = run(&spec).unwrap().records.iter().map(Record::line).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        assert!(a[0].starts_with("suite=definability\tcase=dinf/000\tverdict="));
    }

    #[test]
    fn example_traces_pass_and_unknown_suites_fail() {
        let r = run(&SuiteSpec::new("paper-traces")).unwrap();
        assert_eq!(r.count(CaseVerdict::Pass), 4);
        assert_eq!(r.exit_code(true), 0);
        assert!(matches!(run(&SuiteSpec::new("nope")), Err(SuiteError::Unknown(_))));
    }

    #[test]
    fn untraced_failures_have_no_artifact() {
        let dir = std::env::temp_dir().join(format!("defim-artifacts-{}", std::process::id()));
        let spec = SuiteSpec { artifacts: Some(dir.clone()), ..SuiteSpec::new("sp-table") };
        let r = run(&spec).unwrap();
        // witness failures carry no trace
        assert!(r.records.iter().all(|x| x.artifact.is_none()));
        assert_eq!(r.exit_code(false), 1);
        let _ = fs::remove_dir_all(dir);
    }
}
