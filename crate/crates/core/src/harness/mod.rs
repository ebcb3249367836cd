//! Diagram ingestion, the built-in registry, and the seeded verification
//! suites with their line-oriented report.

pub mod format;
mod oracle;
pub mod random;
mod suites;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{BratteliDiagram, Builtin, DEFAULT_MAX_ENTRIES};
pub use format::{parse_diagram, serialize_diagram, ParseError};
pub use random::random_cylinder;

/// Environment variable capping table sizes.
pub const MAX_ENTRIES_VAR: &str = "AF_TAIL_MAX_ENTRIES";

/// Suite names, in report order.
pub const SUITES: [&str; 6] = ["validation", "combinatorics", "expectation", "matrix_units", "tower", "groupoid"];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] crate::error::Error),
}

/// Where a diagram comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Builtin(Builtin),
    File(PathBuf),
}

impl Source {
    /// A built-in name, otherwise a file path.
    pub fn parse(s: &str) -> Source {
        match Builtin::from_name(s) {
            Some(b) => Source::Builtin(b),
            None => Source::File(PathBuf::from(s)),
        }
    }

    pub fn builtin(&self) -> Option<Builtin> {
        match self {
            Source::Builtin(b) => Some(*b),
            Source::File(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::Builtin(b) => b.name().to_string(),
            Source::File(p) => p.display().to_string(),
        }
    }

    /// Loads the diagram, truncated to `depth` when given. Built-ins default
    /// to their standard depth, files to their own.
    pub fn load(&self, depth: Option<usize>) -> Result<BratteliDiagram, HarnessError> {
        let d = match self {
            Source::Builtin(b) => b.diagram(depth.unwrap_or_else(|| b.default_depth()))?,
            Source::File(path) => {
                let label = path.display().to_string();
                let text =
                    std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: label.clone(), source })?;
                let d = parse_diagram(&text).map_err(|source| HarnessError::Parse { path: label, source })?;
                match depth {
                    Some(depth) if depth != d.depth() => d.truncate(depth)?,
                    _ => d,
                }
            }
        };
        Ok(d.with_max_entries(max_entries_from_env()?))
    }
}

/// Reads the table-size cap from the environment.
pub fn max_entries_from_env() -> Result<u64, HarnessError> {
    match std::env::var(MAX_ENTRIES_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::Config(format!("{MAX_ENTRIES_VAR}=`{v}` is not a natural number"))),
        Err(_) => Ok(DEFAULT_MAX_ENTRIES),
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub source: Source,
    pub depth: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    /// Suites to run; empty means all.
    pub suites: Vec<String>,
}

impl VerifyConfig {
    pub fn new(source: Source) -> Self {
        VerifyConfig { source, depth: None, seed: 7, samples: 20, suites: Vec::new() }
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        if self.depth == Some(0) {
            return Err(HarnessError::Config("depth must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(HarnessError::Config("samples must be at least 1".into()));
        }
        if let Some(bad) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(HarnessError::Config(format!("unknown suite `{bad}` (known: {})", SUITES.join(", "))));
        }
        Ok(())
    }

    fn selected(&self, name: &str) -> bool {
        self.suites.is_empty() || self.suites.iter().any(|s| s == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail {
        counterexample: String,
    },
    /// A table exceeded the size cap.
    Resource {
        message: String,
    },
    /// An operation failed unexpectedly.
    Error {
        message: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub outcome: Outcome,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Outcome::Pass | Outcome::Skipped { .. })
    }

    pub fn line(&self) -> String {
        let head = format!("SUITE {}", self.name);
        match &self.outcome {
            Outcome::Pass => format!("{head} PASS checks={}", self.checks),
            Outcome::Fail { counterexample } => {
                format!("{head} FAIL checks={} counterexample={counterexample}", self.checks)
            }
            Outcome::Resource { message } => format!("{head} FAIL checks={} resource={message}", self.checks),
            Outcome::Error { message } => format!("{head} FAIL checks={} error={message}", self.checks),
            Outcome::Skipped { reason } => format!("{head} SKIP checks={} reason={reason}", self.checks),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub header: String,
    pub results: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header);
        for r in &self.results {
            let _ = writeln!(out, "{}", r.line());
        }
        let _ = writeln!(out, "RESULT {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// Loads the configured diagram and runs the selected suites.
pub fn run_suites(config: &VerifyConfig) -> Result<Report, HarnessError> {
    config.check()?;
    let diagram = Arc::new(config.source.load(config.depth)?);
    Ok(run_suites_on(diagram, config))
}

/// Runs the selected suites on an already loaded diagram. Suites run
/// concurrently; each draws from its own random stream, so the report does
/// not depend on scheduling.
pub fn run_suites_on(diagram: Arc<BratteliDiagram>, config: &VerifyConfig) -> Report {
    let header = format!(
        "CONFIG source={} depth={} seed={} samples={} rng={}",
        config.source.label(),
        diagram.depth(),
        config.seed,
        config.samples,
        random::RNG_NAME
    );
    let validation = suites::run("validation", 0, &diagram, config);
    let valid = validation.passed();
    let mut results = Vec::new();
    if config.selected("validation") || !valid {
        results.push(validation);
    }
    let rest: Vec<(u64, &str)> = SUITES
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, name)| config.selected(name))
        .map(|(i, name)| (i as u64, *name))
        .collect();
    if valid {
        let ran: Vec<SuiteResult> =
            rest.par_iter().map(|&(stream, name)| suites::run(name, stream, &diagram, config)).collect();
        results.extend(ran);
    } else {
        results.extend(rest.iter().map(|&(_, name)| SuiteResult {
            name: name.to_string(),
            checks: 0,
            outcome: Outcome::Skipped { reason: "invalid diagram".into() },
        }));
    }
    Report { header, results }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(b: Builtin) -> VerifyConfig {
        VerifyConfig { samples: 3, ..VerifyConfig::new(Source::Builtin(b)) }
    }

    #[test]
    fn car_depth_four_passes() {
        let report = run_suites(&VerifyConfig { depth: Some(4), ..config(Builtin::Car) }).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.results.len(), SUITES.len());
        assert!(report.render().ends_with("RESULT PASS\n"));
    }

    #[test]
    fn invalid_diagram_skips_the_rest() {
        let d = BratteliDiagram::new(vec![1, 2, 1], vec![vec![vec![1, 1]], vec![vec![1], vec![0]]]).unwrap();
        let report = run_suites_on(Arc::new(d), &config(Builtin::Car));
        assert!(!report.passed());
        let lines: Vec<String> = report.results.iter().map(SuiteResult::line).collect();
        assert!(lines[0].starts_with("SUITE validation FAIL checks=1 counterexample=condition (e)"), "{}", lines[0]);
        assert!(lines[1..].iter().all(|l| l.contains(" SKIP ")));
    }

    #[test]
    fn filter_runs_only_named_suite() {
        let cfg = VerifyConfig { suites: vec!["expectation".into()], ..config(Builtin::Pascal) };
        let report = run_suites(&cfg).unwrap();
        let names: Vec<&str> = report.results.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["expectation"]);
        assert!(report.passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig { depth: Some(4), ..config(Builtin::Fibonacci) };
        assert_eq!(run_suites(&cfg).unwrap().render(), run_suites(&cfg).unwrap().render());
    }

    #[test]
    fn size_cap_is_a_resource_failure() {
        let d = Builtin::Car.diagram(5).unwrap().with_max_entries(20);
        let report = run_suites_on(Arc::new(d), &config(Builtin::Car));
        assert!(!report.passed());
        assert!(report.results.iter().any(|r| matches!(r.outcome, Outcome::Resource { .. })), "{}", report.render());
    }

    #[test]
    fn bad_config_rejected() {
        let mut cfg = config(Builtin::Car);
        cfg.samples = 0;
        assert!(matches!(run_suites(&cfg), Err(HarnessError::Config(_))));
        let cfg = VerifyConfig { suites: vec!["nope".into()], ..config(Builtin::Car) };
        assert!(matches!(run_suites(&cfg), Err(HarnessError::Config(_))));
    }
}
