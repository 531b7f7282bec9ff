//! Structured verification reports.
//!
//! Reports are deterministic: checks are sorted by name and the machine
//! format contains no timing data, so two runs with the same parameters and
//! seed are byte-identical.

use std::fmt::Write as _;
use std::time::Duration;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Printout of the offending residual when the check fails.
    pub residual: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, residual: None }
    }

    pub fn fail(name: impl Into<String>, residual: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            residual: Some(residual.into()),
        }
    }

    pub fn from_residual(name: impl Into<String>, residual: Option<String>) -> Self {
        match residual {
            None => Check::pass(name),
            Some(r) => Check::fail(name, r),
        }
    }
}

/// Parameters a suite ran with; recorded in every report.
#[derive(Debug, Clone, Copy)]
pub struct SuiteParams {
    pub n: i64,
    pub maxlen: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { n: 0, maxlen: 3, samples: 50, seed: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub params: SuiteParams,
    pub checks: Vec<Check>,
    pub duration: Duration,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, params: SuiteParams, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        SuiteReport {
            suite: suite.into(),
            params,
            checks,
            duration: Duration::ZERO,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    /// Line-oriented machine format: `check <name> <pass|fail>
    /// [residual=<expr>]` plus a summary block. Deterministic bytes.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} n={} maxlen={} samples={} seed={}",
            self.suite, self.params.n, self.params.maxlen, self.params.samples, self.params.seed
        );
        for c in &self.checks {
            match (&c.pass, &c.residual) {
                (true, _) => {
                    let _ = writeln!(out, "check {} pass", c.name);
                }
                (false, Some(r)) => {
                    let _ = writeln!(out, "check {} fail residual={}", c.name, r);
                }
                (false, None) => {
                    let _ = writeln!(out, "check {} fail", c.name);
                }
            }
        }
        let _ = writeln!(
            out,
            "summary {{ suite: {}, checks: {}, failures: {} }}",
            self.suite,
            self.checks.len(),
            self.failures()
        );
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "== suite {} (n={}, maxlen={}, samples={}, seed={}) [{:?}]",
            self.suite,
            self.params.n,
            self.params.maxlen,
            self.params.samples,
            self.params.seed,
            self.duration
        );
        for c in &self.checks {
            if c.pass {
                let _ = writeln!(out, "  [ok]   {}", c.name);
            } else {
                let _ = writeln!(
                    out,
                    "  [FAIL] {}{}",
                    c.name,
                    c.residual
                        .as_deref()
                        .map(|r| format!("  residual = {r}"))
                        .unwrap_or_default()
                );
            }
        }
        let _ = writeln!(out, "  {}/{} checks passed", self.checks.len() - self.failures(), self.checks.len());
        out
    }
}
