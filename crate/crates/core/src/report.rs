//! Pass/fail reports for verification suites, as text or JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::families::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Number of cases examined, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

/// Bounds a suite ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReportBounds {
    pub base: usize,
    pub legs: usize,
    pub universe: usize,
    /// Legs of the families of quasispaces searched exhaustively.
    pub family_legs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub instance: String,
    pub bounds: ReportBounds,
    pub checks: Vec<CheckResult>,
    /// Observations that do not affect the outcome.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(suite: &str, instance: &str, bounds: ReportBounds) -> Self {
        Self {
            suite: suite.to_string(),
            instance: instance.to_string(),
            bounds,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, v: &Verdict) -> &mut Self {
        self.push(name, v.holds(), v.witness().map(str::to_string), None)
    }

    pub fn counted(&mut self, name: impl Into<String>, v: &Verdict, cases: usize) -> &mut Self {
        self.push(name, v.holds(), v.witness().map(str::to_string), Some(cases))
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>, cases: Option<usize>) -> &mut Self {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            witness,
            cases,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Appends another report's checks and notes, prefixing names with its suite.
    pub fn absorb(&mut self, other: Report) {
        let prefix = other.suite;
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}: {}", c.name);
            c
        }));
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_text(&self) -> String {
        let b = &self.bounds;
        let mut out = format!(
            "suite {} on {} (base <= {}, legs <= {}, universe <= {}, family legs <= {})\n",
            self.suite, self.instance, b.base, b.legs, b.universe, b.family_legs
        );
        for c in &self.checks {
            let _ = write!(out, "  {} {}", if c.passed { "pass" } else { "FAIL" }, c.name);
            if let Some(n) = c.cases {
                let _ = write!(out, " [{n} cases]");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "       {w}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.len() - self.failures(),
            self.checks.len()
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
