//! Pass/fail records produced by the verification routines.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: Status::Pass, details: details.into() }
    }

    pub fn fail(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: Status::Fail, details: details.into() }
    }

    pub fn skip(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: Status::Skip, details: details.into() }
    }

    /// Pass when `failures` is empty, otherwise fail listing at most a few of them.
    pub fn from_failures(name: impl Into<String>, checked: usize, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self::pass(name, format!("{checked} cases checked"))
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            let more = if failures.len() > 5 { format!(" (and {} more)", failures.len() - 5) } else { String::new() };
            Self::fail(name, format!("{} of {checked} cases failed: {}{more}", failures.len(), shown.join("; ")))
        }
    }
}

/// An ordered list of check results.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    /// Prefixes every result name with `prefix/`.
    pub fn prefixed(mut self, prefix: &str) -> Report {
        for r in self.results.iter_mut() {
            r.name = format!("{prefix}/{}", r.name);
        }
        self
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }
}

impl From<CheckResult> for Report {
    fn from(r: CheckResult) -> Self {
        Report { results: vec![r] }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "[{}] {}: {}", r.status, r.name, r.details)?;
        }
        Ok(())
    }
}
