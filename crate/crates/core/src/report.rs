use std::fmt;

use serde::Serialize;

/// Outcome of one named check, aggregated over all items it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    /// First few failing items, rendered for humans.
    pub failures: Vec<String>,
}

/// A list of checks; verification operations never fail, they report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

const MAX_LISTED_FAILURES: usize = 5;

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `predicate` over `items`; each `Err` is a failure description.
    pub fn check<I, T, F>(&mut self, name: &str, items: I, mut predicate: F)
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> Result<(), String>,
    {
        let mut checked = 0;
        let mut failed = 0;
        let mut failures = Vec::new();
        for item in items {
            checked += 1;
            if let Err(msg) = predicate(item) {
                failed += 1;
                if failures.len() < MAX_LISTED_FAILURES {
                    failures.push(msg);
                }
            }
        }
        if failed > failures.len() {
            failures.push(format!("... {} more", failed - failures.len()));
        }
        self.checks.push(Check {
            name: name.to_owned(),
            passed: failed == 0,
            checked,
            failures,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {} ({} checked)", c.name, c.checked)?;
            for msg in &c.failures {
                writeln!(f, "       {msg}")?;
            }
        }
        Ok(())
    }
}
