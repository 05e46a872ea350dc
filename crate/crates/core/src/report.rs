//! Itemized pass/fail reports with counterexample payloads.

use alloc::string::String;
use alloc::vec::Vec;

use crate::scalar::Scalar;

/// One failing instance of a check: where it failed and the values involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Zero-based basis indices (or degrees, orders) locating the failure.
    pub location: Vec<usize>,
    /// Named coordinate vectors, typically the two sides of an identity.
    pub values: Vec<(String, Vec<Scalar>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Free-form key/value facts (dimensions, ranks, verdicts).
    pub facts: Vec<(String, String)>,
    pub counterexamples: Vec<Counterexample>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, facts: Vec::new(), counterexamples: Vec::new() }
    }

    pub fn fact(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.facts.push((key.into(), value.into()));
        self
    }

    pub fn fail_with(&mut self, cx: Counterexample) {
        self.passed = false;
        self.counterexamples.push(cx);
    }

    pub fn set_passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
