//! Text and key=value renderings of a [`Report`]. Both are deterministic.

use std::fmt::Write as _;

use avgcoh_core::{Report, Scalar};

/// Counterexamples printed per check before eliding the rest.
pub const SHOWN: usize = 12;

fn scalars(xs: &[Scalar]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(" ")
}

fn location(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(" ")
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", report.title, status(report.passed()));
    for c in &report.checks {
        let _ = writeln!(out, "  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        for (k, v) in &c.facts {
            let _ = writeln!(out, "        {k}: {v}");
        }
        for cx in c.counterexamples.iter().take(SHOWN) {
            let values: Vec<String> = cx.values.iter().map(|(name, xs)| format!("{name} = [{}]", scalars(xs))).collect();
            let _ = writeln!(out, "        at ({}): {}", location(&cx.location), values.join("; "));
        }
        if c.counterexamples.len() > SHOWN {
            let _ = writeln!(out, "        ... {} more", c.counterexamples.len() - SHOWN);
        }
    }
    out
}

/// One `key=value` per line. Every counterexample is listed.
pub fn machine(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "report.title={}", report.title);
    let _ = writeln!(out, "report.status={}", status(report.passed()));
    let _ = writeln!(out, "report.checks={}", report.checks.len());
    for (i, c) in report.checks.iter().enumerate() {
        let _ = writeln!(out, "check.{i}.name={}", c.name);
        let _ = writeln!(out, "check.{i}.status={}", status(c.passed));
        for (k, v) in &c.facts {
            let _ = writeln!(out, "check.{i}.fact.{k}={v}");
        }
        let _ = writeln!(out, "check.{i}.counterexamples={}", c.counterexamples.len());
        for (j, cx) in c.counterexamples.iter().enumerate() {
            let _ = writeln!(out, "check.{i}.counterexample.{j}.location={}", location(&cx.location));
            for (name, xs) in &cx.values {
                let _ = writeln!(out, "check.{i}.counterexample.{j}.value.{name}={}", scalars(xs));
            }
        }
    }
    out
}
