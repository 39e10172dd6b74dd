//! Identity-check reports.
//!
//! Every verification in this crate returns a `CheckReport`: how many samples
//! were tested and the list of violations, each pinned to the offending
//! sample point. Arithmetic is exact, so a violation is a hard failure.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    /// The sample point (triple, pair, basis element, …) that failed.
    pub at: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn record(&mut self, at: impl fmt::Display, detail: impl Into<String>) {
        self.violations.push(Violation {
            at: at.to_string(),
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: ok ({} checked)", self.check, self.checked)
        } else {
            writeln!(
                f,
                "{}: {} violation(s) out of {} checked",
                self.check,
                self.violations.len(),
                self.checked
            )?;
            for v in self.violations.iter().take(8) {
                writeln!(f, "  at {}: {}", v.at, v.detail)?;
            }
            if self.violations.len() > 8 {
                writeln!(f, "  … and {} more", self.violations.len() - 8)?;
            }
            Ok(())
        }
    }
}
