use std::fmt;

use serde::Serialize;

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub p: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking an identity over a range of indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub branch: String,
    pub p_range: (i64, i64),
    pub passes: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(branch: impl Into<String>, lo: i64, hi: i64) -> Self {
        VerificationReport {
            branch: branch.into(),
            p_range: (lo, hi),
            passes: 0,
            failures: Vec::new(),
            threshold: None,
            notes: Vec::new(),
        }
    }

    /// Record `lhs == rhs` at index `p`.
    pub fn check<A: PartialEq + fmt::Display>(&mut self, p: i64, lhs: &A, rhs: &A) -> bool {
        self.record(p, lhs == rhs, lhs, rhs)
    }

    pub fn record(&mut self, p: i64, ok: bool, lhs: &dyn fmt::Display, rhs: &dyn fmt::Display) -> bool {
        if ok {
            self.passes += 1;
        } else {
            self.failures.push(Failure {
                p,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        ok
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn is_pass(&self) -> bool {
        self.failures.is_empty() && self.passes > 0
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    /// Fold another report's counts into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.passes += other.passes;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.p_range.0 = self.p_range.0.min(other.p_range.0);
        self.p_range.1 = self.p_range.1.max(other.p_range.1);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.is_pass() { "pass" } else { "FAIL" };
        write!(
            f,
            "{} {status}: p={}..={} passes={} failures={}",
            self.branch,
            self.p_range.0,
            self.p_range.1,
            self.passes,
            self.failures.len()
        )?;
        if let Some(t) = self.threshold {
            write!(f, " threshold={t}")?;
        }
        if let Some(x) = self.first_failure() {
            write!(f, " first counterexample p={}: {} != {}", x.p, x.lhs, x.rhs)?;
        }
        Ok(())
    }
}
