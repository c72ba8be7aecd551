//! Report values shared by the library and the command-line driver.

use num::{BigInt, BigUint};
use serde::{Serialize, Serializer};

/// Schema tag written into every JSON report.
pub const SCHEMA: &str = "constellation-lab/1";

pub(crate) fn big_as_string<S: Serializer, T: ToString>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// Both sides of an exact identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "big_as_string")]
    pub lhs: BigInt,
    #[serde(serialize_with = "big_as_string")]
    pub rhs: BigInt,
    pub equal: bool,
}

impl IdentityReport {
    pub fn new(lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let equal = lhs == rhs;
        IdentityReport { lhs, rhs, equal }
    }

    pub fn from_unsigned(lhs: BigUint, rhs: BigUint) -> Self {
        Self::new(BigInt::from(lhs), BigInt::from(rhs))
    }
}

/// Pass and fail tallies of one named check inside a suite.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 5;

impl CheckTally {
    pub fn new(name: impl Into<String>) -> Self {
        CheckTally { name: name.into(), ..Default::default() }
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    pub fn merge(&mut self, other: CheckTally) {
        self.passed += other.passed;
        self.failed += other.failed;
        for e in other.examples {
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(e);
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Outcome of an exhaustive suite at one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub k: usize,
    pub n: usize,
    pub checks: Vec<CheckTally>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, k: usize, n: usize) -> Self {
        SuiteReport { suite: suite.into(), k, n, checks: Vec::new() }
    }

    pub fn tally(&mut self, name: &str) -> &mut CheckTally {
        if let Some(i) = self.checks.iter().position(|c| c.name == name) {
            &mut self.checks[i]
        } else {
            self.checks.push(CheckTally::new(name));
            self.checks.last_mut().unwrap()
        }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(CheckTally::ok)
    }

    pub fn checked(&self) -> u64 {
        self.checks.iter().map(|c| c.passed + c.failed).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_report_serializes_big_integers_as_strings() {
        let r = IdentityReport::new(6, 6);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"lhs":"6","rhs":"6","equal":true}"#);
        assert!(!IdentityReport::new(1, 2).equal);
    }

    #[test]
    fn tallies_keep_few_examples() {
        let mut s = SuiteReport::new("x", 2, 1);
        for i in 0..10 {
            s.tally("a").record(i % 2 == 0, || format!("case {i}"));
        }
        assert_eq!(s.checks[0].passed, 5);
        assert_eq!(s.checks[0].examples.len(), MAX_EXAMPLES);
        assert!(!s.ok());
        assert_eq!(s.checked(), 10);
    }
}
