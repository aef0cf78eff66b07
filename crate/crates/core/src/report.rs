use serde::{Deserialize, Serialize};

/// Cap on the number of violations kept in a report; further violations are
/// only counted.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

/// One failing axiom instance: the law that failed and the witness tuple,
/// as element indices in the order the law quantifies them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<usize>,
}

/// Outcome of a validator: `valid` iff no axiom instance failed.
/// At most [`MAX_LISTED_VIOLATIONS`] witnesses are listed; `total` counts all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub total: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport {
            valid: true,
            total: 0,
            violations: Vec::new(),
        }
    }

    pub fn record(&mut self, law: &str, witness: &[usize]) {
        self.valid = false;
        self.total += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(Violation {
                law: law.to_string(),
                witness: witness.to_vec(),
            });
        }
    }

    /// Merge another report into this one, preserving the listing cap.
    pub fn absorb(&mut self, other: ValidationReport) {
        // Count violations that were already truncated away in `other`.
        let unlisted = other.total.saturating_sub(other.violations.len());
        for v in other.violations {
            self.total += 1;
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(v);
            }
        }
        self.total += unlisted;
        if other.total > 0 {
            self.valid = false;
        }
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}
