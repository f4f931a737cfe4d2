//! Check reports.
//!
//! A [`Report`] is the output of every `validate_*` / `check_*` operation: an
//! ordered list of violated laws, each with a human-readable witness. The
//! report is empty iff every checked law held.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            law: law.into(),
            witness: witness.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if some violation is filed under `law`.
    pub fn has_law(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// The violations filed under `law`.
    pub fn filtered(&self, law: &str) -> Report {
        Report { violations: self.violations.iter().filter(|v| v.law == law).cloned().collect() }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.law, v.witness)?;
        }
        Ok(())
    }
}
