//! Uniform pass/fail/unknown reporting for multi-part checks.

use std::fmt;

/// One named check with a three-valued outcome. `None` means the check could
/// not be decided within its budget (never that it was skipped silently).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

/// Ordered list of checks, rendered one line per check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn new() -> PropertyReport {
        PropertyReport::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, Some(true), String::new());
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Some(false), detail.into());
    }

    pub fn unknown(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, None, detail.into());
    }

    pub fn push(&mut self, name: impl Into<String>, passed: Option<bool>, detail: String) {
        self.checks.push(PropertyCheck { name: name.into(), passed, detail });
    }

    /// `Some(false)` if any check failed, `None` if none failed but some are
    /// undecided, `Some(true)` if every check passed.
    pub fn verdict(&self) -> Option<bool> {
        if self.checks.iter().any(|c| c.passed == Some(false)) {
            return Some(false);
        }
        if self.checks.iter().any(|c| c.passed.is_none()) {
            return None;
        }
        Some(true)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            let tag = match check.passed {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "????",
            };
            if check.detail.is_empty() {
                writeln!(f, "[{tag}] {}", check.name)?;
            } else {
                writeln!(f, "[{tag}] {} — {}", check.name, check.detail)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_three_values() {
        let mut r = PropertyReport::new();
        r.pass("a");
        assert_eq!(r.verdict(), Some(true));
        r.unknown("b", "budget");
        assert_eq!(r.verdict(), None);
        r.fail("c", "bad");
        assert_eq!(r.verdict(), Some(false));
    }

    #[test]
    fn renders_one_line_per_check() {
        let mut r = PropertyReport::new();
        r.pass("alpha");
        r.fail("beta", "witness {a}");
        let text = r.to_string();
        assert_eq!(text, "[PASS] alpha\n[FAIL] beta — witness {a}\n");
    }
}
