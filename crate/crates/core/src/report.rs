//! Pass/fail reports shared by the axiom checkers.

use std::fmt;

use serde::Serialize;

/// Outcome of one checked property over a set of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl CheckItem {
    pub fn new(name: impl Into<String>) -> Self {
        CheckItem { name: name.into(), instances: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Counts one instance, recording `witness` if the instance failed.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(witness());
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(CheckItem::passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            if item.passed() {
                writeln!(f, "PASS {} ({} instances)", item.name, item.instances)?;
            } else {
                writeln!(
                    f,
                    "FAIL {} ({} of {} instances)",
                    item.name,
                    item.violations.len(),
                    item.instances
                )?;
                for v in &item.violations {
                    writeln!(f, "  {v}")?;
                }
            }
        }
        Ok(())
    }
}
