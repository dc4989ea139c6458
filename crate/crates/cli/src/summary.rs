use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One tolerance check: passes when `lo <= observed <= hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: Option<f64>,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl Check {
    /// A non-finite `observed` never passes.
    pub fn within(name: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            observed: observed.is_finite().then_some(observed),
            lo,
            hi,
            pass: observed >= lo && observed <= hi,
        }
    }

    pub fn around(name: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        Check::within(name, observed, target - tol, target + tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Summary {
    pub fn new(name: impl Into<String>, checks: Vec<Check>, details: Value) -> Self {
        Summary {
            name: name.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            details,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check for the terminal.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let obs = c.observed.map_or("n/a".to_owned(), |v| format!("{v:.4}"));
                format!(
                    "{} {}: {obs} in [{:.4}, {:.4}]",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.lo,
                    c.hi
                )
            })
            .collect()
    }
}
