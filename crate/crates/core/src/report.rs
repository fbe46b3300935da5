//! Structured results shared by every battery: named checks and scan tables.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Whether a check gates the overall pass/fail status of its report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckRole {
    /// Must hold for the report to pass.
    Assert,
    /// Recorded measurement; its flag is informative only.
    Observe,
}

/// One named measurement. `passed == (residual <= threshold)` always.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub role: CheckRole,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        threshold: f64,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            threshold,
            passed: residual <= threshold,
            role: CheckRole::Assert,
            seed: None,
            note: String::new(),
        }
    }

    /// A boolean condition encoded as residual 0 (holds) or 1 (fails) against threshold 0.
    pub fn flag(name: impl Into<String>, anchor: impl Into<String>, holds: bool) -> Self {
        Self::new(name, anchor, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn observe(mut self) -> Self {
        self.role = CheckRole::Observe;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn recomputed_pass(&self) -> bool {
        self.residual <= self.threshold
    }
}

/// A numeric table, exported as CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ScanTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        ScanTable {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

/// Decimal rendering with 17 significant digits (`inf`/`-inf`/`nan` for non-finite values).
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Result of a battery: checks, a verdict string and supporting tables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub title: String,
    pub verdict: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<ScanTable>,
}

impl PropertyReport {
    pub fn new(title: impl Into<String>) -> Self {
        PropertyReport {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// All assert-role checks pass.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.role == CheckRole::Assert)
            .all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&ScanTable> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.role == CheckRole::Assert && !c.passed)
            .collect()
    }

    pub fn extend(&mut self, other: PropertyReport) {
        self.checks.extend(other.checks);
        self.tables.extend(other.tables);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_significant_digits() {
        let mut t = ScanTable::new("bounds", &["dim", "A"]);
        t.push(vec![4.0, 1.0 / 3.0]);
        let csv = t.to_csv();
        assert_eq!(csv, "dim,A\n4.0000000000000000e0,3.3333333333333331e-1\n");
        let back: f64 = "3.3333333333333331e-1".parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn observe_checks_do_not_gate() {
        let mut r = PropertyReport::new("x");
        r.push(Check::new("a", "", 0.5, 0.1).observe());
        r.push(Check::new("b", "", 0.0, 0.1));
        assert!(r.passed());
        assert!(!r.checks[0].passed);
        assert!(r.checks.iter().all(|c| c.passed == c.recomputed_pass()));
    }
}
