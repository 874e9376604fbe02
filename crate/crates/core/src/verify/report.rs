use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Run parameters recorded with every report. Grid fields are absent for
/// checks that never touch the grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub mass: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

/// One named residual. Items without a tolerance or lower bound are
/// measured and reported but do not affect `pass`.
///
/// A lower bound turns the item into a negative control: it passes only if
/// the residual is at least that large.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub name: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_least: Option<f64>,
}

impl Item {
    pub fn asserted(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance: Some(tolerance), at_least: None }
    }

    pub fn measured(name: impl Into<String>, residual: f64) -> Self {
        Self { name: name.into(), residual, tolerance: None, at_least: None }
    }

    pub fn asserted_at_least(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Self { name: name.into(), residual, tolerance: None, at_least: Some(bound) }
    }

    pub fn is_asserted(&self) -> bool {
        self.tolerance.is_some() || self.at_least.is_some()
    }

    /// NaN residuals always fail an assertion.
    pub fn passes(&self) -> bool {
        self.tolerance.is_none_or(|tol| self.residual <= tol) && self.at_least.is_none_or(|b| self.residual >= b)
    }
}

/// Expansion of one commutator over the generator basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstantRow {
    pub left: String,
    pub right: String,
    /// `(basis element, re, im)` for every coefficient above 1e-12 in modulus.
    pub coefficients: Vec<(String, f64, f64)>,
    pub residual: f64,
}

pub type StructureConstantTable = Vec<StructureConstantRow>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Params,
    pub items: Vec<Item>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<StructureConstantTable>,
    pub max_residual: f64,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl CheckReport {
    /// Derives `max_residual` (over asserted items, or over all items when
    /// nothing is asserted) and `pass`.
    pub fn new(check: impl Into<String>, params: Params, items: Vec<Item>, wall_time_s: f64) -> Self {
        let asserted: Vec<&Item> = items.iter().filter(|i| i.tolerance.is_some()).collect();
        let pool: Vec<&Item> = if asserted.is_empty() { items.iter().collect() } else { asserted };
        let max_residual = pool.iter().map(|i| i.residual).fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let pass = items.iter().all(Item::passes);
        Self { check: check.into(), params, items, structure_constants: None, max_residual, pass, wall_time_s }
    }

    pub fn with_structure_constants(mut self, table: StructureConstantTable) -> Self {
        self.structure_constants = Some(table);
        self
    }

    /// Names of asserted items that exceeded their tolerance.
    pub fn failures(&self) -> Vec<&str> {
        self.items.iter().filter(|i| !i.passes()).map(|i| i.name.as_str()).collect()
    }

    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only plain data")
    }
}

/// Write the report as pretty JSON.
pub fn emit_report(report: &CheckReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Write several reports as one JSON array.
pub fn emit_reports(reports: &[CheckReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(reports).expect("reports contain only plain data");
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
