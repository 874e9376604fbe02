//! Default tolerances, one per kind of identity.

/// Clifford and other constant-matrix identities.
pub const MATRIX: f64 = 1e-14;
/// Pointwise identities between momentum multipliers.
pub const POINTWISE: f64 = 1e-11;
/// Coefficient-function equality of operators built with analytic derivatives.
pub const COEFFICIENT: f64 = 1e-9;
/// Coefficient-function equality when numeric derivatives are involved.
pub const COEFFICIENT_NUMERIC: f64 = 1e-5;
/// Structure-constant extraction.
pub const STRUCTURE: f64 = 1e-8;
/// Grid residuals of the solution-mapping check.
pub const GRID: f64 = 1e-6;
/// Symbolic commutators against commutators composed on the grid.
pub const CROSSVAL: f64 = 1e-7;
/// Expectation-value flows.
pub const FLOW: f64 = 1e-4;
/// Negative controls must exceed this.
pub const NEGATIVE_CONTROL: f64 = 1e-2;
