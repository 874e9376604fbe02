use std::time::Instant;

use num_complex::Complex64;

use super::report::{CheckReport, Item};
use super::{asserted_pairs, tolerances, InvarianceConfig};
use crate::calculus::{CanonicalOperator, OperatorSet, GENERATOR_NAMES};
use crate::error::Result;
use crate::grid::{Grid, GridOperator, GridSpec, Moments};

/// Product with every reordering correction dropped, as if positions and
/// momenta commuted. Only the negative control uses it.
fn commuting_product(a: &CanonicalOperator, b: &CanonicalOperator) -> Result<CanonicalOperator> {
    let mut out = CanonicalOperator::zero(a.dim());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out = out.try_add(&CanonicalOperator::from_term(ma.times(mb), ca.product(cb)))?;
        }
    }
    Ok(out)
}

/// For every asserted generator pair of `set`, compares the symbolic
/// commutator applied on the grid with `G₁(G₂ψ) − G₂(G₁ψ)` composed on the
/// grid, relative to the largest of the three vectors involved.
///
/// The field is the first seeded test packet of `cfg`; operators are taken
/// at time `t`. The negative control repeats the comparison for the boost
/// pairs with a commutator built without reordering corrections.
pub fn check_crossval(set: &OperatorSet, cfg: &InvarianceConfig, t: f64) -> Result<CheckReport> {
    let start = Instant::now();
    let spec = GridSpec::new(cfg.n, cfg.l, set.dim())?;
    let grid = Grid::new(spec);
    let field = super::test_fields(spec, &InvarianceConfig { fields: 1, ..cfg.clone() })?.remove(0);
    let psi = grid.to_spectral(&field)?;
    let gens: Vec<&CanonicalOperator> = set.generators().into_iter().map(|(_, op)| op).collect();
    let pairs = asserted_pairs(set);

    let mut used = [false; 10];
    for &(a, b) in &pairs {
        used[a] = true;
        used[b] = true;
    }
    let mut tabulated: Vec<Option<GridOperator>> = Vec::with_capacity(10);
    let mut once: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(10);
    let mut moments = Moments::new(&grid, &psi);
    for (g, op) in gens.iter().enumerate() {
        if used[g] {
            let grid_op = GridOperator::new(&grid, op)?;
            once.push(Some(grid_op.apply_moments(&mut moments, t)?));
            tabulated.push(Some(grid_op));
        } else {
            once.push(None);
            tabulated.push(None);
        }
    }

    let norm = |v: &[Complex64]| grid.spectral_norm_sqr(v).sqrt();
    let mut items = Vec::new();
    let mut control: f64 = f64::INFINITY;
    let mut has_control = false;
    for &(a, b) in &pairs {
        let (Some(ga), Some(gb), Some(psi_a), Some(psi_b)) = (&tabulated[a], &tabulated[b], &once[a], &once[b]) else {
            unreachable!("every generator in a pair is tabulated")
        };
        let ab = ga.apply_spectral(&grid, psi_b, t)?;
        let ba = gb.apply_spectral(&grid, psi_a, t)?;
        let composed: Vec<Complex64> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
        let scale = norm(&ab).max(norm(&ba));
        let mut relative = |symbolic: &CanonicalOperator| -> Result<f64> {
            let direct = GridOperator::new(&grid, symbolic)?.apply_moments(&mut moments, t)?;
            let diff: Vec<Complex64> = direct.iter().zip(&composed).map(|(x, y)| x - y).collect();
            let s = scale.max(norm(&direct));
            Ok(if s > 0.0 { norm(&diff) / s } else { 0.0 })
        };
        let name = format!("[{},{}]", GENERATOR_NAMES[a], GENERATOR_NAMES[b]);
        items.push(Item::asserted(name, relative(&gens[a].commutator(gens[b])?)?, tolerances::CROSSVAL));
        if a >= 7 && b >= 7 {
            let naive = commuting_product(gens[a], gens[b])?.try_sub(&commuting_product(gens[b], gens[a])?)?;
            control = control.min(relative(&naive)?);
            has_control = true;
        }
    }
    if has_control {
        items.push(Item::asserted_at_least("negative_control/no_reordering", control, tolerances::NEGATIVE_CONTROL));
    }
    let mut params = cfg.params();
    params.tol = Some(tolerances::CROSSVAL);
    let name = format!("crossval/{}/{}", set.picture, set.label);
    Ok(CheckReport::new(name, params, items, start.elapsed().as_secs_f64()))
}
