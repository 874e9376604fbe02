//! Pointwise and coefficient-wise identities as reports: the gamma-matrix
//! suite, the diagonalizing transform, conjugation consistency of the boosts
//! and the Maxwell spectral facts.

use std::time::Instant;

use super::report::{CheckReport, Item, Params};
use super::tolerances;
use crate::algebra::{anticommutator, commutator, max_abs_diff, metric, ComplexMatrix, GammaSet, I};
use crate::calculus::{conjugate, standard_samples, standard_samples_nonzero, CanonicalOperator, SetLabel};
use crate::dirac::DiracContext;
use crate::error::Result;
use crate::maxwell::MaxwellContext;

fn timed(name: String, params: Params, start: Instant, items: Vec<Item>) -> CheckReport {
    CheckReport::new(name, params, items, start.elapsed().as_secs_f64())
}

/// Clifford relations, the properties of `γ₄ = γ₀γ₁γ₂γ₃`, hermiticity of the
/// Hamiltonian building blocks and the four-index spin algebra.
///
/// The negative control swaps `γ₄` for `γ₀γ₁γ₂`, which fails to anticommute
/// with the spatial gammas.
pub fn check_clifford(gammas: &GammaSet) -> Result<CheckReport> {
    let start = Instant::now();
    let g = |mu: usize| gammas.gamma(mu);
    let one = ComplexMatrix::identity(4);

    let mut clifford: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let ac = anticommutator(g(mu)?, g(nu)?)?;
            clifford = clifford.max(max_abs_diff(&ac, &one.scale_real(2.0 * metric(mu, nu))));
        }
    }
    let g4 = g(4)?;
    let square = max_abs_diff(&(g4 * g4), &one.scale_real(-1.0));
    let mut anti: f64 = 0.0;
    for mu in 0..4 {
        anti = anti.max(anticommutator(g4, g(mu)?)?.max_abs());
    }
    let mut hermitian = g(0)?.hermitian_defect();
    for a in 1..=4 {
        hermitian = hermitian.max(gammas.alpha(a)?.hermitian_defect());
    }
    let s = |a: usize, b: usize| gammas.spin_matrix(a, b);
    let mut spin: f64 = 0.0;
    for k in 1..=4 {
        for l in 1..=4 {
            for n in 1..=4 {
                for r in 1..=4 {
                    let lhs = commutator(&s(k, l)?, &s(n, r)?)?;
                    let rhs = (s(l, n)? * metric(k, r) - s(l, r)? * metric(k, n) + s(k, r)? * metric(l, n)
                        - s(k, n)? * metric(l, r))
                    .scale(I);
                    spin = spin.max(max_abs_diff(&lhs, &rhs));
                }
            }
        }
    }
    let wrong = &(g(0)? * g(1)?) * g(2)?;
    let mut control: f64 = 0.0;
    for a in 1..4 {
        control = control.max(anticommutator(&wrong, g(a)?)?.max_abs());
    }
    let tol = tolerances::MATRIX;
    let items = vec![
        Item::asserted("clifford", clifford, tol),
        Item::asserted("gamma4_square", square, tol),
        Item::asserted("gamma4_anticommutes", anti, tol),
        Item::asserted("hermitian_blocks", hermitian, tol),
        Item::asserted("spin_algebra", spin, tol),
        Item::asserted_at_least("negative_control/three_factor_gamma4", control, tolerances::NEGATIVE_CONTROL),
    ];
    let params = Params { tol: Some(tol), ..Params::default() };
    Ok(timed(format!("clifford/{:?}", gammas.representation()).to_lowercase(), params, start, items))
}

/// `‖UHU† − γ₀E‖ ≤ 1e-12·E` and unitarity of `U` at the standard samples.
///
/// The negative control uses `U = 1`.
pub fn check_transform(ctx: &DiracContext, seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let (mut diag, mut unitary, mut control): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for p in standard_samples(seed) {
        let u = ctx.transform().eval(&p);
        let h = ctx.hamiltonian().eval(&p);
        let hc = ctx.canonical_hamiltonian().eval(&p);
        let e = ctx.energy_scalar().eval(&p);
        diag = diag.max(max_abs_diff(&(&(&u * &h) * &u.adjoint()), &hc) / e);
        unitary = unitary.max(u.unitary_defect());
        control = control.min(max_abs_diff(&h, &hc) / e);
    }
    let items = vec![
        Item::asserted("diagonalization", diag, 1e-12),
        Item::asserted("unitarity", unitary, 1e-12),
        Item::asserted_at_least("negative_control/identity_transform", control, tolerances::NEGATIVE_CONTROL),
    ];
    let params = Params { mass: Some(ctx.mass()), tol: Some(1e-12), seed: Some(seed), ..Params::default() };
    Ok(timed("transform/dirac".into(), params, start, items))
}

/// Conjugating the original-picture boosts of the third and fourth families
/// by `U` reproduces their direct canonical forms, and `U x̃ₐ U†` is the plain
/// position. Compared coefficient by coefficient at the standard samples.
///
/// The negative control compares the unconjugated boosts with the canonical
/// ones.
pub fn check_conjugation(ctx: &DiracContext, seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let samples = standard_samples(seed);
    let mut items = Vec::new();
    let mut control = f64::INFINITY;
    for label in [SetLabel::Q3, SetLabel::Q4] {
        for a in 1..=3 {
            let original = ctx.original_boost(label, a)?;
            let direct = ctx.canonical_boost_direct(label, a)?;
            let conj = conjugate(ctx.transform(), &original)?;
            items.push(Item::asserted(format!("{label}/J0{a}"), conj.max_distance(&direct, &samples), tolerances::COEFFICIENT));
            control = control.min(original.max_distance(&direct, &samples));
        }
    }
    for a in 1..=3 {
        let conj = conjugate(ctx.transform(), &ctx.x_tilde(a)?)?;
        let x = CanonicalOperator::position(4, a - 1);
        items.push(Item::asserted(format!("x_tilde/{a}"), conj.max_distance(&x, &samples), tolerances::COEFFICIENT));
    }
    items.push(Item::asserted_at_least("negative_control/unconjugated", control, tolerances::NEGATIVE_CONTROL));
    let params = Params { mass: Some(ctx.mass()), tol: Some(tolerances::COEFFICIENT), seed: Some(seed), ..Params::default() };
    Ok(timed("conjugation/dirac".into(), params, start, items))
}

/// Spectrum `{±|p| ×2, 0 ×2}` of `H₁`, `U₁H₁U₁† = (σ₃⊗1)|p|` on the transverse
/// subspace, and `H₁` vanishing off it, at the nonzero standard samples.
///
/// The negative control drops the transverse projection, where the
/// longitudinal block of `(σ₃⊗1)|p|` survives.
pub fn check_maxwell_spectrum(ctx: &MaxwellContext, seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let (mut spectrum, mut diag, mut support): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut control = f64::INFINITY;
    for p in standard_samples_nonzero(seed) {
        let h = ctx.hamiltonian().eval(&p);
        let norm = ctx.momentum_norm().eval(&p);
        let mut ev = h.hermitian_eigenvalues()?;
        ev.sort_by(f64::total_cmp);
        let want = [-norm, -norm, 0.0, 0.0, norm, norm];
        spectrum = spectrum.max(ev.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / norm);
        let u = ctx.transform().eval(&p);
        let pt = ctx.transverse_projector().eval(&p);
        let hc = ctx.canonical_hamiltonian().eval(&p);
        let conj = &(&u * &h) * &u.adjoint();
        diag = diag.max(max_abs_diff(&(&(&pt * &conj) * &pt), &(&(&pt * &hc) * &pt)) / norm);
        support = support.max(max_abs_diff(&(&h * &pt), &h) / norm);
        control = control.min(max_abs_diff(&conj, &hc) / norm);
    }
    let tol = tolerances::POINTWISE;
    let items = vec![
        Item::asserted("eigenvalue_pattern", spectrum, tol),
        Item::asserted("transverse_diagonalization", diag, tol),
        Item::asserted("hamiltonian_is_transverse", support, tol),
        Item::asserted_at_least("negative_control/without_transverse_projection", control, tolerances::NEGATIVE_CONTROL),
    ];
    let params = Params { tol: Some(tol), seed: Some(seed), ..Params::default() };
    Ok(timed("spectrum/maxwell".into(), params, start, items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Representation;

    #[test]
    fn constant_suites_pass_in_both_representations() {
        for r in [Representation::DiracPauli, Representation::Weyl] {
            let report = check_clifford(&GammaSet::new(r)).unwrap();
            assert!(report.pass, "{:?}", report.failures());
        }
        let ctx = DiracContext::new(1.0).unwrap();
        assert!(check_transform(&ctx, 42).unwrap().pass);
        assert!(check_maxwell_spectrum(&MaxwellContext::new(), 42).unwrap().pass);
    }
}
