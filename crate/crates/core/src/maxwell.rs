//! Maxwell equations as a six-component Schrödinger-type equation
//! `i∂ₜφ = B·p φ` with `φ = (−E, H)`, the transverse projector, the
//! diagonalizing transform and two generator families.
//!
//! `B·p` has a two-dimensional kernel at every `p ≠ 0` (the longitudinal
//! modes), so `1/√(H²)` only makes sense on the transverse subspace. Every
//! function of `1/|p|` here is undefined at `p = 0`; grid code zeroes that
//! single mode.

use num_complex::Complex64;

use crate::algebra::{c64, hermitian_function_off_kernel, kron, ComplexMatrix, MaxwellBlocks};
use crate::calculus::{
    symmetrized_x, CanonicalOperator, Momentum, MomentumFunction, OffShellOperator, OperatorSet, Picture, Scalar,
    SetLabel,
};
use crate::dirac::collect3;
use crate::error::{Error, Result};
use crate::grid::{gaussian_wavepacket, Grid, GridSpec, SpinorField};

const DIM: usize = 6;

#[derive(Clone, Debug)]
pub struct MaxwellContext {
    blocks: MaxwellBlocks,
    h1: MomentumFunction,
    transverse: MomentumFunction,
    transform: MomentumFunction,
    canonical_hamiltonian: MomentumFunction,
    momentum_norm: Scalar,
}

fn momentum_norm() -> Scalar {
    Scalar::p_squared().powf(0.5)
}

impl MaxwellContext {
    pub fn new() -> Self {
        let blocks = MaxwellBlocks::new();
        let h1 = MomentumFunction::sum(
            DIM,
            (0..3).map(|a| MomentumFunction::constant(blocks.b[a].clone()).times_scalar(Scalar::p(a))),
        );
        // 1² ⊗ (δ − p pᵀ/|p|²)
        let inv_p2 = Scalar::p_squared().recip();
        let one2 = ComplexMatrix::identity(2);
        let mut longitudinal = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                let e_ab = ComplexMatrix::from_fn(3, |i, j| if i == a && j == b { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
                longitudinal.push(
                    MomentumFunction::constant(kron(&one2, &e_ab))
                        .times_scalar(Scalar::product(vec![Scalar::p(a), Scalar::p(b), inv_p2.clone()])),
                );
            }
        }
        let transverse = &MomentumFunction::identity(DIM) - &MomentumFunction::sum(DIM, longitudinal);
        let norm = momentum_norm();
        let sign = MomentumFunction::constant(blocks.canonical_sign.clone());
        let transform = (&MomentumFunction::identity(DIM) + &sign.product(&h1).times_scalar(norm.recip()))
            .scale(c64(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let canonical_hamiltonian = sign.times_scalar(norm.clone());
        Self { blocks, h1, transverse, transform, canonical_hamiltonian, momentum_norm: norm }
    }

    pub fn blocks(&self) -> &MaxwellBlocks {
        &self.blocks
    }

    /// `H₁ = B·p`.
    pub fn hamiltonian(&self) -> &MomentumFunction {
        &self.h1
    }

    /// Projector onto the transverse (nonzero-eigenvalue) subspace of `H₁`.
    pub fn transverse_projector(&self) -> &MomentumFunction {
        &self.transverse
    }

    /// `U₁ = (1 + (σ₃⊗1³)H₁/|p|)/√2`; unitary on the transverse subspace only.
    pub fn transform(&self) -> &MomentumFunction {
        &self.transform
    }

    /// `H₁^c = (σ₃⊗1³)|p|`.
    pub fn canonical_hamiltonian(&self) -> &MomentumFunction {
        &self.canonical_hamiltonian
    }

    pub fn momentum_norm(&self) -> &Scalar {
        &self.momentum_norm
    }

    pub fn hamiltonian_in(&self, picture: Picture) -> &MomentumFunction {
        match picture {
            Picture::Original => &self.h1,
            Picture::Canonical => &self.canonical_hamiltonian,
        }
    }

    /// `U₁` built from the spectral decomposition of `H₁(p)`, with
    /// `1/√(H²)` applied on the nonzero eigenspaces only. Cross-check for
    /// [`MaxwellContext::transform`].
    pub fn spectral_transform(&self, p: &Momentum) -> Result<ComplexMatrix> {
        let h = self.h1.eval(p);
        let scale = h.max_abs().max(1.0);
        let inv_abs = hermitian_function_off_kernel(&h, 1e-12 * scale, |l| Some(1.0 / l.abs()))?;
        let sign = &self.blocks.canonical_sign;
        let inner = &ComplexMatrix::identity(DIM) + &(&(sign * &h) * &inv_abs);
        Ok(inner.scale_real(std::f64::consts::FRAC_1_SQRT_2))
    }

    /// Both families come with rotations `x_a p_b − x_b p_a + Σ_ab`, where
    /// `Σ_ab = ε_abc (1²⊗S_c)`.
    pub fn rotations(&self) -> Result<[CanonicalOperator; 3]> {
        let mut out = Vec::with_capacity(3);
        for (a, b) in [(2, 3), (3, 1), (1, 2)] {
            out.push(crate::dirac::orbital_plus_spin(DIM, a, b, self.blocks.rotation_spin_ab(a, b))?);
        }
        Ok(out.try_into().expect("three rotations"))
    }

    /// Rotations with the spin part read literally as `ε_abc B_c`. Not an
    /// invariance set; kept so the alternative can be measured.
    pub fn rotations_literal_b(&self) -> Result<[CanonicalOperator; 3]> {
        let mut out = Vec::with_capacity(3);
        for (a, b, c) in [(2, 3, 1), (3, 1, 2), (1, 2, 3)] {
            out.push(crate::dirac::orbital_plus_spin(DIM, a, b, self.blocks.b[c - 1].clone())?);
        }
        Ok(out.try_into().expect("three rotations"))
    }

    fn momenta(&self) -> [CanonicalOperator; 3] {
        [0, 1, 2].map(|a| CanonicalOperator::momentum(DIM, a))
    }

    fn t_p(a: usize) -> CanonicalOperator {
        CanonicalOperator::momentum(DIM, a - 1).times_t()
    }

    /// Build a Maxwell generator family.
    ///
    /// Canonical picture: the first family is `t pₐ − xₐ p₀` reduced on
    /// `H₁^c` with spin-free boosts; the second uses `½{xₐ, H₁^c}`. Original
    /// picture: only the second family, `t pₐ − ½{xₐ, H₁}`, which maps
    /// transverse solutions to solutions after projection.
    pub fn build_set(&self, label: SetLabel, picture: Picture) -> Result<OperatorSet> {
        let h = self.hamiltonian_in(picture);
        let (energy, boost) = match (label, picture) {
            (SetLabel::Q1, Picture::Canonical) => {
                let energy = OffShellOperator::energy(DIM).on_shell_reduce(h)?;
                let boost = [1, 2, 3].map(|a| {
                    OffShellOperator::from_op(Self::t_p(a))
                        .plus_product(
                            c64(-1.0, 0.0),
                            vec![
                                crate::calculus::Factor::Op(CanonicalOperator::position(DIM, a - 1)),
                                crate::calculus::Factor::Energy,
                            ],
                        )
                        .on_shell_reduce(h)
                });
                (energy, collect3(boost)?)
            }
            (SetLabel::Q2, _) => {
                let boost = [1, 2, 3].map(|a| Self::t_p(a).try_sub(&symmetrized_x(a - 1, h)));
                (CanonicalOperator::multiplier(h.clone()), collect3(boost)?)
            }
            (SetLabel::Q1, Picture::Original) => {
                return Err(Error::Configuration(
                    "the first Maxwell family is only defined in the canonical picture".into(),
                ))
            }
            (SetLabel::Q3 | SetLabel::Q4, _) => {
                return Err(Error::UnsupportedForm(format!("no Maxwell analogue of {label} is constructed")))
            }
        };
        Ok(OperatorSet {
            label: format!("maxwell-{label}"),
            picture,
            energy,
            momentum: self.momenta(),
            rotation: self.rotations()?,
            boost,
        })
    }

    /// Same set with the boosts' `t pₐ` term dropped, leaving `−½{xₐ, H}`.
    /// The missing term contributes `pₐψ` to the residual, which is O(1)
    /// for packets with `|p₀| = 1`.
    pub fn negative_control_set(&self, label: SetLabel, picture: Picture) -> Result<OperatorSet> {
        let set = self.build_set(label, picture)?;
        let h = self.hamiltonian_in(picture);
        let boost = [0, 1, 2].map(|a| symmetrized_x(a, h).scale(c64(-1.0, 0.0)));
        Ok(set.with_boosts(boost, format!("maxwell-{label}-no-time-term")))
    }
}

impl Default for MaxwellContext {
    fn default() -> Self {
        Self::new()
    }
}

/// `φ = (−E, H)` from real 3-vector fields given site by site.
pub fn from_em_fields(spec: GridSpec, e: &[[f64; 3]], h: &[[f64; 3]]) -> Result<SpinorField> {
    let spec = spec.with_components(DIM);
    let sites = spec.sites();
    if e.len() != sites || h.len() != sites {
        return Err(Error::DimensionMismatch { left: sites, right: e.len().min(h.len()) });
    }
    let mut data = vec![Complex64::new(0.0, 0.0); spec.len()];
    for s in 0..sites {
        for a in 0..3 {
            data[a * sites + s] = Complex64::new(-e[s][a], 0.0);
            data[(3 + a) * sites + s] = Complex64::new(h[s][a], 0.0);
        }
    }
    SpinorField::from_data(spec, data)
}

/// Mode-wise projection onto the transverse subspace; the zero mode is
/// removed.
pub fn project_transverse(grid: &Grid, field: &SpinorField) -> Result<SpinorField> {
    let ctx_proj = MaxwellContext::new();
    let op = crate::grid::GridOperator::multiplier(grid, ctx_proj.transverse_projector())?;
    op.apply(grid, field, 0.0)
}

/// `max_block ‖k·φ_block(k)‖ / ‖φ‖`, both 3-vector blocks.
pub fn spectral_divergence(grid: &Grid, field: &SpinorField) -> Result<f64> {
    if field.spec().components != DIM {
        return Err(Error::DimensionMismatch { left: DIM, right: field.spec().components });
    }
    let k = grid.to_spectral(field)?;
    let sites = grid.spec().sites();
    let norm = grid.spectral_norm_sqr(&k).sqrt();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for block in 0..2 {
        let mut div = vec![Complex64::new(0.0, 0.0); sites];
        for (s, d) in div.iter_mut().enumerate() {
            let p = grid.momenta()[s];
            for a in 0..3 {
                *d += p[a] * k[(3 * block + a) * sites + s];
            }
        }
        worst = worst.max(grid.spectral_norm_sqr(&div).sqrt() / norm);
    }
    Ok(worst)
}

/// A localized transverse packet: the Gaussian `g` is mapped mode-wise to
/// `|k|⁸ Ptrans(k) ĝ(k)`. That filter is a polynomial in `k`, i.e. a
/// differential operator, so the packet keeps Gaussian tails. It also
/// vanishes to high order at `k = 0`, where `|p|` is not smooth, which
/// keeps the algebraic tails that evolution under `|p|` produces small.
/// Normalized to unit norm.
pub fn make_transverse_field(
    spec: GridSpec,
    p0: [f64; 3],
    x0: [f64; 3],
    sigma: f64,
    amplitudes: &[Complex64],
) -> Result<SpinorField> {
    let spec = spec.with_components(DIM);
    let grid = Grid::new(spec);
    let g = gaussian_wavepacket(spec, p0, x0, sigma, amplitudes)?;
    let ctx = MaxwellContext::new();
    let filter = ctx.transverse_projector().times_scalar(Scalar::p_squared().powf(4.0));
    let out = crate::grid::GridOperator::multiplier(&grid, &filter)?.apply(&grid, &g, 0.0)?;
    let norm = out.norm();
    if norm == 0.0 {
        return Err(Error::Precondition("packet has no transverse content".into()));
    }
    Ok(out.scale(Complex64::new(1.0 / norm, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutator, max_abs_diff};
    use crate::calculus::standard_samples_nonzero;

    #[test]
    fn spectrum_of_hamiltonian() {
        let ctx = MaxwellContext::new();
        let ev = ctx.hamiltonian().eval(&[0.0, 0.0, 1.0]).hermitian_eigenvalues().unwrap();
        let expect = [-1.0, -1.0, 0.0, 0.0, 1.0, 1.0];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn projector_blocks() {
        let ctx = MaxwellContext::new();
        let p = [1.0, 2.0, -0.5];
        let pp: f64 = p.iter().map(|x| x * x).sum();
        let m = ctx.transverse_projector().eval(&p);
        for blk in 0..2 {
            for a in 0..3 {
                for b in 0..3 {
                    let expect = if a == b { 1.0 } else { 0.0 } - p[a] * p[b] / pp;
                    assert!((m.get(3 * blk + a, 3 * blk + b).re - expect).abs() < 1e-15);
                    assert_eq!(m.get(3 * blk + a, 3 * (1 - blk) + b).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn hamiltonian_lives_on_transverse_subspace() {
        let ctx = MaxwellContext::new();
        for p in standard_samples_nonzero(5) {
            let h = ctx.hamiltonian().eval(&p);
            let pt = ctx.transverse_projector().eval(&p);
            assert!(max_abs_diff(&(&h * &pt), &h) <= 1e-12 * h.max_abs().max(1.0));
        }
    }

    #[test]
    fn transform_diagonalizes_on_transverse_subspace() {
        let ctx = MaxwellContext::new();
        let p = [0.0, 0.0, 2.0];
        let u = ctx.transform().eval(&p);
        let pt = ctx.transverse_projector().eval(&p);
        let lhs = &(&(&pt * &u) * &ctx.hamiltonian().eval(&p)) * &(&u.adjoint() * &pt);
        let rhs = &ComplexMatrix::real_diag(&[2.0, 2.0, 2.0, -2.0, -2.0, -2.0]) * &pt;
        assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
        let spectral = ctx.spectral_transform(&p).unwrap();
        assert!(max_abs_diff(&(&spectral * &pt), &(&u * &pt)) < 1e-14);
    }

    #[test]
    fn rotation_spin_commutes_with_canonical_hamiltonian() {
        let ctx = MaxwellContext::new();
        let hc = ctx.canonical_hamiltonian().eval(&[0.3, -1.0, 0.5]);
        for s in &ctx.blocks().rotation_spin {
            assert!(commutator(s, &hc).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn unsupported_families() {
        let ctx = MaxwellContext::new();
        assert!(matches!(ctx.build_set(SetLabel::Q1, Picture::Original), Err(Error::Configuration(_))));
        assert!(matches!(ctx.build_set(SetLabel::Q3, Picture::Canonical), Err(Error::UnsupportedForm(_))));
    }

    #[test]
    fn em_field_layout() {
        let spec = GridSpec::new(4, 1.0, 6).unwrap();
        let n = spec.sites();
        let e = vec![[1.0, 2.0, 3.0]; n];
        let h = vec![[4.0, 5.0, 6.0]; n];
        let phi = from_em_fields(spec, &e, &h).unwrap();
        assert_eq!(phi.component(0)[7], Complex64::new(-1.0, 0.0));
        assert_eq!(phi.component(5)[7], Complex64::new(6.0, 0.0));
    }
}
