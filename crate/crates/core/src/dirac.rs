//! Dirac-specific constructions: the Hamiltonian, the canonical transform, the
//! four generator families in both pictures, the shifted position `x̃ₐ` and
//! the nonlocal spin operators `S̃_kl`.
//!
//! Physics-facing indices are 1-based (`a ∈ 1..=3`, `k ∈ 1..=4`) to match the
//! usual notation; the calculus layer underneath is 0-based.

use crate::algebra::{c64, ComplexMatrix, GammaSet, Representation};
use crate::calculus::{
    conjugate, symmetrized_x, CanonicalOperator, Factor, MomentumFunction, OffShellOperator, OperatorSet, Picture,
    Scalar, SetLabel,
};
use crate::error::{Error, Result};

const DIM: usize = 4;

/// Everything the Dirac constructions share for a fixed mass.
#[derive(Clone, Debug)]
pub struct DiracContext {
    mass: f64,
    gammas: GammaSet,
    energy_scalar: Scalar,
    hamiltonian: MomentumFunction,
    energy: MomentumFunction,
    sign: MomentumFunction,
    transform: MomentumFunction,
    canonical_hamiltonian: MomentumFunction,
}

fn check_axis(a: usize) -> Result<()> {
    if !(1..=3).contains(&a) {
        return Err(Error::IndexOutOfRange { index: a, max: 3 });
    }
    Ok(())
}

impl DiracContext {
    pub fn new(mass: f64) -> Result<Self> {
        Self::with_representation(mass, Representation::DiracPauli)
    }

    pub fn with_representation(mass: f64, representation: Representation) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMass(mass));
        }
        let gammas = GammaSet::new(representation);
        let energy_scalar = Scalar::energy(mass);

        // H = γ₀γₐpₐ + γ₀γ₄m
        let mut parts = vec![MomentumFunction::constant(gammas.alpha(4)?.scale_real(mass))];
        for a in 1..=3 {
            parts.push(MomentumFunction::constant(gammas.alpha(a)?).times_scalar(Scalar::p(a - 1)));
        }
        let hamiltonian = MomentumFunction::sum(DIM, parts);
        let energy = MomentumFunction::scalar(DIM, energy_scalar.clone());

        // γ₀H/√(H²), with √(H²) = E·1
        let gamma0 = MomentumFunction::constant(gammas.g(0).clone());
        let sign = gamma0.product(&hamiltonian).times_scalar(energy_scalar.recip());
        let transform = (&MomentumFunction::identity(DIM) + &sign).scale(c64(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let canonical_hamiltonian = gamma0.times_scalar(energy_scalar.clone());

        Ok(Self { mass, gammas, energy_scalar, hamiltonian, energy, sign, transform, canonical_hamiltonian })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn gammas(&self) -> &GammaSet {
        &self.gammas
    }

    /// `H = γ₀γₐpₐ + γ₀γ₄m`.
    pub fn hamiltonian(&self) -> &MomentumFunction {
        &self.hamiltonian
    }

    /// `E·1` with `E = √(|p|² + m²)`.
    pub fn energy(&self) -> &MomentumFunction {
        &self.energy
    }

    pub fn energy_scalar(&self) -> &Scalar {
        &self.energy_scalar
    }

    /// `γ₀H/√(H²)`; anti-Hermitian, squares to `−1`.
    pub fn sign_operator(&self) -> &MomentumFunction {
        &self.sign
    }

    /// `U = (1 + γ₀H/√(H²))/√2`.
    pub fn transform(&self) -> &MomentumFunction {
        &self.transform
    }

    /// `H^c = γ₀E`.
    pub fn canonical_hamiltonian(&self) -> &MomentumFunction {
        &self.canonical_hamiltonian
    }

    /// Hamiltonian of the requested picture.
    pub fn hamiltonian_in(&self, picture: Picture) -> &MomentumFunction {
        match picture {
            Picture::Original => &self.hamiltonian,
            Picture::Canonical => &self.canonical_hamiltonian,
        }
    }

    fn gamma(&self, mu: usize) -> MomentumFunction {
        MomentumFunction::constant(self.gammas.g(mu).clone())
    }

    fn one_minus_sign(&self) -> MomentumFunction {
        &MomentumFunction::identity(DIM) - &self.sign
    }

    /// `γₐ/√(H²) − γ₀H pₐ/(H²√(H²))`, which equals `∂(γ₀H/√(H²))/∂pₐ`.
    pub fn sign_derivative(&self, a: usize) -> Result<MomentumFunction> {
        check_axis(a)?;
        let e = &self.energy_scalar;
        let first = self.gamma(a).times_scalar(e.recip());
        let second = self
            .gamma(0)
            .product(&self.hamiltonian)
            .times_scalar(Scalar::p(a - 1) * e.powf(-3.0));
        Ok(&first - &second)
    }

    /// `(i/2)(1 − γ₀H/√(H²)) (γₐ/√(H²) − γ₀H pₐ/(H²√(H²)))`: the nonlocal
    /// correction shared by `x̃ₐ` and the third family's boosts.
    pub fn position_correction(&self, a: usize) -> Result<MomentumFunction> {
        Ok(self.one_minus_sign().product(&self.sign_derivative(a)?).scale(c64(0.0, 0.5)))
    }

    /// `x̃ₐ = xₐ + (i/2)(1 − γ₀H/√(H²))(γₐ/√(H²) − γ₀Hpₐ/(H²√(H²)))`.
    pub fn x_tilde(&self, a: usize) -> Result<CanonicalOperator> {
        check_axis(a)?;
        let mut op = CanonicalOperator::position(DIM, a - 1);
        op.add_term(crate::calculus::Monomial::ONE, self.position_correction(a)?);
        Ok(op)
    }

    /// `γ̃_k` for `k ∈ 1..=4`.
    pub fn tilded_gamma(&self, k: usize) -> Result<MomentumFunction> {
        let e_inv = self.energy_scalar.recip();
        match k {
            1..=3 => {
                // γₐ + ½(1 − γ₀H/√H²)((γₐγ_c − γ_cγₐ)p_c + 2γₐγ₄m)/√H²
                let ga = self.gammas.g(k);
                let mut inner = vec![MomentumFunction::constant((ga * self.gammas.g(4)).scale_real(2.0 * self.mass))];
                for c in 1..=3 {
                    let gc = self.gammas.g(c);
                    inner.push(MomentumFunction::constant(ga * gc - gc * ga).times_scalar(Scalar::p(c - 1)));
                }
                let inner = MomentumFunction::sum(DIM, inner).times_scalar(e_inv);
                let correction = self.one_minus_sign().product(&inner).scale(c64(0.5, 0.0));
                Ok(&self.gamma(k) + &correction)
            }
            4 => {
                // γ₄ + (1 − (γ_b p_b + γ₄m)/√H²) γ₄γ_c p_c/√H²
                let g4 = self.gammas.g(4);
                let mut k_parts = vec![MomentumFunction::constant(g4.scale_real(self.mass))];
                let mut tail = Vec::new();
                for c in 1..=3 {
                    let gc = self.gammas.g(c);
                    k_parts.push(MomentumFunction::constant(gc.clone()).times_scalar(Scalar::p(c - 1)));
                    tail.push(MomentumFunction::constant(g4 * gc).times_scalar(Scalar::p(c - 1)));
                }
                let kk = MomentumFunction::sum(DIM, k_parts).times_scalar(e_inv.clone());
                let left = &MomentumFunction::identity(DIM) - &kk;
                let tail = MomentumFunction::sum(DIM, tail).times_scalar(e_inv);
                Ok(&self.gamma(4) + &left.product(&tail))
            }
            _ => Err(Error::IndexOutOfRange { index: k, max: 4 }),
        }
    }

    /// `S̃_kl = (i/4)(γ̃_kγ̃_l − γ̃_lγ̃_k)`; zero on the diagonal.
    pub fn tilded_spin(&self, k: usize, l: usize) -> Result<MomentumFunction> {
        for idx in [k, l] {
            if !(1..=4).contains(&idx) {
                return Err(Error::IndexOutOfRange { index: idx, max: 4 });
            }
        }
        if k == l {
            return Ok(MomentumFunction::zero(DIM));
        }
        let gk = self.tilded_gamma(k)?;
        let gl = self.tilded_gamma(l)?;
        Ok((&gk.product(&gl) - &gl.product(&gk)).scale(c64(0.0, 0.25)))
    }

    /// Constant spin matrix `S_kl` as a momentum function.
    pub fn spin(&self, k: usize, l: usize) -> Result<MomentumFunction> {
        Ok(MomentumFunction::constant(self.gammas.spin_matrix(k, l)?))
    }

    fn momenta(&self) -> [CanonicalOperator; 3] {
        [0, 1, 2].map(|a| CanonicalOperator::momentum(DIM, a))
    }

    /// `J_ab = x_a p_b − x_b p_a + S_ab` for the cyclic pairs (23, 31, 12).
    pub fn rotations(&self) -> Result<[CanonicalOperator; 3]> {
        let mut out = Vec::with_capacity(3);
        for (a, b) in [(2, 3), (3, 1), (1, 2)] {
            out.push(orbital_plus_spin(DIM, a, b, self.gammas.spin_matrix(a, b)?)?);
        }
        Ok(out.try_into().expect("three rotations"))
    }

    fn t_p(&self, a: usize) -> CanonicalOperator {
        CanonicalOperator::momentum(DIM, a - 1).times_t()
    }

    /// `t pₐ − xₐ p₀` as an off-shell expression.
    fn lorentz_boost_core(&self, a: usize) -> OffShellOperator {
        OffShellOperator::from_op(self.t_p(a))
            .plus_product(c64(-1.0, 0.0), vec![Factor::Op(CanonicalOperator::position(DIM, a - 1)), Factor::Energy])
    }

    /// Boost `J₀ₐ` of the requested family, expressed in the original picture.
    pub fn original_boost(&self, label: SetLabel, a: usize) -> Result<CanonicalOperator> {
        check_axis(a)?;
        let h = &self.hamiltonian;
        match label {
            SetLabel::Q1 => {
                // x₀pₐ − xₐp₀ + S₀ₐ
                let core = self.lorentz_boost_core(a).on_shell_reduce(h)?;
                core.try_add(&CanonicalOperator::constant(self.gammas.spin_matrix(0, a)?))
            }
            SetLabel::Q2 => self.t_p(a).try_sub(&symmetrized_x(a - 1, h)),
            SetLabel::Q3 => {
                let nonlocal = CanonicalOperator::multiplier(self.position_correction(a)?);
                self.lorentz_boost_core(a)
                    .plus_product(c64(-1.0, 0.0), vec![Factor::Op(nonlocal), Factor::Energy])
                    .on_shell_reduce(h)
            }
            SetLabel::Q4 => {
                let xt = self.x_tilde(a)?;
                let hop = CanonicalOperator::multiplier(h.clone());
                let sym = xt.normal_product(&hop)?.try_add(&hop.normal_product(&xt)?)?.scale_real(0.5);
                self.t_p(a).try_sub(&sym)
            }
        }
    }

    /// Boost `J₀ₐ` written directly in the canonical picture (third and
    /// fourth families only; the first two are obtained by conjugation).
    pub fn canonical_boost_direct(&self, label: SetLabel, a: usize) -> Result<CanonicalOperator> {
        check_axis(a)?;
        let hc = &self.canonical_hamiltonian;
        match label {
            SetLabel::Q3 => self.lorentz_boost_core(a).on_shell_reduce(hc),
            SetLabel::Q4 => {
                // x₀pₐ − (γ₀/2)(xₐE + Exₐ)
                let sym = symmetrized_x(a - 1, &self.energy);
                let g0 = CanonicalOperator::constant(self.gammas.g(0).clone());
                self.t_p(a).try_sub(&g0.normal_product(&sym)?)
            }
            _ => Err(Error::UnsupportedForm(format!(
                "{label} has no direct canonical form; build it by conjugation"
            ))),
        }
    }

    /// The energy generator `P₀` in a picture, on-shell reduced where the
    /// family uses `p₀`.
    fn energy_generator(&self, label: SetLabel, picture: Picture) -> Result<CanonicalOperator> {
        let h = self.hamiltonian_in(picture);
        match label {
            SetLabel::Q1 | SetLabel::Q3 => OffShellOperator::energy(DIM).on_shell_reduce(h),
            SetLabel::Q2 | SetLabel::Q4 => Ok(CanonicalOperator::multiplier(h.clone())),
        }
    }

    /// Build a generator family.
    ///
    /// In the canonical picture, the first two families are the
    /// `U`-conjugates of their original forms while the third and fourth are
    /// written down directly; see [`DiracContext::conjugated_set`] for the
    /// conjugation route.
    pub fn build_set(&self, label: SetLabel, picture: Picture) -> Result<OperatorSet> {
        match (label, picture) {
            (_, Picture::Original) => {
                let boost = [1, 2, 3].map(|a| self.original_boost(label, a));
                Ok(OperatorSet {
                    label: label.to_string(),
                    picture,
                    energy: self.energy_generator(label, picture)?,
                    momentum: self.momenta(),
                    rotation: self.rotations()?,
                    boost: collect3(boost)?,
                })
            }
            (SetLabel::Q1 | SetLabel::Q2, Picture::Canonical) => {
                self.conjugated_set(&self.build_set(label, Picture::Original)?)
            }
            (SetLabel::Q3 | SetLabel::Q4, Picture::Canonical) => {
                let boost = [1, 2, 3].map(|a| self.canonical_boost_direct(label, a));
                Ok(OperatorSet {
                    label: label.to_string(),
                    picture,
                    energy: self.energy_generator(label, picture)?,
                    momentum: self.momenta(),
                    rotation: self.rotations()?,
                    boost: collect3(boost)?,
                })
            }
        }
    }

    /// Conjugate every generator of an original-picture set by `U`.
    pub fn conjugated_set(&self, set: &OperatorSet) -> Result<OperatorSet> {
        let u = &self.transform;
        let conj3 = |ops: &[CanonicalOperator; 3]| -> Result<[CanonicalOperator; 3]> {
            collect3([0, 1, 2].map(|i| conjugate(u, &ops[i])))
        };
        Ok(OperatorSet {
            label: set.label.clone(),
            picture: Picture::Canonical,
            energy: conjugate(u, &set.energy)?,
            momentum: conj3(&set.momentum)?,
            rotation: conj3(&set.rotation)?,
            boost: conj3(&set.boost)?,
        })
    }

    /// `t pₐ − xₐH`: the boost with every family-specific correction removed.
    /// It is not an invariance operator; used as the negative control.
    pub fn naive_boost(&self, a: usize, picture: Picture) -> Result<CanonicalOperator> {
        check_axis(a)?;
        let core = self.lorentz_boost_core(a).on_shell_reduce(&self.hamiltonian)?;
        match picture {
            Picture::Original => Ok(core),
            Picture::Canonical => conjugate(&self.transform, &core),
        }
    }

    /// A set whose boosts are replaced by [`DiracContext::naive_boost`].
    pub fn negative_control_set(&self, label: SetLabel, picture: Picture) -> Result<OperatorSet> {
        let set = self.build_set(label, picture)?;
        let boost = collect3([1, 2, 3].map(|a| self.naive_boost(a, picture)))?;
        Ok(set.with_boosts(boost, format!("{label}-naive-boost")))
    }

    /// Plain-gamma spin operators, the negative control for the O(4) check.
    pub fn plain_spin(&self, k: usize, l: usize) -> Result<MomentumFunction> {
        self.spin(k, l)
    }
}

/// `x_a p_b − x_b p_a + spin` for 1-based `a, b`.
pub(crate) fn orbital_plus_spin(dim: usize, a: usize, b: usize, spin: ComplexMatrix) -> Result<CanonicalOperator> {
    let xa_pb = CanonicalOperator::position(dim, a - 1).normal_product(&CanonicalOperator::momentum(dim, b - 1))?;
    let xb_pa = CanonicalOperator::position(dim, b - 1).normal_product(&CanonicalOperator::momentum(dim, a - 1))?;
    xa_pb.try_sub(&xb_pa)?.try_add(&CanonicalOperator::constant(spin))
}

pub(crate) fn collect3(items: [Result<CanonicalOperator>; 3]) -> Result<[CanonicalOperator; 3]> {
    let [a, b, c] = items;
    Ok([a?, b?, c?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutator, max_abs_diff};
    use crate::calculus::{standard_samples, Monomial};

    fn ctx() -> DiracContext {
        DiracContext::new(1.0).unwrap()
    }

    #[test]
    fn rejects_nonpositive_mass() {
        assert_eq!(DiracContext::new(0.0).unwrap_err(), Error::InvalidMass(0.0));
        assert!(DiracContext::new(-1.0).is_err());
        assert!(DiracContext::new(f64::NAN).is_err());
    }

    #[test]
    fn values_at_rest() {
        let c = ctx();
        let p0 = [0.0; 3];
        let g = c.gammas();
        assert!(max_abs_diff(&c.hamiltonian().eval(&p0), &(g.g(0) * g.g(4))) < 1e-15);
        assert!((c.energy().eval(&p0).get(0, 0).re - 1.0).abs() < 1e-15);
        let u0 = c.transform().eval(&p0);
        let expect = (ComplexMatrix::identity(4) + g.g(4)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(max_abs_diff(&u0, &expect) < 1e-15);
        let hc = &(&u0 * &c.hamiltonian().eval(&p0)) * &u0.adjoint();
        assert!(max_abs_diff(&hc, g.g(0)) < 1e-15);
    }

    #[test]
    fn pythagorean_energy() {
        let c = DiracContext::new(4.0).unwrap();
        assert!((c.energy().eval(&[3.0, 0.0, 0.0]).get(0, 0).re - 5.0).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_squares_to_energy_squared() {
        let c = ctx();
        for p in standard_samples(1) {
            let h = c.hamiltonian().eval(&p);
            let e2 = p.iter().map(|v| v * v).sum::<f64>() + 1.0;
            let diff = max_abs_diff(&(&h * &h), &ComplexMatrix::identity(4).scale_real(e2));
            assert!(diff <= 1e-12 * e2, "{p:?}: {diff}");
        }
    }

    #[test]
    fn sign_derivative_matches_symbolic_derivative() {
        let c = ctx();
        for p in standard_samples(3).iter().step_by(7) {
            for a in 1..=3 {
                let lit = c.sign_derivative(a).unwrap().eval(p);
                let sym = c.sign_operator().derivative(a - 1).eval(p);
                assert!(max_abs_diff(&lit, &sym) < 1e-13);
            }
        }
    }

    #[test]
    fn x_tilde_correction_at_rest() {
        let c = ctx();
        let g = c.gammas();
        for a in 1..=3 {
            let corr = c.position_correction(a).unwrap().eval(&[0.0; 3]);
            let expect = (&(ComplexMatrix::identity(4) - g.g(4)) * g.g(a)).scale(c64(0.0, 0.5));
            assert!(max_abs_diff(&corr, &expect) < 1e-15);
        }
        let xt = c.x_tilde(1).unwrap();
        assert_eq!(xt.coefficient(&Monomial::x(0)).eval(&[0.1, 0.2, 0.3]), ComplexMatrix::identity(4));
    }

    #[test]
    fn x_tilde_correction_vanishes_for_heavy_particles() {
        let c = DiracContext::new(1e6).unwrap();
        for a in 1..=3 {
            let corr = c.position_correction(a).unwrap().eval(&[0.5, -0.3, 0.2]);
            assert!(corr.max_abs() <= 2e-6, "{}", corr.max_abs());
        }
    }

    #[test]
    fn tilded_gammas_at_rest() {
        let c = ctx();
        let g = c.gammas();
        let p0 = [0.0; 3];
        for a in 1..=3 {
            assert!(max_abs_diff(&c.tilded_gamma(a).unwrap().eval(&p0), &(g.g(a) * g.g(4))) < 1e-15);
            let s4a = c.tilded_spin(4, a).unwrap().eval(&p0);
            assert!(max_abs_diff(&s4a, &g.g(a).scale(c64(0.0, 0.5))) < 1e-15);
            let comm = commutator(&c.hamiltonian().eval(&p0), &s4a).unwrap();
            assert!(comm.max_abs() < 1e-15);
        }
        assert!(max_abs_diff(&c.tilded_gamma(4).unwrap().eval(&p0), g.g(4)) < 1e-15);
    }

    #[test]
    fn tilded_spin_is_antisymmetric_and_indexed() {
        let c = ctx();
        let p = [0.4, -1.0, 2.2];
        for k in 1..=4 {
            for l in 1..=4 {
                let a = c.tilded_spin(k, l).unwrap().eval(&p);
                let b = c.tilded_spin(l, k).unwrap().eval(&p);
                assert_eq!(max_abs_diff(&a, &(-b)), 0.0);
            }
        }
        assert!(c.tilded_spin(0, 1).is_err());
        assert!(c.tilded_spin(1, 5).is_err());
        assert!(c.x_tilde(4).is_err());
        assert!(c.x_tilde(0).is_err());
    }

    #[test]
    fn unknown_direct_canonical_family() {
        assert!(matches!(ctx().canonical_boost_direct(SetLabel::Q1, 1), Err(Error::UnsupportedForm(_))));
    }
}
