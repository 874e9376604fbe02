//! Normal-ordered operators: polynomials in the position symbols `xₐ` and the
//! time parameter `t`, with matrix-valued momentum functions as coefficients.
//!
//! Every operator is stored as `Σ t^k x^α C_{k,α}(p)` with all position
//! symbols to the LEFT of their coefficient, i.e. `C` acts first. Products are
//! brought back to this form with the reordering rule
//!
//! ```text
//! M(p) · x^β = Σ_{γ ≤ β} C(β, γ) (−i)^{|γ|} x^{β−γ} ∂^γ M(p)
//! ```
//!
//! which follows from `[xₐ, p_b] = i δ_ab`. Two operators are equal iff all
//! their coefficient functions agree, so equality is decidable by sampling.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::function::MomentumFunction;
use super::sampling::unitarity_probe_samples;
use super::Momentum;
use crate::algebra::{max_abs_diff, ComplexMatrix};
use crate::error::{Error, Result};

/// Highest total degree in the position symbols.
pub const MAX_X_DEGREE: u32 = 2;

/// `t^t · x₁^x[0] x₂^x[1] x₃^x[2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub t: u32,
    pub x: [u32; 3],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { t: 0, x: [0, 0, 0] };

    pub fn t() -> Self {
        Monomial { t: 1, x: [0; 3] }
    }

    /// `x_a` for 0-based `a`.
    pub fn x(a: usize) -> Self {
        let mut x = [0; 3];
        x[a] = 1;
        Monomial { t: 0, x }
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            t: self.t + other.t,
            x: [self.x[0] + other.x[0], self.x[1] + other.x[1], self.x[2] + other.x[2]],
        }
    }

    /// The position part only.
    pub fn position_part(&self) -> [u32; 3] {
        self.x
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.t {
            0 => {}
            1 => parts.push("t".to_string()),
            k => parts.push(format!("t^{k}")),
        }
        for (a, &k) in self.x.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("x{}", a + 1)),
                k => parts.push(format!("x{}^{}", a + 1, k)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Multi-indices `γ ≤ β`.
fn sub_indices(beta: [u32; 3]) -> impl Iterator<Item = [u32; 3]> {
    (0..=beta[0]).flat_map(move |a| (0..=beta[1]).flat_map(move |b| (0..=beta[2]).map(move |c| [a, b, c])))
}

#[derive(Clone)]
pub struct CanonicalOperator {
    dim: usize,
    terms: BTreeMap<Monomial, MomentumFunction>,
}

impl CanonicalOperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn from_term(monomial: Monomial, coefficient: MomentumFunction) -> Self {
        let mut op = Self::zero(coefficient.dim());
        op.add_term(monomial, coefficient);
        op
    }

    /// Pure momentum multiplier `M(p)`.
    pub fn multiplier(m: MomentumFunction) -> Self {
        Self::from_term(Monomial::ONE, m)
    }

    pub fn constant(m: ComplexMatrix) -> Self {
        Self::multiplier(MomentumFunction::constant(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self::multiplier(MomentumFunction::identity(dim))
    }

    /// `xₐ · 1` for 0-based `a`.
    pub fn position(dim: usize, a: usize) -> Self {
        Self::from_term(Monomial::x(a), MomentumFunction::identity(dim))
    }

    /// `pₐ · 1` for 0-based `a`.
    pub fn momentum(dim: usize, a: usize) -> Self {
        Self::multiplier(MomentumFunction::momentum(dim, a))
    }

    /// `t · 1`.
    pub fn time(dim: usize) -> Self {
        Self::from_term(Monomial::t(), MomentumFunction::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &MomentumFunction)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> MomentumFunction {
        self.terms.get(monomial).cloned().unwrap_or_else(|| MomentumFunction::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, monomial: Monomial, coefficient: MomentumFunction) {
        assert_eq!(coefficient.dim(), self.dim, "dimension mismatch");
        if coefficient.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&monomial) {
            Some(old) => &old + &coefficient,
            None => coefficient,
        };
        if !merged.is_zero() {
            self.terms.insert(monomial, merged);
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(*m, c.scale(factor));
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Multiply by the parameter `t` (commutes with everything).
    pub fn times_t(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.times(&Monomial::t()), c.clone());
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale_real(-1.0))
    }

    /// `self · other`, reordered into normal form.
    pub fn normal_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ma, m) in &self.terms {
            for (mb, n) in &other.terms {
                for gamma in sub_indices(mb.x) {
                    let order: u32 = gamma.iter().sum();
                    let d = m.derivative_multi(gamma);
                    if d.is_zero() {
                        continue;
                    }
                    let coeff = d.product(n);
                    if coeff.is_zero() {
                        continue;
                    }
                    let weight = binomial(mb.x[0], gamma[0]) * binomial(mb.x[1], gamma[1]) * binomial(mb.x[2], gamma[2]);
                    // (−i)^order
                    let phase = match order % 4 {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, -1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, 1.0),
                    };
                    let mono = Monomial {
                        t: ma.t + mb.t,
                        x: [
                            ma.x[0] + mb.x[0] - gamma[0],
                            ma.x[1] + mb.x[1] - gamma[1],
                            ma.x[2] + mb.x[2] - gamma[2],
                        ],
                    };
                    if mono.x_degree() > MAX_X_DEGREE {
                        return Err(Error::DegreeOverflow { monomial: mono.to_string() });
                    }
                    out.add_term(mono, coeff.scale(phase * weight));
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.normal_product(other)?.try_sub(&other.normal_product(self)?)
    }

    /// Formal adjoint: `(x^α M)† = M† x^α`, reordered.
    pub fn adjoint(&self) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let mono_only = Self::from_term(Monomial { t: m.t, x: m.x }, MomentumFunction::identity(self.dim));
            let term = Self::multiplier(c.adjoint()).normal_product(&mono_only)?;
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Drop coefficients whose values vanish (≤ `tol`) at every sample.
    pub fn prune(&self, samples: &[Momentum], tol: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if c.max_abs(samples) > tol {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// Coefficient matrices at `p`, one per stored monomial.
    pub fn eval_terms(&self, p: &Momentum) -> Vec<(Monomial, ComplexMatrix)> {
        self.terms.iter().map(|(m, c)| (*m, c.eval(p))).collect()
    }

    /// Largest entrywise coefficient difference over the samples.
    pub fn max_distance(&self, other: &Self, samples: &[Momentum]) -> f64 {
        let mut keys: Vec<Monomial> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let mut worst = 0.0_f64;
        for p in samples {
            for k in &keys {
                let a = self.coefficient(k).eval(p);
                let b = other.coefficient(k).eval(p);
                worst = worst.max(max_abs_diff(&a, &b));
            }
        }
        worst
    }

    /// Largest coefficient entry over the samples.
    pub fn max_abs(&self, samples: &[Momentum]) -> f64 {
        self.terms.values().map(|c| c.max_abs(samples)).fold(0.0, f64::max)
    }

    /// Number of expression nodes across all coefficients.
    pub fn size(&self) -> usize {
        self.terms.values().map(|c| c.size()).sum()
    }
}

impl fmt::Debug for CanonicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalOperator(dim {}; ", self.dim)?;
        for (i, m) in self.terms.keys().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}·C")?;
        }
        write!(f, ")")
    }
}

/// `½(xₐM + Mxₐ) = xₐM − (i/2)∂M/∂pₐ` for 0-based `a`.
pub fn symmetrized_x(a: usize, m: &MomentumFunction) -> CanonicalOperator {
    let mut out = CanonicalOperator::from_term(Monomial::x(a), m.clone());
    out.add_term(Monomial::ONE, m.derivative(a).scale(Complex64::new(0.0, -0.5)));
    out
}

/// `U O U†` in normal form, after checking that `U` is unitary at a fixed
/// probe set (defect ≤ 1e-10).
pub fn conjugate(u: &MomentumFunction, op: &CanonicalOperator) -> Result<CanonicalOperator> {
    conjugate_checked(u, op, &unitarity_probe_samples())
}

pub fn conjugate_checked(
    u: &MomentumFunction,
    op: &CanonicalOperator,
    samples: &[Momentum],
) -> Result<CanonicalOperator> {
    if u.dim() != op.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: op.dim() });
    }
    for p in samples {
        let defect = u.eval(p).unitary_defect();
        if defect > 1e-10 {
            return Err(Error::NotUnitary { defect, momentum: *p });
        }
    }
    let left = CanonicalOperator::multiplier(u.clone()).normal_product(op)?;
    left.normal_product(&CanonicalOperator::multiplier(u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c64, pauli, ComplexMatrix, I};
    use crate::calculus::Scalar;

    fn samples() -> Vec<Momentum> {
        vec![[0.0, 0.0, 0.0], [0.3, -1.2, 0.5], [2.0, 0.7, -0.7], [-1.5, 2.5, 1.0]]
    }

    #[test]
    fn position_momentum_commutator() {
        let x1 = CanonicalOperator::position(1, 0);
        let p1 = CanonicalOperator::momentum(1, 0);
        let c = x1.commutator(&p1).unwrap();
        let expected = CanonicalOperator::constant(ComplexMatrix::identity(1).scale(I));
        assert!(c.max_distance(&expected, &samples()) < 1e-15);
        let p2 = CanonicalOperator::momentum(1, 1);
        assert!(x1.commutator(&p2).unwrap().max_abs(&samples()) == 0.0);
    }

    #[test]
    fn energy_times_position_reorders() {
        let e = MomentumFunction::scalar(1, Scalar::energy(1.0));
        let lhs = CanonicalOperator::multiplier(e.clone())
            .normal_product(&CanonicalOperator::position(1, 0))
            .unwrap();
        let mut expected = CanonicalOperator::from_term(Monomial::x(0), e.clone());
        expected.add_term(
            Monomial::ONE,
            MomentumFunction::scalar(1, Scalar::p(0) * Scalar::energy(1.0).recip()).scale(c64(0.0, -1.0)),
        );
        assert!(lhs.max_distance(&expected, &samples()) < 1e-15);
    }

    #[test]
    fn already_ordered_products_pass_through() {
        let m = MomentumFunction::constant(pauli(1).unwrap()).times_scalar(Scalar::p(2));
        let x = CanonicalOperator::position(2, 0);
        let prod = x.normal_product(&CanonicalOperator::multiplier(m.clone())).unwrap();
        let expected = CanonicalOperator::from_term(Monomial::x(0), m);
        assert!(prod.max_distance(&expected, &samples()) == 0.0);
        let p1 = CanonicalOperator::momentum(1, 0);
        let x2 = CanonicalOperator::position(1, 1);
        let prod = p1.normal_product(&x2).unwrap();
        let expected = CanonicalOperator::from_term(Monomial::x(1), MomentumFunction::momentum(1, 0));
        assert!(prod.max_distance(&expected, &samples()) == 0.0);
    }

    #[test]
    fn symmetrized_x_of_constant_is_plain_x() {
        let s = symmetrized_x(0, &MomentumFunction::identity(2));
        assert!(s.max_distance(&CanonicalOperator::position(2, 0), &samples()) == 0.0);
    }

    #[test]
    fn degree_overflow_is_reported() {
        let x1 = CanonicalOperator::position(1, 0);
        let x1x2 = x1.normal_product(&CanonicalOperator::position(1, 1)).unwrap();
        let err = x1x2.normal_product(&x1).unwrap_err();
        assert_eq!(err, Error::DegreeOverflow { monomial: "x1^2·x2".into() });
    }

    #[test]
    fn second_order_reordering() {
        // M x1² with M = E: x1² E − 2i x1 ∂E − ∂²E
        let e = MomentumFunction::scalar(1, Scalar::energy(2.0));
        let x1sq = CanonicalOperator::position(1, 0).normal_product(&CanonicalOperator::position(1, 0)).unwrap();
        let lhs = CanonicalOperator::multiplier(e.clone()).normal_product(&x1sq).unwrap();
        let mut expected = CanonicalOperator::from_term(Monomial { t: 0, x: [2, 0, 0] }, e.clone());
        expected.add_term(Monomial::x(0), e.derivative(0).scale(c64(0.0, -2.0)));
        expected.add_term(Monomial::ONE, e.derivative(0).derivative(0).scale(c64(-1.0, 0.0)));
        assert!(lhs.max_distance(&expected, &samples()) < 1e-15);
    }

    #[test]
    fn conjugation_by_identity_is_trivial() {
        let op = symmetrized_x(1, &MomentumFunction::constant(pauli(3).unwrap()).times_scalar(Scalar::energy(1.0)));
        let c = conjugate(&MomentumFunction::identity(2), &op).unwrap();
        assert!(c.max_distance(&op, &samples()) < 1e-15);
    }

    #[test]
    fn non_unitary_conjugation_rejected() {
        let u = MomentumFunction::constant(ComplexMatrix::identity(2).scale_real(2.0));
        let err = conjugate(&u, &CanonicalOperator::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
    }

    #[test]
    fn adjoint_of_position_times_multiplier() {
        // (x1 E)† = E x1 = x1 E − i p1/E
        let e = MomentumFunction::scalar(1, Scalar::energy(1.0));
        let op = CanonicalOperator::from_term(Monomial::x(0), e.clone());
        let adj = op.adjoint().unwrap();
        let expected = CanonicalOperator::multiplier(e).normal_product(&CanonicalOperator::position(1, 0)).unwrap();
        assert!(adj.max_distance(&expected, &samples()) < 1e-15);
    }
}
