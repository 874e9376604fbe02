//! Expressions containing the energy operator `p₀ = i∂/∂t`.
//!
//! Invariance operators only need to be defined on solutions, where
//! `p₀Ψ = HΨ`. An [`OffShellOperator`] is a sum of products of canonical
//! factors and `p₀`; reducing it on-shell substitutes the Hamiltonian for
//! every `p₀`. Only right-factor occurrences are supported: moving `p₀` past
//! a `t`-dependent factor would need the full time calculus.

use num_complex::Complex64;

use super::function::MomentumFunction;
use super::operator::CanonicalOperator;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Factor {
    Op(CanonicalOperator),
    /// `p₀ = i ∂/∂t`.
    Energy,
}

#[derive(Clone, Debug)]
pub struct OffShellOperator {
    dim: usize,
    terms: Vec<(Complex64, Vec<Factor>)>,
}

impl OffShellOperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    /// The bare energy operator `p₀`.
    pub fn energy(dim: usize) -> Self {
        Self::zero(dim).plus_product(Complex64::new(1.0, 0.0), vec![Factor::Energy])
    }

    pub fn from_op(op: CanonicalOperator) -> Self {
        let dim = op.dim();
        Self::zero(dim).plus_product(Complex64::new(1.0, 0.0), vec![Factor::Op(op)])
    }

    /// Append `coefficient · f₁ f₂ … fₙ`.
    pub fn plus_product(mut self, coefficient: Complex64, factors: Vec<Factor>) -> Self {
        self.terms.push((coefficient, factors));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Replace every right-factor `p₀` by the multiplier `hamiltonian`.
    pub fn on_shell_reduce(&self, hamiltonian: &MomentumFunction) -> Result<CanonicalOperator> {
        if hamiltonian.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: hamiltonian.dim() });
        }
        let h = CanonicalOperator::multiplier(hamiltonian.clone());
        let mut out = CanonicalOperator::zero(self.dim);
        for (coefficient, factors) in &self.terms {
            let last = factors.len().saturating_sub(1);
            let mut product = CanonicalOperator::identity(self.dim);
            for (i, f) in factors.iter().enumerate() {
                let next = match f {
                    Factor::Op(op) => op,
                    Factor::Energy if i == last => &h,
                    Factor::Energy => {
                        return Err(Error::UnsupportedForm(format!(
                            "p0 at factor position {} of {}; only a trailing p0 can be reduced on-shell",
                            i + 1,
                            factors.len()
                        )))
                    }
                };
                product = product.normal_product(next)?;
            }
            out = out.try_add(&product.scale(*coefficient))?;
        }
        Ok(out)
    }
}

/// Reduce a bare `p₀` on-shell.
pub fn on_shell_reduce(expr: &OffShellOperator, hamiltonian: &MomentumFunction) -> Result<CanonicalOperator> {
    expr.on_shell_reduce(hamiltonian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use crate::calculus::{Monomial, Scalar};

    fn h() -> MomentumFunction {
        MomentumFunction::constant(pauli(3).unwrap()).times_scalar(Scalar::energy(1.0))
    }

    #[test]
    fn bare_energy_becomes_hamiltonian() {
        let r = OffShellOperator::energy(2).on_shell_reduce(&h()).unwrap();
        let expected = CanonicalOperator::multiplier(h());
        assert_eq!(r.max_distance(&expected, &[[0.2, 0.3, -1.0]]), 0.0);
    }

    #[test]
    fn lorentz_like_boost_reduces_to_t_p_minus_x_h() {
        let dim = 2;
        let t_p1 = CanonicalOperator::momentum(dim, 0).times_t();
        let x1 = CanonicalOperator::position(dim, 0);
        let expr = OffShellOperator::from_op(t_p1.clone()).plus_product(
            Complex64::new(-1.0, 0.0),
            vec![Factor::Op(x1), Factor::Energy],
        );
        let r = expr.on_shell_reduce(&h()).unwrap();
        let mut expected = t_p1;
        expected.add_term(Monomial::x(0), h().scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(r.max_distance(&expected, &[[0.2, 0.3, -1.0], [1.0, 0.0, 0.0]]), 0.0);
    }

    #[test]
    fn leading_energy_is_unsupported() {
        let expr = OffShellOperator::zero(2).plus_product(
            Complex64::new(1.0, 0.0),
            vec![Factor::Energy, Factor::Op(CanonicalOperator::position(2, 0))],
        );
        assert!(matches!(expr.on_shell_reduce(&h()), Err(Error::UnsupportedForm(_))));
    }
}
