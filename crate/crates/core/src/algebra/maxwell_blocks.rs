//! Constant matrices for the six-component Hamiltonian form of the Maxwell
//! equations.

use super::gamma::{levi_civita, pauli};
use super::matrix::{c64, kron, ComplexMatrix};

/// Spin-1 generators, Pauli blocks and the six-component matrices built from
/// them.
#[derive(Clone, Debug)]
pub struct MaxwellBlocks {
    /// `(Sₐ)_bc = −i ε_abc`.
    pub spin: [ComplexMatrix; 3],
    pub sigma2: ComplexMatrix,
    pub sigma3: ComplexMatrix,
    /// `Bₐ = σ₂ ⊗ Sₐ`.
    pub b: [ComplexMatrix; 3],
    /// `1² ⊗ Sₐ`: spin-1 rotations acting on both 3-vector blocks.
    pub rotation_spin: [ComplexMatrix; 3],
    /// `σ₃ ⊗ 1³`.
    pub canonical_sign: ComplexMatrix,
}

impl MaxwellBlocks {
    pub fn new() -> Self {
        let spin = [0, 1, 2].map(|a| {
            ComplexMatrix::from_fn(3, |b, c| c64(0.0, -levi_civita(a, b, c)))
        });
        let sigma2 = pauli(2).expect("index 2");
        let sigma3 = pauli(3).expect("index 3");
        let b = [0, 1, 2].map(|a| kron(&sigma2, &spin[a]));
        let one2 = ComplexMatrix::identity(2);
        let rotation_spin = [0, 1, 2].map(|a| kron(&one2, &spin[a]));
        let canonical_sign = kron(&sigma3, &ComplexMatrix::identity(3));
        Self { spin, sigma2, sigma3, b, rotation_spin, canonical_sign }
    }

    /// Rotation spin part `Σ_ab = ε_abc (1² ⊗ S_c)` for 1-based `a, b`.
    pub fn rotation_spin_ab(&self, a: usize, b: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(6);
        for c in 0..3 {
            let e = levi_civita(a - 1, b - 1, c);
            if e != 0.0 {
                out = out + self.rotation_spin[c].scale_real(e);
            }
        }
        out
    }

    /// `B·p`.
    pub fn b_dot(&self, p: &[f64; 3]) -> ComplexMatrix {
        &(&self.b[0] * p[0] + &self.b[1] * p[1]) + &self.b[2] * p[2]
    }
}

impl Default for MaxwellBlocks {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::{commutator, max_abs_diff, I, ONE, ZERO};

    #[test]
    fn sigma2_entries_as_printed() {
        let m = MaxwellBlocks::new();
        assert_eq!(m.sigma2, ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]));
        assert_eq!(m.sigma3, ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]));
    }

    #[test]
    fn spin_one_closes_on_so3() {
        let m = MaxwellBlocks::new();
        for a in 0..3 {
            for b in 0..3 {
                let lhs = commutator(&m.spin[a], &m.spin[b]).unwrap();
                let mut rhs = ComplexMatrix::zeros(3);
                for c in 0..3 {
                    rhs = rhs + m.spin[c].scale(I * levi_civita(a, b, c));
                }
                assert_eq!(max_abs_diff(&lhs, &rhs), 0.0);
            }
        }
    }

    #[test]
    fn b_commutators_give_rotation_spin() {
        let m = MaxwellBlocks::new();
        for a in 0..3 {
            for b in 0..3 {
                let lhs = commutator(&m.b[a], &m.b[b]).unwrap();
                let mut rhs = ComplexMatrix::zeros(6);
                for c in 0..3 {
                    rhs = rhs + m.rotation_spin[c].scale(I * levi_civita(a, b, c));
                }
                assert!(max_abs_diff(&lhs, &rhs) <= 1e-14);
            }
        }
    }

    #[test]
    fn b_dot_p_spectrum_along_z() {
        let m = MaxwellBlocks::new();
        let ev = m.b_dot(&[0.0, 0.0, 1.0]).hermitian_eigenvalues().unwrap();
        let expected = [-1.0, -1.0, 0.0, 0.0, 1.0, 1.0];
        for (x, y) in ev.iter().zip(expected) {
            assert!((x - y).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn canonical_sign_is_diagonal() {
        let m = MaxwellBlocks::new();
        assert_eq!(m.canonical_sign, ComplexMatrix::real_diag(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]));
    }
}
