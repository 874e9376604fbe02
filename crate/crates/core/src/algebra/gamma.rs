//! Clifford algebra: the five 4×4 gamma matrices and the spin matrices built
//! from them.
//!
//! `γ₀..γ₃` satisfy `{γ_μ, γ_ν} = 2 g_μν` with `g = diag(+1, −1, −1, −1)`.
//! The fifth matrix is fixed as `γ₄ = γ₀γ₁γ₂γ₃`; it anticommutes with the
//! other four and squares to `−1`, which makes `(γ₀γ₄)² = +1` and hence
//! `H² = (|p|² + m²)·1` for `H = γ₀γₐpₐ + γ₀γ₄m`.

use super::matrix::{c64, ComplexMatrix, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Which matrix representation of the Clifford algebra to use.
///
/// Every identity checked by this crate is representation independent; the
/// Weyl (chiral) choice exists to demonstrate that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Representation {
    /// `γ₀ = diag(1, 1, −1, −1)`.
    #[default]
    DiracPauli,
    /// `γ₀` off-diagonal, `γ₅` diagonal.
    Weyl,
}

/// Pauli matrix `σ_k` for `k ∈ {1, 2, 3}`; `k = 0` gives the 2×2 identity.
pub fn pauli(k: usize) -> Result<ComplexMatrix> {
    Ok(match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        3 => ComplexMatrix::real_diag(&[1.0, -1.0]),
        _ => return Err(Error::IndexOutOfRange { index: k, max: 3 }),
    })
}

/// Minkowski metric `g_μν = diag(+1, −1, −1, −1)`; index 4 is treated as
/// spatial (`g₄₄ = −1`), which is the convention used for the four-index spin
/// algebra.
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

/// Totally antisymmetric symbol on `{0, 1, 2}`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// The five gamma matrices in a chosen representation.
#[derive(Clone, Debug)]
pub struct GammaSet {
    representation: Representation,
    gamma: [ComplexMatrix; 5],
}

impl GammaSet {
    pub fn new(representation: Representation) -> Self {
        let block = |tl: &ComplexMatrix, tr: &ComplexMatrix, bl: &ComplexMatrix, br: &ComplexMatrix| {
            ComplexMatrix::from_fn(4, |i, j| {
                let (bi, bj) = (i / 2, j / 2);
                let m = match (bi, bj) {
                    (0, 0) => tl,
                    (0, 1) => tr,
                    (1, 0) => bl,
                    _ => br,
                };
                m.get(i % 2, j % 2)
            })
        };
        let one = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2);
        let g0 = match representation {
            Representation::DiracPauli => block(&one, &zero, &zero, &(-&one)),
            Representation::Weyl => block(&zero, &one, &one, &zero),
        };
        let spatial = |k: usize| {
            let s = pauli(k).expect("k in 1..=3");
            block(&zero, &s, &(-&s), &zero)
        };
        let (g1, g2, g3) = (spatial(1), spatial(2), spatial(3));
        let g4 = &(&(&g0 * &g1) * &g2) * &g3;
        Self { representation, gamma: [g0, g1, g2, g3, g4] }
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// `γ_μ` for `μ ∈ 0..=4`.
    pub fn gamma(&self, mu: usize) -> Result<&ComplexMatrix> {
        self.gamma.get(mu).ok_or(Error::IndexOutOfRange { index: mu, max: 4 })
    }

    /// Unchecked accessor for internal use with literal indices.
    pub(crate) fn g(&self, mu: usize) -> &ComplexMatrix {
        &self.gamma[mu]
    }

    /// `S_μν = (i/4)(γ_μγ_ν − γ_νγ_μ)` for `μ, ν ∈ 0..=4`.
    pub fn spin_matrix(&self, mu: usize, nu: usize) -> Result<ComplexMatrix> {
        let a = self.gamma(mu)?;
        let b = self.gamma(nu)?;
        Ok((a * b - b * a).scale(c64(0.0, 0.25)))
    }

    /// `γ₀γₐ` for `a ∈ 1..=4`: the matrices multiplying `pₐ` and `m` in `H`.
    pub fn alpha(&self, a: usize) -> Result<ComplexMatrix> {
        Ok(self.g(0) * self.gamma(a)?)
    }
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::new(Representation::DiracPauli)
    }
}

/// `γ_μ` in the Dirac–Pauli representation.
pub fn gamma(mu: usize) -> Result<ComplexMatrix> {
    GammaSet::default().gamma(mu).cloned()
}

/// `S_μν` in the Dirac–Pauli representation.
pub fn spin_matrix(mu: usize, nu: usize) -> Result<ComplexMatrix> {
    GammaSet::default().spin_matrix(mu, nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::{anticommutator, commutator, max_abs_diff};

    const EXACT: f64 = 1e-14;

    fn both() -> [GammaSet; 2] {
        [GammaSet::new(Representation::DiracPauli), GammaSet::new(Representation::Weyl)]
    }

    #[test]
    fn gamma0_is_diagonal_in_dirac_pauli() {
        assert_eq!(gamma(0).unwrap(), ComplexMatrix::real_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn clifford_relations() {
        for g in both() {
            for mu in 0..4 {
                for nu in 0..4 {
                    let ac = anticommutator(g.g(mu), g.g(nu)).unwrap();
                    let expect = ComplexMatrix::identity(4).scale_real(2.0 * metric(mu, nu));
                    assert!(max_abs_diff(&ac, &expect) <= EXACT, "{mu}{nu}");
                }
            }
        }
    }

    #[test]
    fn gamma4_extends_the_algebra() {
        for g in both() {
            let sq = g.g(4) * g.g(4);
            assert!(max_abs_diff(&sq, &(-ComplexMatrix::identity(4))) <= EXACT);
            for mu in 0..4 {
                assert!(anticommutator(g.g(4), g.g(mu)).unwrap().max_abs() <= EXACT);
            }
            let b = g.alpha(4).unwrap();
            assert!(max_abs_diff(&(&b * &b), &ComplexMatrix::identity(4)) <= EXACT);
        }
    }

    #[test]
    fn hamiltonian_building_blocks_are_hermitian() {
        for g in both() {
            assert!(g.g(0).is_hermitian(EXACT));
            for a in 1..=4 {
                assert!(g.alpha(a).unwrap().is_hermitian(EXACT), "gamma0 gamma{a}");
            }
        }
    }

    #[test]
    fn spin_matrix_examples() {
        assert_eq!(spin_matrix(1, 1).unwrap().max_abs(), 0.0);
        let s3 = pauli(3).unwrap();
        let expected = ComplexMatrix::from_fn(4, |i, j| {
            if i / 2 == j / 2 {
                s3.get(i % 2, j % 2) * 0.5
            } else {
                ZERO
            }
        });
        assert!(max_abs_diff(&spin_matrix(1, 2).unwrap(), &expected) <= EXACT);
        let anti = spin_matrix(1, 2).unwrap() + spin_matrix(2, 1).unwrap();
        assert_eq!(anti.max_abs(), 0.0);
    }

    #[test]
    fn spatial_spin_commutes_with_gamma0() {
        for g in both() {
            for a in 1..4 {
                for b in 1..4 {
                    let s = g.spin_matrix(a, b).unwrap();
                    assert!(commutator(&s, g.g(0)).unwrap().max_abs() <= EXACT);
                }
            }
        }
    }

    #[test]
    fn four_index_spin_algebra() {
        // [S_kl, S_nr] = i (g_kr S_ln − g_kn S_lr + g_ln S_kr − g_lr S_kn), g = −δ.
        for g in both() {
            let s = |a: usize, b: usize| g.spin_matrix(a, b).unwrap();
            for k in 1..=4 {
                for l in 1..=4 {
                    for n in 1..=4 {
                        for r in 1..=4 {
                            let lhs = commutator(&s(k, l), &s(n, r)).unwrap();
                            let rhs = (s(l, n) * metric(k, r) - s(l, r) * metric(k, n)
                                + s(k, r) * metric(l, n)
                                - s(k, n) * metric(l, r))
                                .scale(I);
                            assert!(max_abs_diff(&lhs, &rhs) <= EXACT, "{k}{l}{n}{r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_commutator() {
        let c = commutator(&pauli(1).unwrap(), &pauli(2).unwrap()).unwrap();
        assert!(max_abs_diff(&c, &pauli(3).unwrap().scale(c64(0.0, 2.0))) <= EXACT);
    }

    #[test]
    fn out_of_range_indices() {
        assert!(gamma(5).is_err());
        assert!(spin_matrix(0, 7).is_err());
        assert!(pauli(4).is_err());
    }

    #[test]
    fn anticommuting_spatial_gammas() {
        assert!(anticommutator(&gamma(1).unwrap(), &gamma(2).unwrap()).unwrap().max_abs() <= EXACT);
        let a11 = anticommutator(&gamma(1).unwrap(), &gamma(1).unwrap()).unwrap();
        assert!(max_abs_diff(&a11, &ComplexMatrix::identity(4).scale_real(-2.0)) <= EXACT);
    }
}
