use num_complex::Complex64;

use super::operator::tabulate;
use super::{Grid, GridOperator, SpinorField};
use crate::algebra::ComplexMatrix;
use crate::calculus::{CanonicalOperator, MomentumFunction};
use crate::error::{Error, Result};

/// Exact free evolution `exp(−iH(k)t)` mode by mode.
#[derive(Clone, Debug)]
pub struct Propagator {
    dim: usize,
    n: usize,
    values: Vec<f64>,
    /// Row-major eigenvectors per site; `None` when `H` is diagonal everywhere.
    vectors: Option<Vec<Complex64>>,
}

impl Propagator {
    /// Diagonalizes `H` at every lattice momentum. Fails with
    /// [`Error::NotHermitian`] if any sample has relative defect above 1e-10.
    pub fn new(grid: &Grid, hamiltonian: &MomentumFunction) -> Result<Self> {
        let d = hamiltonian.dim();
        if d != grid.spec().components {
            return Err(Error::DimensionMismatch { left: grid.spec().components, right: d });
        }
        let block = d * d;
        let tab = tabulate(grid, hamiltonian)?;
        let diagonal = tab
            .chunks(block)
            .all(|m| (0..d).all(|r| (0..d).all(|c| r == c || m[r * d + c] == Complex64::new(0.0, 0.0))));
        let sites = grid.spec().sites();
        let mut values = Vec::with_capacity(sites * d);
        if diagonal {
            for m in tab.chunks(block) {
                for r in 0..d {
                    let z = m[r * d + r];
                    if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
                        return Err(Error::NotHermitian { defect: z.im.abs() });
                    }
                    values.push(z.re);
                }
            }
            return Ok(Self { dim: d, n: grid.spec().n, values, vectors: None });
        }
        let mut vectors = Vec::with_capacity(sites * block);
        for m in tab.chunks(block) {
            let mat = ComplexMatrix::from_fn(d, |r, c| m[r * d + c]);
            let (vals, vecs) = mat.hermitian_eigen()?;
            values.extend(vals);
            vectors.extend(vecs.to_row_major());
        }
        Ok(Self { dim: d, n: grid.spec().n, values, vectors: Some(vectors) })
    }

    pub fn evolve_spectral(&self, psi_k: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let d = self.dim;
        let sites = self.n * self.n * self.n;
        if psi_k.len() != d * sites {
            return Err(Error::DimensionMismatch { left: d * sites, right: psi_k.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); psi_k.len()];
        let mut coeff = vec![Complex64::new(0.0, 0.0); d];
        for s in 0..sites {
            let lam = &self.values[s * d..(s + 1) * d];
            match &self.vectors {
                None => {
                    for c in 0..d {
                        out[c * sites + s] = Complex64::from_polar(1.0, -lam[c] * t) * psi_k[c * sites + s];
                    }
                }
                Some(vecs) => {
                    let v = &vecs[s * d * d..(s + 1) * d * d];
                    // coefficients in the eigenbasis, then back
                    for (j, cj) in coeff.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for r in 0..d {
                            acc += v[r * d + j].conj() * psi_k[r * sites + s];
                        }
                        *cj = acc * Complex64::from_polar(1.0, -lam[j] * t);
                    }
                    for r in 0..d {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, cj) in coeff.iter().enumerate() {
                            acc += v[r * d + j] * cj;
                        }
                        out[r * sites + s] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn evolve(&self, grid: &Grid, psi: &SpinorField, t: f64) -> Result<SpinorField> {
        let k = grid.to_spectral(psi)?;
        Ok(grid.from_spectral(self.evolve_spectral(&k, t)?))
    }
}

/// Fourth-order central difference at index `j` of a uniformly sampled
/// sequence.
fn stencil(traj: &[Vec<Complex64>], j: usize, dt: f64) -> Vec<Complex64> {
    let w = 1.0 / (12.0 * dt);
    (0..traj[j].len())
        .map(|i| (-traj[j + 2][i] + 8.0 * traj[j + 1][i] - 8.0 * traj[j - 1][i] + traj[j - 2][i]) * w)
        .collect()
}

/// `max_j ‖i∂ₜφ(t_j) − Hφ(t_j)‖ / ‖φ(t_j)‖` over interior samples, for a
/// trajectory given in spectral form. The zero trajectory has residual 0.
pub fn spectral_residual(grid: &Grid, trajectory: &[Vec<Complex64>], dt: f64, hamiltonian: &GridOperator) -> Result<f64> {
    if trajectory.len() < 5 {
        return Err(Error::Precondition(format!("residual needs at least 5 samples, got {}", trajectory.len())));
    }
    if !(dt > 0.0) {
        return Err(Error::Precondition(format!("time step {dt} must be positive")));
    }
    let mut worst: f64 = 0.0;
    for j in 2..trajectory.len() - 2 {
        let norm = grid.spectral_norm_sqr(&trajectory[j]).sqrt();
        if norm == 0.0 {
            continue;
        }
        let dphi = stencil(trajectory, j, dt);
        let hphi = hamiltonian.apply_spectral(grid, &trajectory[j], 0.0)?;
        let r: Vec<Complex64> = dphi.iter().zip(&hphi).map(|(d, h)| Complex64::new(-d.im, d.re) - h).collect();
        worst = worst.max(grid.spectral_norm_sqr(&r).sqrt() / norm);
    }
    Ok(worst)
}

/// Position-space front end of [`spectral_residual`].
pub fn dirac_residual(grid: &Grid, trajectory: &[SpinorField], dt: f64, hamiltonian: &MomentumFunction) -> Result<f64> {
    let h = GridOperator::new(grid, &CanonicalOperator::multiplier(hamiltonian.clone()))?;
    let traj = trajectory.iter().map(|f| grid.to_spectral(f)).collect::<Result<Vec<_>>>()?;
    spectral_residual(grid, &traj, dt, &h)
}
