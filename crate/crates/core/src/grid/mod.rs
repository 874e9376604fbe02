//! Spectral grid oracle on a periodic box.
//!
//! Fields live on an `N³` lattice covering the chart `[−L/2, L/2)³`. Momentum
//! multipliers act mode by mode after a forward FFT, position monomials act
//! site by site, and free evolution is exact per mode. Everything here is an
//! independent second route to the identities the [`calculus`](crate::calculus)
//! layer establishes coefficient by coefficient.
//!
//! Data layout: component-major, `data[c · N³ + site]` with
//! `site = (i·N + j)·N + k` and `(i, j, k)` indexing `(x₁, x₂, x₃)`.

mod evolve;
mod fft;
mod field;
mod operator;
mod sum;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::Momentum;
use crate::error::{Error, Result};

pub use evolve::{dirac_residual, spectral_residual, Propagator};
pub use fft::Fft3;
pub use field::{gaussian_wavepacket, SpinorField};
pub use operator::{expectation, GridOperator, Moments};
pub use sum::pairwise_sum;

/// Lattice size, box side and number of field components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub l: f64,
    pub components: usize,
}

impl GridSpec {
    /// Validates `n` (a power of two, at least 4), `l > 0` and
    /// `components ≥ 1`.
    pub fn new(n: usize, l: f64, components: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Configuration(format!("grid size {n} must be a power of two ≥ 4")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Configuration(format!("box side {l} must be positive")));
        }
        if components == 0 {
            return Err(Error::Configuration("fields need at least one component".into()));
        }
        Ok(Self { n, l, components })
    }

    pub fn sites(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn len(&self) -> usize {
        self.sites() * self.components
    }

    pub fn spacing(&self) -> f64 {
        self.l / self.n as f64
    }

    /// `(L/N)³`, the weight of one site in the inner product.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Position of lattice index `i` along one axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.l + i as f64 * self.spacing()
    }

    /// Wavenumber of FFT index `i`: `2π/L · {0, 1, …, N/2−1, −N/2, …, −1}`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        let n = self.n as isize;
        let i = i as isize;
        let m = if i < n / 2 { i } else { i - n };
        2.0 * PI / self.l * m as f64
    }

    /// `(i, j, k)` of a site.
    pub fn indices(&self, site: usize) -> [usize; 3] {
        let n = self.n;
        [site / (n * n), (site / n) % n, site % n]
    }

    pub fn position(&self, site: usize) -> [f64; 3] {
        self.indices(site).map(|i| self.coordinate(i))
    }

    pub fn momentum(&self, site: usize) -> Momentum {
        self.indices(site).map(|i| self.wavenumber(i))
    }

    /// Lattice momenta in site order.
    pub fn momenta(&self) -> Vec<Momentum> {
        (0..self.sites()).map(|s| self.momentum(s)).collect()
    }

    /// Same lattice with a different component count.
    pub fn with_components(&self, components: usize) -> Self {
        Self { components, ..*self }
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self.n != other.n || self.l != other.l {
            return Err(Error::Configuration(format!(
                "grid mismatch: N={} L={} vs N={} L={}",
                self.n, self.l, other.n, other.l
            )));
        }
        if self.components != other.components {
            return Err(Error::DimensionMismatch { left: self.components, right: other.components });
        }
        Ok(())
    }
}

/// A grid specification together with its FFT plans and coordinate tables.
pub struct Grid {
    spec: GridSpec,
    fft: Fft3,
    momenta: Vec<Momentum>,
    axis_coordinates: Vec<f64>,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Self {
        let fft = Fft3::new(spec.n);
        let momenta = spec.momenta();
        let axis_coordinates = (0..spec.n).map(|i| spec.coordinate(i)).collect();
        Self { spec, fft, momenta, axis_coordinates }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn momenta(&self) -> &[Momentum] {
        &self.momenta
    }

    pub fn fft(&self) -> &Fft3 {
        &self.fft
    }

    /// Forward transform of every component, unnormalized.
    pub fn to_spectral(&self, field: &SpinorField) -> Result<Vec<Complex64>> {
        self.check_field(field)?;
        let mut data = field.data().to_vec();
        for block in data.chunks_mut(self.spec.sites()) {
            self.fft.forward(block);
        }
        Ok(data)
    }

    /// Inverse of [`Grid::to_spectral`].
    pub fn from_spectral(&self, mut data: Vec<Complex64>) -> SpinorField {
        let components = data.len() / self.spec.sites();
        for block in data.chunks_mut(self.spec.sites()) {
            self.fft.inverse(block);
        }
        SpinorField::from_data(self.spec.with_components(components), data).expect("length fixed by construction")
    }

    /// Multiply in place by `t^τ · x^β` at every site.
    pub(crate) fn multiply_monomial(&self, data: &mut [Complex64], t_power: u32, x_power: [u32; 3], t: f64) {
        let tf = t.powi(t_power as i32);
        let n = self.spec.n;
        let sites = self.spec.sites();
        let xs = &self.axis_coordinates;
        let pw = |v: f64, e: u32| v.powi(e as i32);
        for block in data.chunks_mut(sites) {
            for (site, z) in block.iter_mut().enumerate() {
                let (i, j, k) = (site / (n * n), (site / n) % n, site % n);
                let f = tf * pw(xs[i], x_power[0]) * pw(xs[j], x_power[1]) * pw(xs[k], x_power[2]);
                *z *= f;
            }
        }
    }

    /// `‖ψ‖²` from spectral data via Parseval.
    pub fn spectral_norm_sqr(&self, data: &[Complex64]) -> f64 {
        let sq: Vec<f64> = data.iter().map(|z| z.norm_sqr()).collect();
        sum::pairwise_sum_real(&sq) * self.spec.cell_volume() / self.spec.sites() as f64
    }

    /// `⟨φ, ψ⟩` from spectral data via Parseval.
    pub fn spectral_inner(&self, phi: &[Complex64], psi: &[Complex64]) -> Complex64 {
        let prods: Vec<_> = phi.iter().zip(psi).map(|(a, b)| a.conj() * b).collect();
        pairwise_sum(&prods) * (self.spec.cell_volume() / self.spec.sites() as f64)
    }

    fn check_field(&self, field: &SpinorField) -> Result<()> {
        let s = field.spec();
        if s.n != self.spec.n || s.l != self.spec.l {
            return Err(Error::Configuration(format!(
                "field on N={} L={} used with grid N={} L={}",
                s.n, s.l, self.spec.n, self.spec.l
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(30, 20.0, 4).is_err());
        assert!(GridSpec::new(32, 0.0, 4).is_err());
        assert!(GridSpec::new(32, 20.0, 0).is_err());
        assert!(GridSpec::new(32, 20.0, 4).is_ok());
    }

    #[test]
    fn momentum_lattice_covers_symmetric_range() {
        let g = GridSpec::new(8, 2.0 * PI, 1).unwrap();
        let mut ks: Vec<f64> = (0..8).map(|i| g.wavenumber(i)).collect();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(g.coordinate(4), 0.0);
        assert_eq!(g.coordinate(0), -PI);
        assert_eq!(g.indices(g.sites() - 1), [7, 7, 7]);
    }
}
