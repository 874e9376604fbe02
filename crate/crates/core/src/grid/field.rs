use std::io::Write;

use num_complex::Complex64;

use super::sum::{pairwise_sum, pairwise_sum_real};
use super::GridSpec;
use crate::error::{Error, Result};

/// A `d`-component complex field on the periodic lattice, position space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    spec: GridSpec,
    data: Vec<Complex64>,
}

impl SpinorField {
    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, data: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_data(spec: GridSpec, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::DimensionMismatch { left: spec.len(), right: data.len() });
        }
        Ok(Self { spec, data })
    }

    /// Build from a per-site closure returning all components.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut([f64; 3]) -> Vec<Complex64>) -> Result<Self> {
        let sites = spec.sites();
        let mut data = vec![Complex64::new(0.0, 0.0); spec.len()];
        for s in 0..sites {
            let v = f(spec.position(s));
            if v.len() != spec.components {
                return Err(Error::DimensionMismatch { left: spec.components, right: v.len() });
            }
            for (c, z) in v.into_iter().enumerate() {
                data[c * sites + s] = z;
            }
        }
        Ok(Self { spec, data })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let s = self.spec.sites();
        &self.data[c * s..(c + 1) * s]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `⟨self, other⟩ = (L/N)³ Σ self† other`, summed pairwise in a fixed order.
    pub fn inner(&self, other: &SpinorField) -> Result<Complex64> {
        self.spec.check_same(&other.spec)?;
        let prods: Vec<Complex64> = self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).collect();
        Ok(pairwise_sum(&prods) * self.spec.cell_volume())
    }

    pub fn norm(&self) -> f64 {
        let sq: Vec<f64> = self.data.iter().map(|z| z.norm_sqr()).collect();
        (pairwise_sum_real(&sq) * self.spec.cell_volume()).sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { spec: self.spec, data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: Complex64, other: &SpinorField) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + factor * b).collect();
        Ok(Self { spec: self.spec, data })
    }

    pub fn sub(&self, other: &SpinorField) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the boundary faces divided by the largest modulus
    /// overall; zero for the zero field.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.spec.n;
        let sites = self.spec.sites();
        let mut edge: f64 = 0.0;
        for s in 0..sites {
            if self.spec.indices(s).iter().any(|&i| i == 0 || i == n - 1) {
                for c in 0..self.spec.components {
                    edge = edge.max(self.data[c * sites + s].norm());
                }
            }
        }
        let peak = self.max_abs();
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// Write `site component re im` lines, one per value, components outermost.
    /// The header line records the lattice.
    pub fn write_snapshot(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "# n={} l={} components={}", self.spec.n, self.spec.l, self.spec.components)?;
        let sites = self.spec.sites();
        for (idx, z) in self.data.iter().enumerate() {
            writeln!(out, "{} {} {:e} {:e}", idx % sites, idx / sites, z.re, z.im)?;
        }
        Ok(())
    }
}

/// Normalized Gaussian packet `∝ exp(−|x−x₀|²/(4σ²) + i p₀·x) · amplitudes`.
///
/// Requires `2L/N ≤ σ ≤ L/10` and `x₀` inside the chart.
pub fn gaussian_wavepacket(
    spec: GridSpec,
    p0: [f64; 3],
    x0: [f64; 3],
    sigma: f64,
    amplitudes: &[Complex64],
) -> Result<SpinorField> {
    let min = 2.0 * spec.spacing();
    let max = spec.l / 10.0;
    if !(sigma >= min && sigma <= max) {
        return Err(Error::Precondition(format!("width {sigma} outside [{min}, {max}] for N={} L={}", spec.n, spec.l)));
    }
    if x0.iter().any(|&v| !(v >= -0.5 * spec.l && v < 0.5 * spec.l)) {
        return Err(Error::Precondition(format!("centre {x0:?} outside the box")));
    }
    if amplitudes.len() != spec.components {
        return Err(Error::DimensionMismatch { left: spec.components, right: amplitudes.len() });
    }
    if amplitudes.iter().all(|a| a.norm() == 0.0) {
        return Err(Error::Precondition("all amplitudes vanish".into()));
    }
    let field = SpinorField::from_fn(spec, |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..3 {
            r2 += (x[a] - x0[a]).powi(2);
            phase += p0[a] * x[a];
        }
        let envelope = Complex64::from_polar((-r2 / (4.0 * sigma * sigma)).exp(), phase);
        amplitudes.iter().map(|a| a * envelope).collect()
    })?;
    let norm = field.norm();
    Ok(field.scale(Complex64::new(1.0 / norm, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GridSpec {
        GridSpec::new(32, 10.0, 2).unwrap()
    }

    #[test]
    fn wavepacket_is_normalized() {
        let amps = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let f = gaussian_wavepacket(spec(), [1.0, 0.0, 0.0], [0.0; 3], 1.0, &amps).unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-14);
        assert!(f.is_finite());
    }

    #[test]
    fn wavepacket_preconditions() {
        let amps = [Complex64::new(1.0, 0.0); 2];
        assert!(gaussian_wavepacket(spec(), [0.0; 3], [0.0; 3], 0.5, &amps).is_err());
        assert!(gaussian_wavepacket(spec(), [0.0; 3], [0.0; 3], 1.1, &amps).is_err());
        assert!(gaussian_wavepacket(spec(), [0.0; 3], [6.0, 0.0, 0.0], 1.0, &amps).is_err());
        assert!(gaussian_wavepacket(spec(), [0.0; 3], [0.0; 3], 1.0, &amps[..1]).is_err());
        assert!(gaussian_wavepacket(spec(), [0.0; 3], [0.0; 3], 1.0, &[Complex64::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn snapshot_layout() {
        let s = GridSpec::new(4, 1.0, 1).unwrap();
        let mut f = SpinorField::zeros(s);
        f.data[5] = Complex64::new(1.5, -2.0);
        let mut buf = Vec::new();
        f.write_snapshot(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# n=4 l=1 components=1\n"));
        assert_eq!(text.lines().nth(6).unwrap(), "5 0 1.5e0 -2e0");
        assert_eq!(text.lines().count(), 65);
    }
}
