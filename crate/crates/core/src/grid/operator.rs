use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Grid, SpinorField};
use crate::calculus::{CanonicalOperator, Monomial, MomentumFunction};
use crate::error::{Error, Result};

/// A [`CanonicalOperator`] with every coefficient tabulated on the lattice
/// momenta of one grid.
///
/// Terms are stored anti-normal ordered, `Σ t^k C'_{k,γ}(p) x^γ`, so the
/// position factors act on the input field before any nonlocal multiplier.
/// A localized input then never meets the periodic seam, whereas `x·(Mψ)`
/// would see the slowly decaying tails of `Mψ` jump across it. The rewrite
/// is `x^α M = Σ_{β ≤ α} C(α, β) i^{|β|} (∂^β M) x^{α−β}`.
///
/// Non-finite coefficient values are tolerated only at the zero mode, where
/// they are replaced by zero (massless operators are undefined at `p = 0`).
#[derive(Clone, Debug)]
pub struct GridOperator {
    dim: usize,
    n: usize,
    terms: Vec<(Monomial, Planes)>,
}

pub(crate) fn tabulate(grid: &Grid, f: &MomentumFunction) -> Result<Vec<Complex64>> {
    let d = f.dim();
    let block = d * d;
    let mut tab = f.eval_batch(grid.momenta());
    let zero_site = 0;
    for (s, chunk) in tab.chunks_mut(block).enumerate() {
        if chunk.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        if s == zero_site {
            chunk.fill(Complex64::new(0.0, 0.0));
        } else {
            return Err(Error::Precondition(format!(
                "coefficient is not finite at lattice momentum {:?}",
                grid.momenta()[s]
            )));
        }
    }
    Ok(tab)
}

/// Multi-indices `β ≤ α` with weights `C(α, β) i^{|β|}`.
fn sub_indices(alpha: [u32; 3]) -> Vec<([u32; 3], Complex64)> {
    let binom = |n: u32, k: u32| (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1));
    let mut out = Vec::new();
    for b0 in 0..=alpha[0] {
        for b1 in 0..=alpha[1] {
            for b2 in 0..=alpha[2] {
                let w = binom(alpha[0], b0) * binom(alpha[1], b1) * binom(alpha[2], b2);
                out.push(([b0, b1, b2], Complex64::i().powu(b0 + b1 + b2) * w));
            }
        }
    }
    out
}

/// A tabulated `d×d` coefficient stored as one plane of site values per
/// matrix entry, keeping only entries that are nonzero somewhere.
#[derive(Clone, Debug)]
struct Planes {
    entries: Vec<(usize, usize, Vec<Complex64>)>,
}

impl Planes {
    fn from_blocks(tab: &[Complex64], d: usize) -> Self {
        let block = d * d;
        let mut entries = Vec::new();
        for c in 0..d {
            for e in 0..d {
                let plane: Vec<Complex64> = tab.chunks(block).map(|m| m[c * d + e]).collect();
                if plane.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
                    entries.push((c, e, plane));
                }
            }
        }
        Self { entries }
    }

    /// `out[c] += factor · Σ_e M[c][e] in[e]` for component-major data.
    fn multiply_add(&self, input: &[Complex64], out: &mut [Complex64], factor: Complex64, sites: usize) {
        for (c, e, plane) in &self.entries {
            let src = &input[e * sites..(e + 1) * sites];
            let dst = &mut out[c * sites..(c + 1) * sites];
            for ((o, m), v) in dst.iter_mut().zip(plane).zip(src) {
                *o += factor * m * v;
            }
        }
    }
}

impl GridOperator {
    pub fn new(grid: &Grid, op: &CanonicalOperator) -> Result<Self> {
        if grid.spec().components != op.dim() {
            return Err(Error::DimensionMismatch { left: grid.spec().components, right: op.dim() });
        }
        let mut reordered: BTreeMap<Monomial, Vec<MomentumFunction>> = BTreeMap::new();
        for (m, f) in op.terms() {
            if f.is_zero() {
                continue;
            }
            for (beta, weight) in sub_indices(m.x) {
                let rest = Monomial { t: m.t, x: [m.x[0] - beta[0], m.x[1] - beta[1], m.x[2] - beta[2]] };
                reordered.entry(rest).or_default().push(f.derivative_multi(beta).scale(weight));
            }
        }
        let mut terms = Vec::new();
        for (m, fs) in reordered {
            let f = MomentumFunction::sum(op.dim(), fs);
            if !f.is_zero() {
                terms.push((m, Planes::from_blocks(&tabulate(grid, &f)?, op.dim())));
            }
        }
        Ok(Self { dim: op.dim(), n: grid.spec().n, terms })
    }

    pub fn multiplier(grid: &Grid, f: &MomentumFunction) -> Result<Self> {
        Self::new(grid, &CanonicalOperator::multiplier(f.clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, grid: &Grid, len: usize) -> Result<()> {
        if grid.spec().n != self.n {
            return Err(Error::Configuration(format!("operator tabulated for N={}, grid has N={}", self.n, grid.spec().n)));
        }
        if len != self.dim * grid.spec().sites() {
            return Err(Error::DimensionMismatch { left: self.dim * grid.spec().sites(), right: len });
        }
        Ok(())
    }

    /// Spectral data in, spectral data out.
    pub fn apply_spectral(&self, grid: &Grid, psi_k: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        self.apply_moments(&mut Moments::new(grid, psi_k), t)
    }

    /// Like [`GridOperator::apply_spectral`], reusing the position moments
    /// already computed for this field.
    pub fn apply_moments(&self, moments: &mut Moments<'_>, t: f64) -> Result<Vec<Complex64>> {
        self.check(moments.grid, moments.psi_k.len())?;
        let sites = moments.grid.spec().sites();
        let mut out = vec![Complex64::new(0.0, 0.0); moments.psi_k.len()];
        for (m, planes) in &self.terms {
            let factor = Complex64::new(t.powi(m.t as i32), 0.0);
            planes.multiply_add(moments.get(m.x, self.dim)?, &mut out, factor, sites);
        }
        Ok(out)
    }

    /// Position-space action at time `t`.
    pub fn apply(&self, grid: &Grid, psi: &SpinorField, t: f64) -> Result<SpinorField> {
        let psi_k = grid.to_spectral(psi)?;
        Ok(grid.from_spectral(self.apply_spectral(grid, &psi_k, t)?))
    }
}

/// Spectral transforms of `x^γ ψ` for one field, computed on demand so that
/// several operators applied to the same field share the FFTs.
pub struct Moments<'a> {
    grid: &'a Grid,
    psi_k: &'a [Complex64],
    position: Option<Vec<Complex64>>,
    cache: BTreeMap<[u32; 3], Vec<Complex64>>,
}

impl<'a> Moments<'a> {
    pub fn new(grid: &'a Grid, psi_k: &'a [Complex64]) -> Self {
        Self { grid, psi_k, position: None, cache: BTreeMap::new() }
    }

    fn get(&mut self, gamma: [u32; 3], dim: usize) -> Result<&[Complex64]> {
        if gamma == [0; 3] {
            return Ok(self.psi_k);
        }
        if !self.cache.contains_key(&gamma) {
            let grid = self.grid;
            let psi_k = self.psi_k;
            let psi = self.position.get_or_insert_with(|| grid.from_spectral(psi_k.to_vec()).into_data());
            let mut field = psi.clone();
            grid.multiply_monomial(&mut field, 0, gamma, 0.0);
            let moved = grid.to_spectral(&SpinorField::from_data(grid.spec().with_components(dim), field)?)?;
            self.cache.insert(gamma, moved);
        }
        Ok(&self.cache[&gamma])
    }
}

/// `⟨ψ, Oψ⟩` at time `t`.
pub fn expectation(grid: &Grid, op: &GridOperator, psi: &SpinorField, t: f64) -> Result<Complex64> {
    psi.inner(&op.apply(grid, psi, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{symmetrized_x, Scalar};
    use crate::grid::{gaussian_wavepacket, GridSpec};

    fn setup() -> (Grid, SpinorField) {
        setup_on(GridSpec::new(32, 12.0, 1).unwrap(), 1.0)
    }

    fn setup_on(spec: GridSpec, sigma: f64) -> (Grid, SpinorField) {
        let grid = Grid::new(spec);
        let psi = gaussian_wavepacket(spec, [0.5, -0.3, 0.2], [0.3, 0.0, -0.2], sigma, &[Complex64::new(1.0, 0.0)]).unwrap();
        (grid, psi)
    }

    #[test]
    fn identity_and_plane_waves() {
        let (grid, psi) = setup();
        let id = GridOperator::new(&grid, &CanonicalOperator::identity(1)).unwrap();
        let out = id.apply(&grid, &psi, 0.7).unwrap();
        assert!(out.sub(&psi).unwrap().norm() < 1e-14);

        let spec = *grid.spec();
        let k = [spec.wavenumber(2), spec.wavenumber(15), 0.0];
        let wave = SpinorField::from_fn(spec, |x| vec![Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1])]).unwrap();
        for a in 0..3 {
            let p = GridOperator::new(&grid, &CanonicalOperator::momentum(1, a)).unwrap();
            let out = p.apply(&grid, &wave, 0.0).unwrap();
            let expect = wave.scale(Complex64::new(k[a], 0.0));
            assert!(out.sub(&expect).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_of_identity_is_one() {
        let (grid, psi) = setup();
        let id = GridOperator::new(&grid, &CanonicalOperator::identity(1)).unwrap();
        assert!((expectation(&grid, &id, &psi, 0.0).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn normal_ordered_product_matches_factor_composition() {
        // E is nonlocal: Eψ decays only like exp(−m|x|), so the box must be
        // wide enough that x·(Eψ) does not jump across the periodic seam
        let (grid, psi) = setup_on(GridSpec::new(64, 40.0, 1).unwrap(), 1.25);
        assert!(psi.boundary_ratio() < 1e-12);
        let e = MomentumFunction::scalar(1, Scalar::energy(1.0));
        let x1 = CanonicalOperator::position(1, 0);
        let emult = CanonicalOperator::multiplier(e.clone());
        let composed = {
            let gx = GridOperator::new(&grid, &x1).unwrap();
            let ge = GridOperator::new(&grid, &emult).unwrap();
            let a = gx.apply(&grid, &ge.apply(&grid, &psi, 0.0).unwrap(), 0.0).unwrap();
            let b = ge.apply(&grid, &gx.apply(&grid, &psi, 0.0).unwrap(), 0.0).unwrap();
            a.axpy(Complex64::new(1.0, 0.0), &b).unwrap().scale(Complex64::new(0.5, 0.0))
        };
        let direct = GridOperator::new(&grid, &symmetrized_x(0, &e)).unwrap().apply(&grid, &psi, 0.0).unwrap();
        let rel = composed.sub(&direct).unwrap().norm() / direct.norm();
        assert!(rel < 2e-9, "{rel}");
    }

    #[test]
    fn dimension_mismatch() {
        let (grid, _) = setup();
        assert!(GridOperator::new(&grid, &CanonicalOperator::identity(2)).is_err());
    }
}
