use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use super::report::{CheckReport, Item, Params};
use super::tolerances;
use crate::calculus::{lattice_samples, CanonicalOperator, Picture, SetLabel};
use crate::dirac::DiracContext;
use crate::error::{Error, Result};
use crate::grid::{gaussian_wavepacket, Grid, GridOperator, GridSpec, Moments, SpinorField};

/// Settings for [`boost_flow`] and [`dirac_boost_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    pub n: usize,
    pub l: f64,
    pub sigma: f64,
    /// Initial momentum along the boost axis.
    pub momentum: f64,
    pub theta_max: f64,
    pub dtheta: f64,
    /// Expectations are recorded every this many steps.
    pub record_every: usize,
    /// The flow stops once the boundary ratio of either state exceeds this.
    pub boundary_margin: f64,
    pub tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            n: 32,
            l: 40.0,
            sigma: 2.5,
            momentum: 1.0,
            theta_max: 0.5,
            dtheta: 1e-3,
            record_every: 50,
            boundary_margin: 1e-2,
            tol: tolerances::FLOW,
        }
    }
}

/// Rapidity for a velocity, `tanh θ = |V|`.
pub fn rapidity(velocity: f64) -> Result<f64> {
    if !(velocity.abs() < 1.0) {
        return Err(Error::Precondition(format!("velocity {velocity} must satisfy |V| < 1")));
    }
    Ok(velocity.abs().atanh())
}

/// Expectations at one rapidity.
///
/// `energy` and `momentum` are the bilinear values `⟨φ, Aψ⟩` against the dual
/// state, which equal the plain expectations when the generator is symmetric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSample {
    pub theta: f64,
    pub norm: f64,
    pub energy: f64,
    pub momentum: [f64; 3],
    pub position: [f64; 3],
    /// Plain `⟨ψ, P₀ψ⟩ / ‖ψ‖²`.
    pub energy_plain: f64,
    /// Larger boundary ratio of the two states.
    pub boundary_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowRecord {
    pub axis: usize,
    pub samples: Vec<FlowSample>,
    /// Set when the packet reached the boundary margin before `theta_max`.
    pub truncated: bool,
    /// `|⟨ψ₀, Jψ₀⟩ − ⟨Jψ₀, ψ₀⟩|`.
    pub symmetry_defect: f64,
}

impl FlowRecord {
    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("a flow record holds at least the initial sample")
    }
}

/// Solution of `d(E, p)/dθ = −(p, E)` from `(e0, p0)`, the expectation-pair
/// mixing implied by `[P₀, J₀ₐ] = iPₐ` and `[Pₐ, J₀ₐ] = iP₀`.
pub fn mixing(e0: f64, p0: f64, theta: f64) -> (f64, f64) {
    let (s, c) = (theta.sinh(), theta.cosh());
    (e0 * c - p0 * s, p0 * c - e0 * s)
}

fn rk4_step(grid: &Grid, j: &GridOperator, psi: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let i = Complex64::new(0.0, 1.0);
    let rate = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        let mut out = j.apply_moments(&mut Moments::new(grid, v), 0.0)?;
        out.iter_mut().for_each(|z| *z *= i);
        Ok(out)
    };
    let shifted = |k: &[Complex64], w: f64| -> Vec<Complex64> { psi.iter().zip(k).map(|(a, b)| a + b * w).collect() };
    let k1 = rate(psi)?;
    let k2 = rate(&shifted(&k1, h / 2.0))?;
    let k3 = rate(&shifted(&k2, h / 2.0))?;
    let k4 = rate(&shifted(&k3, h))?;
    Ok((0..psi.len()).map(|n| psi[n] + (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]) * (h / 6.0)).collect())
}

fn position_expectation(grid: &Grid, phi: &SpinorField, psi: &SpinorField) -> [f64; 3] {
    let spec = grid.spec();
    let sites = spec.sites();
    let dv = spec.cell_volume();
    let mut out = [0.0; 3];
    for c in 0..spec.components {
        for s in 0..sites {
            let w = (phi.data()[c * sites + s].conj() * psi.data()[c * sites + s]).re * dv;
            let x = spec.position(s);
            for a in 0..3 {
                out[a] += x[a] * w;
            }
        }
    }
    out
}

/// Integrates `dψ/dθ = iJψ` at `t = 0` with fourth-order Runge-Kutta and,
/// alongside it, the dual flow `dφ/dθ = iJ†φ` from the same initial state.
/// The pairing `⟨φ, Aψ⟩` obeys `d⟨φ, Aψ⟩/dθ = i⟨φ, [A, J]ψ⟩` whether or not
/// `J` is symmetric; for a symmetric `J` the two flows coincide.
pub fn boost_flow(
    grid: &Grid,
    generator: &CanonicalOperator,
    energy: &CanonicalOperator,
    axis: usize,
    psi0: &SpinorField,
    theta_max: f64,
    dtheta: f64,
    record_every: usize,
    boundary_margin: f64,
) -> Result<FlowRecord> {
    if !(1..=3).contains(&axis) {
        return Err(Error::Precondition(format!("boost axis {axis} outside 1..=3")));
    }
    if !(dtheta > 0.0) || !(theta_max >= 0.0) || record_every == 0 {
        return Err(Error::Precondition(format!("bad flow steps: theta_max={theta_max} dtheta={dtheta}")));
    }
    let dim = generator.dim();
    let j = GridOperator::new(grid, generator)?;
    let adjoint = generator.adjoint()?;
    let samples = lattice_samples();
    let symmetric = generator.max_distance(&adjoint, &samples) <= 1e-12 * generator.max_abs(&samples).max(1.0);
    let j_dual = if symmetric { None } else { Some(GridOperator::new(grid, &adjoint)?) };
    let p0 = GridOperator::new(grid, energy)?;
    let momenta: Vec<GridOperator> =
        (0..3).map(|a| GridOperator::new(grid, &CanonicalOperator::momentum(dim, a))).collect::<Result<_>>()?;

    let mut psi = grid.to_spectral(psi0)?;
    let jpsi = j.apply_spectral(grid, &psi, 0.0)?;
    let symmetry_defect = (grid.spectral_inner(&psi, &jpsi) - grid.spectral_inner(&jpsi, &psi)).norm();
    let mut phi = psi.clone();

    let record = |theta: f64, phi: &[Complex64], psi: &[Complex64]| -> Result<FlowSample> {
        let pair = |op: &GridOperator| -> Result<f64> { Ok(grid.spectral_inner(phi, &op.apply_spectral(grid, psi, 0.0)?).re) };
        let norm_sqr = grid.spectral_norm_sqr(psi);
        let psi_x = grid.from_spectral(psi.to_vec());
        let phi_x = grid.from_spectral(phi.to_vec());
        let energy_plain = grid.spectral_inner(psi, &p0.apply_spectral(grid, psi, 0.0)?).re / norm_sqr;
        let sample = FlowSample {
            theta,
            norm: norm_sqr.sqrt(),
            energy: pair(&p0)?,
            momentum: [pair(&momenta[0])?, pair(&momenta[1])?, pair(&momenta[2])?],
            position: position_expectation(grid, &phi_x, &psi_x),
            energy_plain,
            boundary_ratio: psi_x.boundary_ratio().max(phi_x.boundary_ratio()),
        };
        Ok(sample)
    };

    let steps = (theta_max / dtheta).round() as usize;
    let mut samples = vec![record(0.0, &phi, &psi)?];
    let mut truncated = false;
    for step in 1..=steps {
        psi = rk4_step(grid, &j, &psi, dtheta)?;
        phi = match &j_dual {
            Some(jd) => rk4_step(grid, jd, &phi, dtheta)?,
            None => psi.clone(),
        };
        if step % record_every == 0 || step == steps {
            let sample = record(step as f64 * dtheta, &phi, &psi)?;
            if sample.boundary_ratio > boundary_margin {
                truncated = true;
                break;
            }
            samples.push(sample);
        }
    }
    Ok(FlowRecord { axis, samples, truncated, symmetry_defect })
}

/// Positive-energy canonical packet moving along `axis`.
pub fn flow_initial_state(spec: GridSpec, cfg: &FlowConfig, axis: usize) -> Result<SpinorField> {
    let mut p = [0.0; 3];
    p[axis - 1] = cfg.momentum;
    let amps = [Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    gaussian_wavepacket(spec, p, [0.0; 3], cfg.sigma, &amps)
}

/// Boost flow of one Dirac set in the canonical picture.
///
/// Asserts the hyperbolic mixing of `(⟨P₀⟩, ⟨pₐ⟩)` at every recorded rapidity
/// and, for the symmetric q1/q2 boosts, norm conservation. The norm drift of
/// q3/q4 and the symmetry defect are measured. The companion negative control
/// compares the same flow against the mixing with the opposite sign.
pub fn dirac_boost_check(ctx: &DiracContext, label: SetLabel, axis: usize, cfg: &FlowConfig) -> Result<(CheckReport, FlowRecord)> {
    let start = Instant::now();
    let set = ctx.build_set(label, Picture::Canonical)?;
    let spec = GridSpec::new(cfg.n, cfg.l, 4)?;
    let grid = Grid::new(spec);
    let psi0 = flow_initial_state(spec, cfg, axis)?;
    let rec = boost_flow(
        &grid,
        &set.boost[axis - 1],
        &set.energy,
        axis,
        &psi0,
        cfg.theta_max,
        cfg.dtheta,
        cfg.record_every,
        cfg.boundary_margin,
    )?;
    let first = &rec.samples[0];
    let (e0, p0) = (first.energy, first.momentum[axis - 1]);
    let deviation = |sign: f64| {
        rec.samples
            .iter()
            .map(|s| {
                let (e, p) = mixing(e0, sign * p0, s.theta);
                (s.energy - e).abs().max((sign * s.momentum[axis - 1] - p).abs())
            })
            .fold(0.0, f64::max)
    };
    let norm_drift = rec.samples.iter().map(|s| (s.norm - first.norm).abs()).fold(0.0, f64::max);
    let transverse = rec
        .samples
        .iter()
        .flat_map(|s| (1..=3).filter(|&b| b != axis).map(move |b| (s.momentum[b - 1] - first.momentum[b - 1]).abs()))
        .fold(0.0, f64::max);
    let mut items = vec![
        Item::asserted("mixing", deviation(1.0), cfg.tol),
        Item::asserted("transverse_momentum", transverse, cfg.tol),
        Item::asserted("reached_theta_max", if rec.truncated { 1.0 } else { 0.0 }, 0.0),
    ];
    items.push(match label {
        SetLabel::Q1 | SetLabel::Q2 => Item::asserted("norm_drift", norm_drift, 1e-8),
        SetLabel::Q3 | SetLabel::Q4 => Item::measured("norm_drift", norm_drift),
    });
    items.push(Item::measured("symmetry_defect", rec.symmetry_defect));
    items.push(Item::asserted_at_least("negative_control/reversed_mixing", deviation(-1.0), tolerances::NEGATIVE_CONTROL));
    let params = Params { n: Some(cfg.n), l: Some(cfg.l), mass: Some(ctx.mass()), tol: Some(cfg.tol), seed: None };
    let name = format!("boost/dirac/canonical/{}/axis{axis}", label.as_str());
    Ok((CheckReport::new(name, params, items, start.elapsed().as_secs_f64()), rec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rapidity_matches_tanh() {
        let theta = rapidity(0.46).unwrap();
        assert!((theta.tanh() - 0.46).abs() < 1e-15);
        assert!((theta - 0.497).abs() < 1e-3);
        assert_eq!(rapidity(-0.46).unwrap(), theta);
        assert!(rapidity(1.0).is_err());
        assert!(rapidity(f64::NAN).is_err());
    }

    #[test]
    fn mixing_solves_the_pair_ode() {
        let (e0, p0) = (1.5, 0.7);
        let h = 1e-6;
        for theta in [0.0, 0.3, 0.5] {
            let (e, p) = mixing(e0, p0, theta);
            let (ep, pp) = mixing(e0, p0, theta + h);
            let (em, pm) = mixing(e0, p0, theta - h);
            assert!(((ep - em) / (2.0 * h) + p).abs() < 1e-8);
            assert!(((pp - pm) / (2.0 * h) + e).abs() < 1e-8);
            // the Minkowski square is preserved
            assert!((e * e - p * p - (e0 * e0 - p0 * p0)).abs() < 1e-12);
        }
        assert_eq!(mixing(e0, p0, 0.0), (e0, p0));
    }
}
