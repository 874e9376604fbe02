use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{CheckReport, Item, Params};
use super::{par_map, tolerances};
use crate::calculus::{CanonicalOperator, MomentumFunction, OperatorSet, Picture, SetLabel};
use crate::dirac::DiracContext;
use crate::maxwell::{make_transverse_field, MaxwellContext};
use crate::error::{Error, Result};
use crate::grid::{gaussian_wavepacket, Grid, GridOperator, GridSpec, Moments, Propagator, SpinorField};

/// Grid and trajectory settings for [`check_invariance`].
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceConfig {
    pub n: usize,
    pub l: f64,
    pub mass: f64,
    pub tol: f64,
    pub seed: u64,
    /// Time step of the sampled trajectory.
    pub dt: f64,
    /// Number of trajectory samples; the residual is taken at the interior ones.
    pub samples: usize,
    /// Trajectories are centred on this time.
    pub t_center: f64,
    /// Packet width; `None` means `L/16`.
    pub sigma: Option<f64>,
    /// Modulus of the packets' central momentum.
    pub momentum: f64,
    pub fields: usize,
    pub threads: usize,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        Self {
            n: 32,
            l: 20.0,
            mass: 1.0,
            tol: tolerances::GRID,
            seed: 42,
            dt: 5e-3,
            samples: 5,
            t_center: 0.0,
            sigma: None,
            momentum: 1.0,
            fields: 3,
            threads: 1,
        }
    }
}

impl InvarianceConfig {
    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or(self.l / 16.0)
    }

    pub fn params(&self) -> Params {
        Params { n: Some(self.n), l: Some(self.l), mass: Some(self.mass), tol: Some(self.tol), seed: Some(self.seed) }
    }

    pub fn times(&self) -> Vec<f64> {
        let mid = (self.samples as f64 - 1.0) / 2.0;
        (0..self.samples).map(|j| self.t_center + (j as f64 - mid) * self.dt).collect()
    }
}

/// Seeded random unit vector.
pub(crate) fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.map(|x| x / r);
        }
    }
}

/// `count` seeded Gaussian packets centred at the origin with random
/// directions of momentum `|p₀| = momentum` and random complex amplitudes.
pub fn test_fields(spec: GridSpec, cfg: &InvarianceConfig) -> Result<Vec<SpinorField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.fields)
        .map(|_| {
            let dir = random_direction(&mut rng);
            let amps: Vec<Complex64> = (0..spec.components)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            gaussian_wavepacket(spec, dir.map(|d| d * cfg.momentum), [0.0; 3], cfg.sigma(), &amps)
        })
        .collect()
}

/// Fourth-order central-difference weights for offsets −2..=2, times `12 dt`.
const STENCIL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

/// Evolves one field exactly, maps every sample through each operator
/// (`None` is the identity) and returns, per operator, the largest relative
/// residual `‖i∂ₜφ − Hφ‖/‖φ‖` over the interior samples.
///
/// The derivative is accumulated sample by sample, so only one buffer per
/// operator and interior sample is alive at a time.
fn streamed_residuals(
    grid: &Grid,
    propagator: &Propagator,
    h: &GridOperator,
    projector: Option<&GridOperator>,
    operators: &[Option<&GridOperator>],
    field: &SpinorField,
    cfg: &InvarianceConfig,
) -> Result<Vec<f64>> {
    let times = cfg.times();
    let s = times.len();
    if s < 5 {
        return Err(Error::Precondition(format!("residual needs at least 5 samples, got {s}")));
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::Precondition(format!("time step {} must be positive", cfg.dt)));
    }
    let interior: Vec<usize> = (2..s - 2).collect();
    let psi0 = grid.to_spectral(field)?;
    let zero = Complex64::new(0.0, 0.0);
    // acc[op][j] holds i·D₄φ − Hφ at interior sample j
    let mut acc: Vec<Vec<Vec<Complex64>>> = operators.iter().map(|_| interior.iter().map(|_| vec![zero; psi0.len()]).collect()).collect();
    let mut norms = vec![vec![0.0; interior.len()]; operators.len()];
    let w = 1.0 / (12.0 * cfg.dt);
    for (k, &t) in times.iter().enumerate() {
        let psi = propagator.evolve_spectral(&psi0, t)?;
        let mut moments = Moments::new(grid, &psi);
        for (o, op) in operators.iter().enumerate() {
            let mut phi = match op {
                Some(op) => op.apply_moments(&mut moments, t)?,
                None => psi.clone(),
            };
            if let Some(p) = projector {
                phi = p.apply_spectral(grid, &phi, 0.0)?;
            }
            for (slot, &j) in interior.iter().enumerate() {
                let offset = k as isize - j as isize;
                if offset.unsigned_abs() > 2 {
                    continue;
                }
                let buf = &mut acc[o][slot];
                if offset == 0 {
                    norms[o][slot] = grid.spectral_norm_sqr(&phi).sqrt();
                    let hphi = h.apply_spectral(grid, &phi, 0.0)?;
                    for (b, v) in buf.iter_mut().zip(hphi) {
                        *b -= v;
                    }
                } else {
                    let c = Complex64::new(0.0, STENCIL[(offset + 2) as usize] * w);
                    for (b, v) in buf.iter_mut().zip(&phi) {
                        *b += c * v;
                    }
                }
            }
        }
    }
    Ok(acc
        .iter()
        .zip(&norms)
        .map(|(bufs, ns)| {
            bufs.iter()
                .zip(ns)
                .filter(|(_, &n)| n > 0.0)
                .map(|(b, &n)| grid.spectral_norm_sqr(b).sqrt() / n)
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Named operators to push through the solution-mapping test.
pub type NamedOperators = Vec<(String, CanonicalOperator)>;

pub fn set_operators(set: &OperatorSet) -> NamedOperators {
    set.generators().into_iter().map(|(n, op)| (n.to_string(), op.clone())).collect()
}

/// Solution-mapping check: for every generator and every field, the images
/// `Qψ(t_j)` of an exactly evolved trajectory must solve the equation to
/// within `cfg.tol`.
///
/// If the stencil floor (the residual of the bare trajectories) exceeds
/// `tol/10`, the configuration cannot resolve the tolerance and
/// [`Error::Configuration`] is returned instead of a report.
pub fn check_invariance(
    name: &str,
    operators: &NamedOperators,
    hamiltonian: &MomentumFunction,
    fields: &[SpinorField],
    cfg: &InvarianceConfig,
    projector: Option<&MomentumFunction>,
) -> Result<CheckReport> {
    let start = Instant::now();
    if fields.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 test fields, got {}", fields.len())));
    }
    let spec = *fields[0].spec();
    let grid = Grid::new(spec);
    let propagator = Propagator::new(&grid, hamiltonian)?;
    let h = GridOperator::multiplier(&grid, hamiltonian)?;
    let proj = projector.map(|p| GridOperator::multiplier(&grid, p)).transpose()?;

    let floors = par_map(fields, cfg.threads, |f| streamed_residuals(&grid, &propagator, &h, None, &[None], f, cfg));
    let floor = floors.into_iter().map(|r| r.map(|v| v[0])).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    if floor > cfg.tol / 10.0 {
        return Err(Error::Configuration(format!(
            "stencil floor {floor:.3e} exceeds tol/10 = {:.1e}; reduce the time step",
            cfg.tol / 10.0
        )));
    }

    let tabulated = par_map(operators, cfg.threads, |(n, op)| GridOperator::new(&grid, op).map(|g| (n.clone(), g)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ops: Vec<Option<&GridOperator>> = tabulated.iter().map(|(_, g)| Some(g)).collect();
    let per_field = par_map(fields, cfg.threads, |f| streamed_residuals(&grid, &propagator, &h, proj.as_ref(), &ops, f, cfg))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut items = vec![Item::measured("stencil_floor", floor)];
    for (g, (n, _)) in tabulated.iter().enumerate() {
        for (f, res) in per_field.iter().enumerate() {
            items.push(Item::asserted(format!("{n}/field{f}"), res[g], cfg.tol));
        }
    }
    Ok(CheckReport::new(name, cfg.params(), items, start.elapsed().as_secs_f64()))
}

/// Generators whose names start with `prefix`.
fn select(ops: NamedOperators, prefix: &str) -> NamedOperators {
    ops.into_iter().filter(|(n, _)| n.starts_with(prefix)).collect()
}

/// Turns a run on a deliberately broken set into a negative-control report:
/// every item must reach `bound`.
fn negative_report(name: &str, inner: CheckReport, bound: f64, wall: f64) -> CheckReport {
    let items = inner
        .items
        .into_iter()
        .map(|i| if i.tolerance.is_some() { Item::asserted_at_least(i.name, i.residual, bound) } else { i })
        .collect();
    CheckReport::new(name, inner.params, items, wall)
}

/// Invariance of one Dirac generator family.
pub fn dirac_invariance(ctx: &DiracContext, label: SetLabel, picture: Picture, cfg: &InvarianceConfig) -> Result<CheckReport> {
    let spec = GridSpec::new(cfg.n, cfg.l, 4)?;
    let fields = test_fields(spec, cfg)?;
    let set = ctx.build_set(label, picture)?;
    check_invariance(&format!("invariance/dirac/{picture}/{label}"), &set_operators(&set), ctx.hamiltonian_in(picture), &fields, cfg, None)
}

/// The family's boosts with the nonlocal part removed must fail the check.
pub fn dirac_negative_control(ctx: &DiracContext, label: SetLabel, picture: Picture, cfg: &InvarianceConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let spec = GridSpec::new(cfg.n, cfg.l, 4)?;
    let fields = test_fields(spec, cfg)?;
    let set = ctx.negative_control_set(label, picture)?;
    let name = format!("negative-control/dirac/{picture}/{}", set.label);
    let inner = check_invariance(&name, &select(set_operators(&set), "J0"), ctx.hamiltonian_in(picture), &fields, cfg, None)?;
    Ok(negative_report(&name, inner, tolerances::NEGATIVE_CONTROL, start.elapsed().as_secs_f64()))
}

/// Seeded transverse packets.
///
/// `U₁` commutes with the transverse projector, so it maps the transverse
/// subspace onto itself and the same packets serve as canonical-picture
/// data. Mapping them through `U₁` would only add the slowly decaying tails
/// of the `1/|p|` factor.
pub fn maxwell_test_fields(spec: GridSpec, cfg: &InvarianceConfig) -> Result<Vec<SpinorField>> {
    let spec = spec.with_components(6);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.fields)
        .map(|_| {
            let dir = random_direction(&mut rng);
            let amps: Vec<Complex64> =
                (0..6).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            make_transverse_field(spec, dir.map(|d| d * cfg.momentum), [0.0; 3], cfg.sigma(), &amps)
        })
        .collect()
}

/// Invariance of one Maxwell family. In the original picture images are
/// projected back onto the transverse subspace before the residual is taken.
pub fn maxwell_invariance(ctx: &MaxwellContext, label: SetLabel, picture: Picture, cfg: &InvarianceConfig) -> Result<CheckReport> {
    let spec = GridSpec::new(cfg.n, cfg.l, 6)?;
    let fields = maxwell_test_fields(spec, cfg)?;
    let set = ctx.build_set(label, picture)?;
    let projector = (picture == Picture::Original).then(|| ctx.transverse_projector());
    check_invariance(&format!("invariance/maxwell/{picture}/{label}"), &set_operators(&set), ctx.hamiltonian_in(picture), &fields, cfg, projector)
}

pub fn maxwell_negative_control(ctx: &MaxwellContext, label: SetLabel, picture: Picture, cfg: &InvarianceConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let spec = GridSpec::new(cfg.n, cfg.l, 6)?;
    let fields = maxwell_test_fields(spec, cfg)?;
    let set = ctx.negative_control_set(label, picture)?;
    let name = format!("negative-control/maxwell/{picture}/{}", set.label);
    let projector = (picture == Picture::Original).then(|| ctx.transverse_projector());
    let inner = check_invariance(&name, &select(set_operators(&set), "J0"), ctx.hamiltonian_in(picture), &fields, cfg, projector)?;
    Ok(negative_report(&name, inner, tolerances::NEGATIVE_CONTROL, start.elapsed().as_secs_f64()))
}

/// Rotations with the spin part read literally as `ε_abc B_c`; residuals are
/// measured, not asserted.
pub fn maxwell_literal_b_rotations(ctx: &MaxwellContext, picture: Picture, cfg: &InvarianceConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let spec = GridSpec::new(cfg.n, cfg.l, 6)?;
    let fields = maxwell_test_fields(spec, cfg)?;
    let ops: NamedOperators =
        ["J23", "J31", "J12"].iter().map(|n| n.to_string()).zip(ctx.rotations_literal_b()?).collect();
    let projector = (picture == Picture::Original).then(|| ctx.transverse_projector());
    let name = format!("measured/maxwell/{picture}/literal-b-rotations");
    let inner = check_invariance(&name, &ops, ctx.hamiltonian_in(picture), &fields, cfg, projector)?;
    let items = inner.items.into_iter().map(|i| Item::measured(i.name, i.residual)).collect();
    Ok(CheckReport::new(name, inner.params, items, start.elapsed().as_secs_f64()))
}
