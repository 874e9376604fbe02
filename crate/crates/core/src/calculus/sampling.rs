//! Momentum sample sets used for coefficient-level identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Momentum;

/// Per-axis values of the deterministic lattice.
pub const LATTICE_AXIS: [f64; 5] = [-2.0, -0.7, 0.0, 0.7, 2.0];

/// Number of random points added to the lattice.
pub const RANDOM_POINTS: usize = 100;

/// Radius of the ball the random points are drawn from.
pub const RANDOM_RADIUS: f64 = 5.0;

/// `{−2, −0.7, 0, 0.7, 2}³`, including `p = 0`.
pub fn lattice_samples() -> Vec<Momentum> {
    let mut out = Vec::with_capacity(125);
    for &a in &LATTICE_AXIS {
        for &b in &LATTICE_AXIS {
            for &c in &LATTICE_AXIS {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// `count` points drawn uniformly from the ball `|p| ≤ radius`.
pub fn random_ball_samples(seed: u64, count: usize, radius: f64) -> Vec<Momentum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = [
            rng.random_range(-radius..radius),
            rng.random_range(-radius..radius),
            rng.random_range(-radius..radius),
        ];
        if p.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
            out.push(p);
        }
    }
    out
}

/// The standard set: 125 lattice points plus 100 seeded random points with
/// `|p| ≤ 5` (225 in total).
pub fn standard_samples(seed: u64) -> Vec<Momentum> {
    let mut out = lattice_samples();
    out.extend(random_ball_samples(seed, RANDOM_POINTS, RANDOM_RADIUS));
    out
}

/// Same as [`standard_samples`] minus the origin, for massless constructions
/// that are undefined at `p = 0`.
pub fn standard_samples_nonzero(seed: u64) -> Vec<Momentum> {
    standard_samples(seed).into_iter().filter(|p| p.iter().any(|v| *v != 0.0)).collect()
}

/// Fixed probe points used to validate unitarity before conjugating.
pub(crate) fn unitarity_probe_samples() -> Vec<Momentum> {
    vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, -0.7, 2.0],
        [0.3, 1.1, -0.4],
        [-2.0, 2.0, 0.7],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_set_has_225_points_and_origin() {
        let s = standard_samples(42);
        assert_eq!(s.len(), 225);
        assert!(s.contains(&[0.0, 0.0, 0.0]));
        assert!(s.iter().all(|p| p.iter().map(|v| v * v).sum::<f64>() <= 25.0));
        assert_eq!(standard_samples_nonzero(42).len(), 224);
    }

    #[test]
    fn seeded_points_are_reproducible() {
        assert_eq!(random_ball_samples(7, 10, 5.0), random_ball_samples(7, 10, 5.0));
        assert_ne!(random_ball_samples(7, 10, 5.0), random_ball_samples(8, 10, 5.0));
    }
}
