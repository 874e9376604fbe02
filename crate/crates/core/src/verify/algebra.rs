//! Structure constants by least squares and the O(4) suite.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::report::{CheckReport, Item, Params, StructureConstantRow};
use super::tolerances;
use crate::algebra::{commutator, max_abs_diff, metric, ComplexMatrix};
use crate::calculus::{
    standard_samples, CanonicalOperator, Momentum, Monomial, OperatorSet, Picture, SetLabel, GENERATOR_NAMES,
};
use crate::dirac::DiracContext;
use crate::error::{Error, Result};

/// Expansion basis: the ten generators, the three spin matrices and the
/// identity.
pub const BASIS_NAMES: [&str; 14] =
    ["P0", "P1", "P2", "P3", "J23", "J31", "J12", "J01", "J02", "J03", "S23", "S31", "S12", "I"];

const SPIN_OFFSET: usize = 10;

/// A generator by its Lorentz indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    P(usize),
    J(usize, usize),
}

impl Gen {
    /// Generator `g` of [`GENERATOR_NAMES`].
    fn of(g: usize) -> Gen {
        match g {
            0..=3 => Gen::P(g),
            4 => Gen::J(2, 3),
            5 => Gen::J(3, 1),
            6 => Gen::J(1, 2),
            _ => Gen::J(0, g - 6),
        }
    }
}

/// Basis slot and sign of `J_μν`; `None` on the diagonal.
fn j_slot(mu: usize, nu: usize) -> Option<(usize, f64)> {
    match (mu, nu) {
        (0, a) if a > 0 => Some((6 + a, 1.0)),
        (a, 0) if a > 0 => Some((6 + a, -1.0)),
        (2, 3) => Some((4, 1.0)),
        (3, 2) => Some((4, -1.0)),
        (3, 1) => Some((5, 1.0)),
        (1, 3) => Some((5, -1.0)),
        (1, 2) => Some((6, 1.0)),
        (2, 1) => Some((6, -1.0)),
        _ => None,
    }
}

/// Basis slot and sign of `S_ab`, `a, b ∈ 1..=3`.
fn s_slot(a: usize, b: usize) -> Option<(usize, f64)> {
    j_slot(a, b).map(|(slot, sign)| (slot - 4 + SPIN_OFFSET, sign))
}

fn add_j(out: &mut [Complex64], c: Complex64, mu: usize, nu: usize) {
    if let Some((slot, sign)) = j_slot(mu, nu) {
        out[slot] += c * sign;
    }
}

/// Expected expansion of `[G₁, G₂]` for the Poincaré algebra with metric
/// `diag(1, −1, −1, −1)`; `deformed` adds the `+i S_ab` of the
/// boost-boost relation.
fn expected(g1: Gen, g2: Gen, deformed: bool) -> Vec<Complex64> {
    let i = Complex64::i();
    let g = |a: usize, b: usize| metric(a, b);
    let mut out = vec![Complex64::new(0.0, 0.0); BASIS_NAMES.len()];
    match (g1, g2) {
        (Gen::P(_), Gen::P(_)) => {}
        (Gen::P(mu), Gen::J(a, b)) => {
            out[b] += i * g(mu, a);
            out[a] -= i * g(mu, b);
        }
        (Gen::J(..), Gen::P(_)) => {
            return expected(g2, g1, deformed).into_iter().map(|c| -c).collect();
        }
        (Gen::J(mu, nu), Gen::J(rho, sigma)) => {
            add_j(&mut out, i * g(nu, rho), mu, sigma);
            add_j(&mut out, -i * g(mu, rho), nu, sigma);
            add_j(&mut out, -i * g(nu, sigma), mu, rho);
            add_j(&mut out, i * g(mu, sigma), nu, rho);
            if deformed && mu == 0 && rho == 0 {
                if let Some((slot, sign)) = s_slot(nu, sigma) {
                    out[slot] += i * sign;
                }
            }
        }
    }
    out
}

/// Least-squares expansion of `target` over `basis`, using every
/// coefficient entry at every sample as one equation. Returns the
/// coefficients and the residual `‖r‖ / max(‖target‖, mean column norm)`;
/// the second scale keeps rounding noise in a vanishing commutator from
/// reading as an O(1) relative residual.
pub fn expand(target: &CanonicalOperator, basis: &[CanonicalOperator], samples: &[Momentum]) -> Result<(Vec<Complex64>, f64)> {
    let mut monomials: Vec<Monomial> = target.monomials().chain(basis.iter().flat_map(|b| b.monomials())).copied().collect();
    monomials.sort();
    monomials.dedup();
    let d = target.dim();
    let block = d * d;
    let rows = samples.len() * monomials.len() * block;
    let mut a = DMatrix::<Complex64>::zeros(rows, basis.len());
    let mut y = DVector::<Complex64>::zeros(rows);
    let fill = |op: &CanonicalOperator, mut put: Box<dyn FnMut(usize, Complex64) + '_>| {
        let coefficients: Vec<_> = monomials.iter().map(|m| op.coefficient(m)).collect();
        for (s, p) in samples.iter().enumerate() {
            for (k, c) in coefficients.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let values = c.eval(p).to_row_major();
                let base = (s * monomials.len() + k) * block;
                for (e, v) in values.into_iter().enumerate() {
                    put(base + e, v);
                }
            }
        }
    };
    fill(target, Box::new(|r, v| y[r] = v));
    for (col, b) in basis.iter().enumerate() {
        if b.dim() != d {
            return Err(Error::DimensionMismatch { left: d, right: b.dim() });
        }
        fill(b, Box::new(|r, v| a[(r, col)] = v));
    }
    if !a.iter().chain(y.iter()).all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Precondition("non-finite coefficient at a sample momentum".into()));
    }
    let svd = a.clone().svd(true, true);
    let c = svd.solve(&y, 1e-12).map_err(|e| Error::Precondition(format!("least squares failed: {e}")))?;
    let r = &y - &a * &c;
    let column_scale = a.column_iter().map(|c| c.norm()).sum::<f64>() / basis.len().max(1) as f64;
    let scale = y.norm().max(column_scale);
    let residual = if scale > 0.0 { r.norm() / scale } else { r.norm() };
    Ok((c.iter().copied().collect(), residual))
}

/// Which relations are asserted for a family; everything else is tabulated
/// and reported as measured.
///
/// The deformed relations involve the constant spin matrices and so are
/// stated for canonical-picture operators only; in the original picture the
/// deformation term is the conjugated spin `U†S_abU` and q3/q4 boost pairs
/// are measured.
fn asserted(label: Option<SetLabel>, picture: Picture, g1: Gen, g2: Gen) -> bool {
    let rotation = |g: Gen| matches!(g, Gen::J(a, _) if a != 0);
    let boost = |g: Gen| matches!(g, Gen::J(0, _));
    if rotation(g1) && rotation(g2) {
        return true;
    }
    match label {
        Some(SetLabel::Q3 | SetLabel::Q4) => {
            matches!(g1, Gen::P(_)) || matches!(g2, Gen::P(_)) || (boost(g1) && boost(g2) && picture == Picture::Canonical)
        }
        Some(SetLabel::Q1) => boost(g1) && boost(g2),
        _ => false,
    }
}

/// The family label of a set, parsed from the front of its label
/// (`"q3"`, `"maxwell-q2"`, ...).
fn family(set: &OperatorSet) -> Option<SetLabel> {
    let tail = set.label.rsplit('-').next().unwrap_or("");
    tail.parse().ok()
}

/// Generator pairs whose relations are asserted for this set.
pub fn asserted_pairs(set: &OperatorSet) -> Vec<(usize, usize)> {
    let label = family(set);
    let mut out = Vec::new();
    for g1 in 0..10 {
        for g2 in g1 + 1..10 {
            if asserted(label, set.picture, Gen::of(g1), Gen::of(g2)) {
                out.push((g1, g2));
            }
        }
    }
    out
}

/// Commutators of all 45 generator pairs, expanded over the generators,
/// the spin matrices `spins = [S₂₃, S₃₁, S₁₂]` and the identity.
///
/// Asserted: rotation closure for every family; for q3/q4 `[P, P] = 0`,
/// `[P, J]` and the deformed boost-boost relation; for q1 the undeformed
/// boost-boost relation. Each asserted item is the larger of the expansion
/// residual and the worst coefficient deviation.
pub fn check_algebra(set: &OperatorSet, spins: &[CanonicalOperator; 3], seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let samples = standard_samples(seed);
    let label = family(set);
    let deformed = matches!(label, Some(SetLabel::Q3 | SetLabel::Q4));
    let gens: Vec<&CanonicalOperator> = set.generators().into_iter().map(|(_, op)| op).collect();
    let mut basis: Vec<CanonicalOperator> = gens.iter().map(|g| (*g).clone()).collect();
    basis.extend(spins.iter().cloned());
    basis.push(CanonicalOperator::identity(set.dim()));

    let mut items = Vec::new();
    let mut table = Vec::new();
    for g1 in 0..10 {
        for g2 in g1 + 1..10 {
            let c = gens[g1].commutator(gens[g2])?;
            let (coefficients, residual) = expand(&c, &basis, &samples)?;
            let want = expected(Gen::of(g1), Gen::of(g2), deformed);
            let deviation = coefficients.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let name = format!("[{},{}]", GENERATOR_NAMES[g1], GENERATOR_NAMES[g2]);
            let value = residual.max(deviation);
            items.push(if asserted(label, set.picture, Gen::of(g1), Gen::of(g2)) {
                Item::asserted(name, value, tolerances::STRUCTURE)
            } else {
                Item::measured(name, value)
            });
            table.push(StructureConstantRow {
                left: GENERATOR_NAMES[g1].to_string(),
                right: GENERATOR_NAMES[g2].to_string(),
                coefficients: coefficients
                    .iter()
                    .zip(BASIS_NAMES)
                    .filter(|(c, _)| c.norm() > 1e-12)
                    .map(|(c, n)| (n.to_string(), c.re, c.im))
                    .collect(),
                residual,
            });
        }
    }
    let params = Params { seed: Some(seed), tol: Some(tolerances::STRUCTURE), ..Params::default() };
    let name = format!("algebra/{}/{}", set.picture, set.label);
    Ok(CheckReport::new(name, params, items, start.elapsed().as_secs_f64()).with_structure_constants(table))
}

/// `[S₂₃, S₃₁, S₁₂]` of a Dirac context as constant operators.
pub fn dirac_spins(ctx: &DiracContext) -> Result<[CanonicalOperator; 3]> {
    let s = |a, b| ctx.spin(a, b).map(CanonicalOperator::multiplier);
    Ok([s(2, 3)?, s(3, 1)?, s(1, 2)?])
}

/// O(4) relation `[S_kl, S_nr] = i(g_kr S_ln − g_kn S_lr + g_ln S_kr − g_lr S_kn)`
/// with `g = −δ`, as a deviation for one quadruple.
fn o4_deviation(s: &dyn Fn(usize, usize) -> ComplexMatrix, k: usize, l: usize, n: usize, r: usize) -> f64 {
    let g = |a: usize, b: usize| if a == b { -1.0 } else { 0.0 };
    let i = Complex64::i();
    let lhs = commutator(&s(k, l), &s(n, r)).expect("square matrices of equal size");
    let mut rhs = ComplexMatrix::zeros(lhs.dim());
    for (c, (a, b)) in [(g(k, r), (l, n)), (-g(k, n), (l, r)), (g(l, n), (k, r)), (-g(l, r), (k, n))] {
        if c != 0.0 {
            rhs += &s(a, b).scale(i * c);
        }
    }
    max_abs_diff(&lhs, &rhs)
}

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Pointwise checks at `count` sample momenta: the tilded spins commute with
/// `H`, obey the O(4) relations, and conjugate to the constant spins.
/// A companion item records the same commutator for the plain spins, which
/// must not commute with `H`.
pub fn check_o4(ctx: &DiracContext, seed: u64, count: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let mut samples = standard_samples(seed);
    if count == 0 {
        return Err(Error::Precondition("at least one sample momentum is needed".into()));
    }
    if count < samples.len() {
        samples.truncate(count);
    } else if count > samples.len() {
        samples.extend(crate::calculus::random_ball_samples(seed.wrapping_add(1), count - samples.len(), 5.0));
    }
    let tilded: Vec<_> = PAIRS.iter().map(|&(k, l)| ctx.tilded_spin(k, l)).collect::<Result<_>>()?;
    let plain: Vec<_> = PAIRS.iter().map(|&(k, l)| ctx.plain_spin(k, l)).collect::<Result<_>>()?;
    let constant: Vec<_> = PAIRS.iter().map(|&(k, l)| ctx.spin(k, l)).collect::<Result<_>>()?;
    let slot = |k: usize, l: usize| PAIRS.iter().position(|&q| q == (k.min(l), k.max(l)));

    let (mut commute, mut relations, mut conjugation, mut plain_worst) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for p in &samples {
        let h = ctx.hamiltonian().eval(p);
        let hnorm = h.operator_norm();
        let u = ctx.transform().eval(p);
        let values: Vec<ComplexMatrix> = tilded.iter().map(|f| f.eval(p)).collect();
        let s = |k: usize, l: usize| -> ComplexMatrix {
            match slot(k, l) {
                Some(i) if k < l => values[i].clone(),
                Some(i) => values[i].scale(Complex64::new(-1.0, 0.0)),
                None => ComplexMatrix::zeros(h.dim()),
            }
        };
        for (idx, v) in values.iter().enumerate() {
            commute = commute.max(commutator(&h, v)?.operator_norm() / hnorm);
            let conj = &(&u * v) * &u.adjoint();
            conjugation = conjugation.max(max_abs_diff(&conj, &constant[idx].eval(p)));
            plain_worst = plain_worst.max(commutator(&h, &plain[idx].eval(p))?.operator_norm() / hnorm);
        }
        for k in 1..=4 {
            for l in 1..=4 {
                for n in 1..=4 {
                    for r in 1..=4 {
                        if k != l && n != r {
                            relations = relations.max(o4_deviation(&s, k, l, n, r));
                        }
                    }
                }
            }
        }
    }
    let items = vec![
        Item::asserted("commutes_with_hamiltonian", commute, tolerances::POINTWISE),
        Item::asserted("o4_relations", relations, 1e-10),
        Item::asserted("conjugates_to_constant_spin", conjugation, tolerances::POINTWISE),
        Item::asserted_at_least("negative_control/plain_spin_commutator", plain_worst, 0.1),
    ];
    let params = Params { mass: Some(ctx.mass()), seed: Some(seed), tol: Some(tolerances::POINTWISE), ..Params::default() };
    Ok(CheckReport::new("o4", params, items, start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_table_is_antisymmetric() {
        for a in 0..10 {
            for b in 0..10 {
                let x = expected(Gen::of(a), Gen::of(b), true);
                let y = expected(Gen::of(b), Gen::of(a), true);
                for (u, v) in x.iter().zip(&y) {
                    assert!((u + v).norm() < 1e-15, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn rotation_closure_in_this_convention() {
        // [J12, J23] = i J31
        let e = expected(Gen::J(1, 2), Gen::J(2, 3), false);
        assert_eq!(e[5], Complex64::i());
        // [J01, J02] = −i J12 (+ i S12 when deformed)
        let e = expected(Gen::J(0, 1), Gen::J(0, 2), true);
        assert_eq!(e[6], -Complex64::i());
        assert_eq!(e[12], Complex64::i());
    }

    #[test]
    fn expansion_recovers_a_known_combination() {
        let ctx = DiracContext::new(1.0).unwrap();
        let set = ctx.build_set(SetLabel::Q3, Picture::Canonical).unwrap();
        let basis: Vec<CanonicalOperator> = set.generators().into_iter().map(|(_, g)| g.clone()).collect();
        let target = basis[4].scale(Complex64::new(0.5, -2.0)).try_add(&basis[1].scale_real(3.0)).unwrap();
        let (c, r) = expand(&target, &basis, &standard_samples(1)).unwrap();
        assert!(r < 1e-12);
        assert!((c[4] - Complex64::new(0.5, -2.0)).norm() < 1e-10);
        assert!((c[1] - 3.0).norm() < 1e-10);
    }

    #[test]
    fn family_from_label() {
        let ctx = DiracContext::new(1.0).unwrap();
        let set = ctx.build_set(SetLabel::Q4, Picture::Original).unwrap();
        assert_eq!(family(&set), Some(SetLabel::Q4));
    }
}
