use fwlab::algebra::{anticommutator, c64, max_abs_diff, metric, ComplexMatrix, GammaSet, Representation};
use fwlab::calculus::{CanonicalOperator, Momentum};
use fwlab::dirac::DiracContext;
use fwlab::grid::pairwise_sum;
use fwlab::verify::{mixing, par_map, rapidity, CheckReport, Item, Params};
use num_complex::Complex64;
use proptest::prelude::*;

fn momentum() -> impl Strategy<Value = Momentum> {
    prop::array::uniform3(-5.0f64..5.0)
}

fn representation() -> impl Strategy<Value = Representation> {
    prop_oneof![Just(Representation::DiracPauli), Just(Representation::Weyl)]
}

fn combination(gammas: &GammaSet, c: &[f64; 4]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for (mu, &w) in c.iter().enumerate() {
        out += &(gammas.gamma(mu).unwrap() * w);
    }
    out
}

fn minkowski(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (0..4).map(|mu| metric(mu, mu) * a[mu] * b[mu]).sum()
}

fn jacobi_pool(ctx: &DiracContext) -> Vec<CanonicalOperator> {
    let mut pool = Vec::new();
    for a in 0..3 {
        pool.push(CanonicalOperator::momentum(4, a));
        pool.push(CanonicalOperator::position(4, a));
    }
    pool.push(CanonicalOperator::multiplier(ctx.hamiltonian().clone()));
    pool.extend(ctx.rotations().unwrap());
    pool
}

const PROBE: [Momentum; 4] = [[0.0, 0.0, 0.0], [0.7, -0.7, 2.0], [-2.0, 0.7, 0.0], [1.3, 0.4, -0.9]];

proptest! {
    #[test]
    fn slashed_vectors_anticommute_to_the_minkowski_product(
        r in representation(),
        a in prop::array::uniform4(-3.0f64..3.0),
        b in prop::array::uniform4(-3.0f64..3.0),
    ) {
        let g = GammaSet::new(r);
        let ac = anticommutator(&combination(&g, &a), &combination(&g, &b)).unwrap();
        let want = ComplexMatrix::identity(4).scale_real(2.0 * minkowski(&a, &b));
        prop_assert!(max_abs_diff(&ac, &want) <= 1e-13);
    }

    #[test]
    fn transform_diagonalizes_at_any_momentum(p in momentum(), m in 0.1f64..3.0) {
        let ctx = DiracContext::new(m).unwrap();
        let u = ctx.transform().eval(&p);
        let lhs = &(&u * &ctx.hamiltonian().eval(&p)) * &u.adjoint();
        let e = ctx.energy_scalar().eval(&p);
        prop_assert!(max_abs_diff(&lhs, &ctx.canonical_hamiltonian().eval(&p)) <= 1e-12 * e);
        prop_assert!(u.unitary_defect() <= 1e-12);
    }

    #[test]
    fn hamiltonian_spectrum_is_plus_minus_energy(p in momentum(), m in 0.1f64..3.0) {
        let ctx = DiracContext::new(m).unwrap();
        let mut ev = ctx.hamiltonian().eval(&p).hermitian_eigenvalues().unwrap();
        ev.sort_by(f64::total_cmp);
        let e = ctx.energy_scalar().eval(&p);
        for (x, want) in ev.iter().zip([-e, -e, e, e]) {
            prop_assert!((x - want).abs() <= 1e-12 * e);
        }
    }

    #[test]
    fn mixing_conserves_the_invariant_mass(e0 in 1.0f64..5.0, p0 in -0.9f64..0.9, theta in -1.0f64..1.0) {
        let (e, p) = mixing(e0, p0, theta);
        prop_assert!(((e * e - p * p) - (e0 * e0 - p0 * p0)).abs() <= 1e-12 * e0 * e0 * (2.0 * theta.abs()).exp());
        let (back_e, back_p) = mixing(e, p, -theta);
        prop_assert!((back_e - e0).abs() <= 1e-12 * e.abs().max(1.0) && (back_p - p0).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn rapidity_inverts_tanh(v in -0.999f64..0.999) {
        let theta = rapidity(v).unwrap();
        prop_assert!(theta >= 0.0);
        prop_assert!((theta.tanh() - v.abs()).abs() <= 1e-15);
    }

    #[test]
    fn superluminal_velocities_are_rejected(v in 1.0f64..10.0, sign in prop::bool::ANY) {
        let v = if sign { v } else { -v };
        prop_assert!(rapidity(v).is_err());
    }

    #[test]
    fn report_passes_exactly_when_every_assertion_holds(
        rows in prop::collection::vec((0.0f64..1.0, prop::option::of(0.0f64..1.0), prop::bool::ANY), 0..12),
    ) {
        let items: Vec<Item> = rows
            .iter()
            .enumerate()
            .map(|(k, &(r, bound, lower))| match (bound, lower) {
                (None, _) => Item::measured(format!("m{k}"), r),
                (Some(b), false) => Item::asserted(format!("a{k}"), r, b),
                (Some(b), true) => Item::asserted_at_least(format!("c{k}"), r, b),
            })
            .collect();
        let want = rows.iter().all(|&(r, bound, lower)| match (bound, lower) {
            (None, _) => true,
            (Some(b), false) => r <= b,
            (Some(b), true) => r >= b,
        });
        let report = CheckReport::new("prop", Params::default(), items, 0.0);
        prop_assert_eq!(report.pass, want);
        prop_assert_eq!(report.failures().is_empty(), want);
    }

    #[test]
    fn par_map_ignores_the_thread_count(values in prop::collection::vec(-1e3f64..1e3, 0..200), threads in 1usize..6) {
        let f = |x: &f64| (x.sin() * 1e3).mul_add(*x, 0.1);
        prop_assert_eq!(par_map(&values, threads, f), par_map(&values, 1, f));
    }

    #[test]
    fn pairwise_sum_depends_only_on_the_values(values in prop::collection::vec(-1e6f64..1e6, 0..500)) {
        let z: Vec<Complex64> = values.iter().map(|&x| c64(x, -0.5 * x)).collect();
        let first = pairwise_sum(&z);
        prop_assert_eq!(first.re.to_bits(), pairwise_sum(&z.clone()).re.to_bits());
        let naive: f64 = values.iter().sum();
        prop_assert!((first.re - naive).abs() <= 1e-9 * values.iter().map(|x| x.abs()).sum::<f64>().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_is_antisymmetric_and_satisfies_jacobi(i in 0usize..10, j in 0usize..10, k in 0usize..10) {
        let ctx = DiracContext::new(1.0).unwrap();
        let pool = jacobi_pool(&ctx);
        let (a, b, c) = (&pool[i], &pool[j], &pool[k]);
        // Intermediate products of three position-linear operators exceed the supported degree.
        prop_assume!(a.x_degree() + b.x_degree() + c.x_degree() <= 2);
        let ab = a.commutator(b).unwrap();
        let ba = b.commutator(a).unwrap();
        prop_assert!(ab.try_add(&ba).unwrap().max_abs(&PROBE) <= 1e-12);
        let jacobi = a
            .commutator(&b.commutator(c).unwrap())
            .unwrap()
            .try_add(&b.commutator(&c.commutator(a).unwrap()).unwrap())
            .unwrap()
            .try_add(&c.commutator(&ab).unwrap())
            .unwrap();
        prop_assert!(jacobi.max_abs(&PROBE) <= 1e-10);
    }
}
