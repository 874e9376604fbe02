use fwlab::algebra::{c64, max_abs_diff};
use fwlab::calculus::{conjugate, standard_samples, CanonicalOperator, Picture, SetLabel};
use fwlab::dirac::DiracContext;

fn ctx() -> DiracContext {
    DiracContext::new(1.0).unwrap()
}

#[test]
fn transform_diagonalizes_hamiltonian() {
    let c = ctx();
    for p in standard_samples(42) {
        let u = c.transform().eval(&p);
        let lhs = &(&u * &c.hamiltonian().eval(&p)) * &u.adjoint();
        let rhs = c.canonical_hamiltonian().eval(&p);
        let e = c.energy_scalar().eval(&p);
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-12 * e, "{p:?}");
        assert!(u.unitary_defect() <= 1e-12);
    }
}

#[test]
fn conjugated_boosts_match_direct_canonical_forms() {
    let c = ctx();
    let samples = standard_samples(42);
    for label in [SetLabel::Q3, SetLabel::Q4] {
        for a in 1..=3 {
            let conj = conjugate(c.transform(), &c.original_boost(label, a).unwrap()).unwrap();
            let direct = c.canonical_boost_direct(label, a).unwrap();
            let d = conj.max_distance(&direct, &samples);
            assert!(d <= 1e-9, "{label} J0{a}: {d}");
        }
    }
}

#[test]
fn first_two_families_coincide_on_boosts() {
    let c = ctx();
    let samples = standard_samples(7);
    for a in 1..=3 {
        let q1 = c.original_boost(SetLabel::Q1, a).unwrap();
        let q2 = c.original_boost(SetLabel::Q2, a).unwrap();
        assert!(q1.max_distance(&q2, &samples) <= 1e-12);
    }
}

#[test]
fn conjugated_position_is_plain_position() {
    let c = ctx();
    let samples = standard_samples(9);
    for a in 1..=3 {
        let conj = conjugate(c.transform(), &c.x_tilde(a).unwrap()).unwrap();
        let x = CanonicalOperator::position(4, a - 1);
        assert!(conj.max_distance(&x, &samples) <= 1e-12);
    }
}

#[test]
fn deformed_boost_commutator_in_canonical_third_family() {
    let c = ctx();
    let set = c.build_set(SetLabel::Q3, Picture::Canonical).unwrap();
    let comm = set.boost[0].commutator(&set.boost[1]).unwrap();
    let s12 = CanonicalOperator::constant(c.gammas().spin_matrix(1, 2).unwrap());
    let expect = set.rotation[2].try_sub(&s12).unwrap().scale(c64(0.0, -1.0));
    let samples = standard_samples(3);
    assert!(comm.max_distance(&expect, &samples) <= 1e-10);
}
