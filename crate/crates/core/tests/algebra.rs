use std::sync::Arc;

use fock_dressing::algebra::{commutator_terms, product_terms, OperatorSeries, Signature, TermMap};
use fock_dressing::dressing::{dress, solve_generator, ModelSpec, Policy};
use fock_dressing::lattice::{FieldSpecies, LatticeSpec, ModeId, ModeSpace};
use fock_dressing::numerics::{matrix_of, FockBasis};
use fock_dressing::C64;
use proptest::prelude::*;

fn space(sites: usize) -> Arc<ModeSpace> {
    Arc::new(
        ModeSpace::new(
            LatticeSpec::line(sites, std::f64::consts::TAU).unwrap(),
            vec![FieldSpecies::new("phi", 1.0).unwrap()],
        )
        .unwrap(),
    )
}

fn m(i: u16) -> ModeId {
    ModeId(i)
}

fn op(c: &[u16], a: &[u16], z: f64) -> TermMap {
    TermMap::single(Signature::new(c.iter().map(|&i| m(i)), a.iter().map(|&i| m(i))), C64::new(z, 0.0))
}

fn close(a: &TermMap, b: &TermMap) -> f64 {
    a.difference(b).max_abs()
}

#[test]
fn annihilator_times_creator() {
    let lhs = product_terms(&op(&[], &[0], 1.0), &op(&[0], &[], 1.0));
    let mut rhs = op(&[0], &[0], 1.0);
    rhs.add_term(Signature::identity(), C64::new(1.0, 0.0));
    assert_eq!(close(&lhs, &rhs), 0.0);
}

#[test]
fn canonical_commutators() {
    assert_eq!(close(&commutator_terms(&op(&[], &[0], 1.0), &op(&[0], &[], 1.0)), &TermMap::identity(C64::new(1.0, 0.0))), 0.0);
    assert!(commutator_terms(&op(&[], &[0], 1.0), &op(&[1], &[], 1.0)).is_empty());
    assert!(commutator_terms(&op(&[0], &[], 1.0), &op(&[1], &[], 1.0)).is_empty());
    let number = op(&[0], &[0], 1.0);
    assert_eq!(close(&commutator_terms(&number, &op(&[0], &[], 1.0)), &op(&[0], &[], 1.0)), 0.0);
    assert_eq!(close(&commutator_terms(&number, &op(&[], &[0], 1.0)), &op(&[], &[0], -1.0)), 0.0);
}

#[test]
fn double_contraction() {
    // a a a† a† = a†a†aa + 4 a†a + 2
    let lhs = product_terms(&op(&[], &[0, 0], 1.0), &op(&[0, 0], &[], 1.0));
    let mut rhs = op(&[0, 0], &[0, 0], 1.0);
    rhs.add_term(Signature::new([m(0)], [m(0)]), C64::new(4.0, 0.0));
    rhs.add_term(Signature::identity(), C64::new(2.0, 0.0));
    assert_eq!(close(&lhs, &rhs), 0.0);
}

#[test]
fn term_types() {
    let cases = [
        (op(&[0], &[], 1.0), true),
        (op(&[0, 1], &[], 1.0), true),
        (op(&[], &[0, 1, 2], 1.0), true),
        (op(&[0, 1], &[2], 1.0), true),
        (op(&[0], &[1, 2], 1.0), true),
        (op(&[0], &[1], 1.0), false),
        (op(&[0, 1], &[1, 2], 1.0), false),
        (op(&[0, 1, 2], &[0, 1], 1.0), false),
        (TermMap::identity(C64::new(1.0, 0.0)), false),
    ];
    for (t, bad) in cases {
        let sig = t.signatures().next().unwrap();
        assert_eq!(sig.term_type().is_bad(), bad, "{:?}", sig.term_type());
    }
}

#[test]
fn ad_h0_is_commutator_with_free_part() {
    // [t, H0] = -(E_c - E_a) t
    let s = space(3);
    let t = op(&[0, 1], &[2], 1.0);
    let e = s.energy(m(0)) + s.energy(m(1)) - s.energy(m(2));
    let got = OperatorSeries::at_order(s.clone(), 1, 1, t.clone()).ad_h0();
    assert!(close(got.order(1), &t.scaled(C64::new(-e, 0.0))) < 1e-15);
}

#[test]
fn generator_cancels_bad_part() {
    let s = space(3);
    let mut bad = op(&[0, 1], &[2], 0.3);
    bad.add_scaled(&op(&[2], &[0, 1], 0.3), C64::new(1.0, 0.0));
    bad.add_scaled(&op(&[0, 1, 2], &[], 0.7), C64::new(1.0, 0.0));
    bad.add_scaled(&op(&[], &[0, 1, 2], 0.7), C64::new(1.0, 0.0));
    let r = solve_generator(&bad, &s).unwrap();
    assert!(r.anti_hermiticity_defect() < 1e-15);
    let back = OperatorSeries::at_order(s, 1, 1, r).ad_h0();
    assert!(back.order(1).sum(&bad).max_abs() < 1e-14);
}

#[test]
fn linear_source_is_displaced_exactly() {
    // H = E a†a + λ c (a + a†): vacuum shift −c²/E, nothing else survives
    let s = space(1);
    let e = s.energy(m(0));
    let c = 0.7;
    let mut v = op(&[0], &[], c);
    v.add_scaled(&op(&[], &[0], c), C64::new(1.0, 0.0));
    let model = ModelSpec::new(s.clone(), v, 1.0, 3, Policy::Shirokov).unwrap();
    let r = dress(&model).unwrap();
    assert!((r.vacuum_energy_shift() + c * c / e).abs() < 1e-14);
    assert!(r.k.order(1).is_empty());
    assert!(r.k.order(3).max_abs() < 1e-14);
    assert!(r.residual_bad_terms(1e-14).is_empty());
}

#[test]
fn resonant_term_under_weidlich_is_rejected() {
    let s = space(3);
    let model = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap().with_policy(Policy::Weidlich);
    assert_eq!(model.space().len(), s.len());
    let err = dress(&model).unwrap_err().to_string();
    assert!(err.contains("weidlich"), "{err}");
}

fn term_strategy(modes: u16) -> impl Strategy<Value = TermMap> {
    let mono = (
        prop::collection::vec(0..modes, 0..=2),
        prop::collection::vec(0..modes, 0..=2),
        -1.0f64..1.0,
        -1.0f64..1.0,
    );
    prop::collection::vec(mono, 1..5).prop_map(|ms| {
        ms.into_iter()
            .map(|(c, a, re, im)| (Signature::new(c.into_iter().map(ModeId), a.into_iter().map(ModeId)), C64::new(re, im)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutator_is_antisymmetric(p in term_strategy(3), q in term_strategy(3)) {
        let pq = commutator_terms(&p, &q);
        let qp = commutator_terms(&q, &p);
        prop_assert!(pq.sum(&qp).max_abs() < 1e-12);
    }

    #[test]
    fn product_is_associative(p in term_strategy(2), q in term_strategy(2), r in term_strategy(2)) {
        let left = product_terms(&product_terms(&p, &q), &r);
        let right = product_terms(&p, &product_terms(&q, &r));
        prop_assert!(close(&left, &right) < 1e-11);
    }

    #[test]
    fn jacobi_identity(p in term_strategy(2), q in term_strategy(2), r in term_strategy(2)) {
        let a = commutator_terms(&p, &commutator_terms(&q, &r));
        let b = commutator_terms(&q, &commutator_terms(&r, &p));
        let c = commutator_terms(&r, &commutator_terms(&p, &q));
        prop_assert!(a.sum(&b).sum(&c).max_abs() < 1e-11);
    }

    #[test]
    fn dagger_reverses_products(p in term_strategy(3), q in term_strategy(3)) {
        let lhs = product_terms(&p, &q).dagger();
        let rhs = product_terms(&q.dagger(), &p.dagger());
        prop_assert!(close(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn ad_h0_is_a_derivation(p in term_strategy(3), q in term_strategy(3)) {
        let s = space(3);
        let ad = |t: &TermMap| OperatorSeries::at_order(s.clone(), 1, 1, t.clone()).ad_h0().order(1).clone();
        let lhs = ad(&product_terms(&p, &q));
        let rhs = product_terms(&ad(&p), &q).sum(&product_terms(&p, &ad(&q)));
        prop_assert!(close(&lhs, &rhs) < 1e-11);
    }

    #[test]
    fn matrices_respect_products(p in term_strategy(2), q in term_strategy(2)) {
        // exact on states with at least two quanta of headroom
        let b = FockBasis::new(2, 6, 6).unwrap();
        let inner = b.interior(2);
        let pq = matrix_of(&product_terms(&p, &q), &b).unwrap().to_dense();
        let mp = matrix_of(&p, &b).unwrap().to_dense();
        let mq = matrix_of(&q, &b).unwrap().to_dense();
        let d = (pq - mp * mq).select_rows(&inner).select_columns(&inner);
        prop_assert!(d.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-11);
    }

    #[test]
    fn generator_is_anti_hermitian(p in term_strategy(3)) {
        let s = space(3);
        let h = p.sum(&p.dagger());
        let bad = h.filter(|sig| sig.term_type().is_bad() && sig.energy_difference(&s).abs() > 1e-8);
        let r = solve_generator(&bad, &s).unwrap();
        prop_assert!(r.anti_hermiticity_defect() < 1e-12);
    }
}
