use fock_dressing::dressing::{dress, extract_energy_correction, ModelSpec};
use fock_dressing::numerics::{
    build_basis, expm_multiply_hermitian, ground_state, matrix_of, rspt2_shift, unitarity_defect,
    unitary_from_generator, DressedFrame, SparseOperator,
};
use fock_dressing::C64;
use proptest::prelude::*;

#[test]
fn ground_energy_matches_vacuum_shift() {
    let model = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
    let r = dress(&model).unwrap();
    let basis = build_basis(&model, 8, 8).unwrap();
    let lambda = 0.05;
    let h = matrix_of(&model.hamiltonian_at(lambda), &basis).unwrap();
    let gs = ground_state(&h).unwrap();
    assert!(!gs.degenerate);
    assert!(gs.residual < 1e-10);
    let predicted = lambda * lambda * r.vacuum_energy_shift();
    assert!((gs.energy - predicted).abs() < 1e-6, "{} vs {}", gs.energy, predicted);
}

#[test]
fn zero_operator_is_degenerate() {
    let gs = ground_state(&SparseOperator::zeros(4)).unwrap();
    assert!(gs.degenerate);
    assert_eq!(gs.energy, 0.0);
}

#[test]
fn symbolic_mass_shift_matches_perturbation_theory() {
    let model = ModelSpec::scalar_yukawa(3, 1.0, 2).unwrap();
    let r = dress(&model).unwrap();
    let basis = build_basis(&model, 4, 4).unwrap();
    for s in 0..2 {
        let d1 = extract_energy_correction(&r, s, &[0]).unwrap();
        let d2 = rspt2_shift(&model, &basis, s, &[0]).unwrap();
        assert!((d1 - d2).abs() < 1e-10, "species {s}: {d1} vs {d2}");
    }
}

#[test]
fn generator_exponential_is_unitary() {
    let model = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
    let r = dress(&model).unwrap();
    let basis = build_basis(&model, 4, 4).unwrap();
    let gen = matrix_of(&r.generator_at(0.3), &basis).unwrap();
    assert!(gen.anti_hermiticity_defect() < 1e-12);
    let u = unitary_from_generator(&gen).unwrap();
    assert!(unitarity_defect(&u) < 1e-12);
}

#[test]
fn dressing_is_identity_at_zero_coupling() {
    let model = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
    let r = dress(&model).unwrap();
    let basis = build_basis(&model, 5, 5).unwrap();
    let frame = DressedFrame::new(&model, &basis, Some(&r), 0.0, 0).unwrap();
    let mut v = vec![C64::new(0.0, 0.0); basis.dim()];
    v[basis.vacuum()] = C64::new(1.0, 0.0);
    let w = frame.dress_state(&v);
    let err = w.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-15);
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn krylov_evolution_preserves_norm(t in -3.0f64..3.0, seed in prop::collection::vec(-1.0f64..1.0, 20)) {
        let model = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
        let basis = build_basis(&model, 3, 3).unwrap();
        let h = matrix_of(&model.hamiltonian_at(0.2), &basis).unwrap();
        let v: Vec<C64> = (0..basis.dim()).map(|i| C64::new(seed[i % 20], seed[(i * 7 + 3) % 20])).collect();
        let w = expm_multiply_hermitian(&h, t, &v);
        prop_assert!((vec_norm(&w) - vec_norm(&v)).abs() < 1e-11 * vec_norm(&v).max(1.0));
        let back = expm_multiply_hermitian(&h, -t, &w);
        let err = back.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
    }
}
