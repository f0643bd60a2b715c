//! Randomised self-test of the operator algebra against its defining
//! identities and against explicit matrices.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{commutator_terms, product_terms, Signature, TermMap};
use crate::error::Result;
use crate::lattice::{FieldSpecies, LatticeSpec, ModeId, ModeSpace};
use crate::numerics::{dense_commutator, dense_max_abs, matrix_of, FockBasis};
use crate::C64;

pub const SELF_TEST_TOLERANCE: f64 = 1e-10;

/// Worst defect seen for each identity.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub instances: usize,
    pub associativity: f64,
    pub jacobi: f64,
    pub dagger: f64,
    pub homomorphism: f64,
}

impl SelfTestReport {
    pub fn worst(&self) -> f64 {
        self.associativity.max(self.jacobi).max(self.dagger).max(self.homomorphism)
    }

    pub fn pass(&self) -> bool {
        self.worst() < SELF_TEST_TOLERANCE
    }
}

/// Up to four monomials over `modes` modes, each with at most two creators
/// and two annihilators.
pub fn random_terms(rng: &mut impl Rng, modes: usize) -> TermMap {
    let mut out = TermMap::new();
    for _ in 0..rng.gen_range(1..=4) {
        let pick = |rng: &mut dyn rand::RngCore, n: usize| -> Vec<ModeId> {
            (0..n).map(|_| ModeId(rng.gen_range(0..modes) as u16)).collect()
        };
        let nc = rng.gen_range(0..=2);
        let na = rng.gen_range(0..=2);
        let sig = Signature::new(pick(rng, nc), pick(rng, na));
        out.add_term(sig, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    out.prune();
    out
}

fn defect(a: &TermMap, b: &TermMap) -> f64 {
    a.difference(b).max_abs()
}

fn small_space() -> Arc<ModeSpace> {
    Arc::new(
        ModeSpace::new(
            LatticeSpec::line(3, std::f64::consts::TAU).expect("valid lattice"),
            vec![FieldSpecies::new("phi", 1.0).expect("valid species")],
        )
        .expect("valid space"),
    )
}

/// Checks associativity, the Jacobi identity, `(PQ)† = Q†P†` and the matrix
/// homomorphism for products and commutators on `instances` random triples.
pub fn algebra_self_test(seed: u64, instances: usize) -> Result<SelfTestReport> {
    let space = small_space();
    let modes = 2.min(space.len());
    let basis = FockBasis::new(modes, 6, 6)?;
    // two quanta below every cutoff: room for the creators of one factor
    let block = basis.interior(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SelfTestReport {
        seed,
        instances,
        ..Default::default()
    };
    for _ in 0..instances {
        let p = random_terms(&mut rng, modes);
        let q = random_terms(&mut rng, modes);
        let r = random_terms(&mut rng, modes);

        let lhs = product_terms(&product_terms(&p, &q), &r);
        let rhs = product_terms(&p, &product_terms(&q, &r));
        rep.associativity = rep.associativity.max(defect(&lhs, &rhs));

        let mut jac = commutator_terms(&p, &commutator_terms(&q, &r));
        jac.add_scaled(&commutator_terms(&q, &commutator_terms(&r, &p)), C64::new(1.0, 0.0));
        jac.add_scaled(&commutator_terms(&r, &commutator_terms(&p, &q)), C64::new(1.0, 0.0));
        rep.jacobi = rep.jacobi.max(jac.max_abs());

        let lhs = product_terms(&p, &q).dagger();
        let rhs = product_terms(&q.dagger(), &p.dagger());
        rep.dagger = rep.dagger.max(defect(&lhs, &rhs));

        let mp = matrix_of(&p, &basis)?.to_dense();
        let mq = matrix_of(&q, &basis)?.to_dense();
        let prod = matrix_of(&product_terms(&p, &q), &basis)?.to_dense() - &mp * &mq;
        let comm = matrix_of(&commutator_terms(&p, &q), &basis)?.to_dense() - dense_commutator(&mp, &mq);
        let restrict = |m: nalgebra::DMatrix<C64>| dense_max_abs(&m.select_rows(&block).select_columns(&block));
        rep.homomorphism = rep.homomorphism.max(restrict(prod)).max(restrict(comm));
    }
    Ok(rep)
}
