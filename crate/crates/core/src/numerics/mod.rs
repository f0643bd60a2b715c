//! Truncated Fock space used as a brute-force oracle for the symbolic layer.

pub mod basis;
pub mod eigen;
pub mod expm;
pub mod field;
pub mod sparse;

pub use basis::{basis_dimension, FockBasis, DEFAULT_DIMENSION_LIMIT};
pub use eigen::{ground_state, GroundState};
pub use expm::{expm, expm_multiply, expm_multiply_hermitian, unitarity_defect};
pub use field::{field_operator, field_terms, DressedFrame};
pub use sparse::{dense_commutator, dense_max_abs, matrix_of, spectral_norm, SparseOperator};

use nalgebra::DMatrix;

use crate::algebra::free_hamiltonian;
use crate::dressing::ModelSpec;
use crate::error::{Error, Result};
use crate::C64;

pub const ANTI_HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const UNITARITY_TOLERANCE: f64 = 1e-8;

/// Basis over all modes of `model`.
pub fn build_basis(model: &ModelSpec, per_mode_cutoff: usize, total_cutoff: usize) -> Result<FockBasis> {
    if per_mode_cutoff < 1 || total_cutoff < 1 {
        return Err(Error::InvalidCutoff(format!(
            "cutoffs must be at least 1, got per-mode {per_mode_cutoff} and total {total_cutoff}"
        )));
    }
    FockBasis::new(model.space().len(), per_mode_cutoff, total_cutoff)
}

/// `e^R`, after checking that `R` is anti-Hermitian and the result unitary.
pub fn unitary_from_generator(r: &SparseOperator) -> Result<DMatrix<C64>> {
    let deviation = r.anti_hermiticity_defect();
    if deviation > ANTI_HERMITIAN_TOLERANCE {
        return Err(Error::NotAntiHermitian { deviation });
    }
    let u = expm(&r.to_dense());
    let deviation = unitarity_defect(&u);
    if deviation > UNITARITY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}

/// `e^R H e^{-R}` as a dense matrix.
pub fn conjugate_numeric(r: &SparseOperator, h: &SparseOperator) -> Result<DMatrix<C64>> {
    let u = unitary_from_generator(r)?;
    Ok(&u * h.to_dense() * u.adjoint())
}

/// Second-order Rayleigh–Schrödinger shift of the one-particle level `k`
/// relative to the vacuum, for unit coupling.
pub fn rspt2_shift(model: &ModelSpec, basis: &FockBasis, species: usize, k: &[i32]) -> Result<f64> {
    let space = model.space();
    let id = space.mode_id(species, k).ok_or_else(|| Error::InvalidMode {
        entry: 0,
        reason: format!("species {species} wavevector {k:?} is not on the lattice"),
    })?;
    let one = basis
        .one_particle(id)
        .ok_or_else(|| Error::InvalidCutoff("one-particle state lies outside the basis".into()))?;
    let v = matrix_of(model.interaction(), basis)?;
    let e0 = matrix_of(&free_hamiltonian(space), basis)?.diagonal();
    let level = |state: usize| -> Result<f64> {
        let e = e0[state].re;
        let mut sum = 0.0;
        // V is Hermitian, so row `state` holds the conjugated column
        for (s, vs) in v.row(state) {
            if s == state {
                continue;
            }
            let de = e - e0[s].re;
            if de.abs() < 1e-8 {
                return Err(Error::DegenerateIntermediate { state: basis.label(s) });
            }
            sum += vs.norm_sqr() / de;
        }
        Ok(sum)
    };
    Ok(level(one)? - level(basis.vacuum())?)
}
