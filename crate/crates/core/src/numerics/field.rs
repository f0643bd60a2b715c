//! Dressed Heisenberg field on the truncated Fock space.
//!
//! Bare operators `a` act on the occupation basis. The dressed operators are
//! `α = e^{-R} a e^{R}`, whose no-particle state is `e^{-R}|0⟩`, and
//!
//! ```text
//! A(x,t) = e^{iHt} e^{-R} A₀(x) e^{R} e^{-iHt},
//! A₀(x)  = V^{-1/2} Σₖ (2Eₖ)^{-1/2} (e^{ipx} aₖ + e^{-ipx} a†ₖ).
//! ```

use nalgebra::DMatrix;

use super::basis::FockBasis;
use super::expm::{expm, expm_multiply_hermitian};
use super::sparse::{matrix_of, SparseOperator};
use crate::algebra::{Signature, TermMap};
use crate::dressing::{DressingResult, ModelSpec};
use crate::error::{Error, Result};
use crate::lattice::ModeSpace;
use crate::C64;

/// Default evolution horizon in lattice spacings.
pub const DEFAULT_HORIZON_SPACINGS: f64 = 6.0;

/// `A₀(x)` of one species as a term map.
pub fn field_terms(space: &ModeSpace, species: usize, site: &[usize]) -> TermMap {
    let lat = space.lattice();
    let x: Vec<f64> = site.iter().map(|&s| s as f64 * lat.spacing()).collect();
    let vol = lat.volume();
    space
        .species_modes(species)
        .flat_map(|m| {
            let px: f64 = space.momentum(m).iter().zip(&x).map(|(p, xi)| p * xi).sum();
            let f = C64::new(0.0, px).exp() / (2.0 * space.energy(m) * vol).sqrt();
            [(Signature::new([], [m]), f), (Signature::new([m], []), f.conj())]
        })
        .collect()
}

pub fn field_operator(space: &ModeSpace, basis: &FockBasis, species: usize, site: &[usize]) -> Result<SparseOperator> {
    matrix_of(&field_terms(space, species, site), basis)
}

/// Everything needed to evaluate dressed Heisenberg fields at one `λ`.
#[derive(Debug, Clone)]
pub struct DressedFrame<'a> {
    space: &'a ModeSpace,
    basis: &'a FockBasis,
    species: usize,
    pub lambda: f64,
    pub horizon: f64,
    h: SparseOperator,
    r: SparseOperator,
    /// `iR`, Hermitian, so that `e^{sR} = e^{-is(iR)}`.
    ir: SparseOperator,
}

impl<'a> DressedFrame<'a> {
    /// `result = None` (or `λ = 0`) gives the undressed frame.
    pub fn new(
        model: &'a ModelSpec,
        basis: &'a FockBasis,
        result: Option<&DressingResult>,
        lambda: f64,
        species: usize,
    ) -> Result<Self> {
        let space = model.space().as_ref();
        let h = matrix_of(&model.hamiltonian_at(lambda), basis)?;
        let r = match result {
            Some(res) if lambda != 0.0 => matrix_of(&res.generator_at(lambda), basis)?,
            _ => SparseOperator::zeros(basis.dim()),
        };
        Ok(Self {
            space,
            basis,
            species,
            lambda,
            horizon: DEFAULT_HORIZON_SPACINGS * space.lattice().spacing(),
            h,
            ir: r.scaled(C64::new(0.0, 1.0)),
            r,
        })
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn hamiltonian(&self) -> &SparseOperator {
        &self.h
    }

    pub fn generator(&self) -> &SparseOperator {
        &self.r
    }

    pub fn basis(&self) -> &FockBasis {
        self.basis
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if t.abs() > self.horizon + 1e-12 {
            Err(Error::TimeHorizon { t, horizon: self.horizon })
        } else {
            Ok(())
        }
    }

    /// `e^{-R}|v⟩`: maps a bare state to its dressed counterpart.
    pub fn dress_state(&self, v: &[C64]) -> Vec<C64> {
        expm_multiply_hermitian(&self.ir, -1.0, v)
    }

    /// `e^{R}|v⟩`, the inverse of [`Self::dress_state`].
    pub fn undress_state(&self, v: &[C64]) -> Vec<C64> {
        expm_multiply_hermitian(&self.ir, 1.0, v)
    }

    /// `e^{-iHt}|v⟩`.
    pub fn evolve(&self, t: f64, v: &[C64]) -> Vec<C64> {
        expm_multiply_hermitian(&self.h, t, v)
    }

    /// `W†|v⟩` with `W = e^{iHt} e^{-R}`.
    pub fn to_bare(&self, t: f64, v: &[C64]) -> Vec<C64> {
        let w = expm_multiply_hermitian(&self.h, t, v);
        expm_multiply_hermitian(&self.ir, 1.0, &w)
    }

    /// `W|v⟩` with `W = e^{iHt} e^{-R}`.
    pub fn from_bare(&self, t: f64, v: &[C64]) -> Vec<C64> {
        let w = expm_multiply_hermitian(&self.ir, -1.0, v);
        expm_multiply_hermitian(&self.h, -t, &w)
    }

    pub fn bare_field(&self, site: &[usize]) -> Result<SparseOperator> {
        field_operator(self.space, self.basis, self.species, site)
    }

    /// `A(x,t)|v⟩`.
    pub fn apply_field(&self, site: &[usize], t: f64, v: &[C64]) -> Result<Vec<C64>> {
        self.check_time(t)?;
        let a0 = self.bare_field(site)?;
        Ok(self.from_bare(t, &a0.matvec(&self.to_bare(t, v))))
    }

    /// `A(x,t)` as a matrix, built from dense exponentials.
    pub fn heisenberg_field(&self, site: &[usize], t: f64) -> Result<SparseOperator> {
        self.check_time(t)?;
        let a0 = field_operator(self.space, self.basis, self.species, site)?.to_dense();
        let u_dress = expm(&(self.r.to_dense() * C64::new(-1.0, 0.0)));
        let u_time = expm(&(self.h.to_dense() * C64::new(0.0, t)));
        let w: DMatrix<C64> = &u_time * &u_dress;
        let a = &w * a0 * w.adjoint();
        Ok(SparseOperator::from_dense(&a, 0.0))
    }
}
