//! Perturbative "dressing" of second-quantized bosonic Hamiltonians on a finite
//! momentum lattice.
//!
//! The crate is organised in layers:
//!
//! * [`lattice`]: momentum lattice, field species and the flattened mode table.
//! * [`algebra`]: normal-ordered polynomials in creation/annihilation operators,
//!   graded as power series in the coupling.
//! * [`dressing`]: the order-by-order construction of the generator `R` and the
//!   transformed Hamiltonian `K = e^R H e^{-R}`.
//! * [`numerics`]: truncated Fock space used as a brute-force oracle.
//! * [`haag`]: eigenstate residuals, momentum commutation and locality scans.
//! * [`config`], [`report`], [`pipeline`]: the command-line workflow.

pub mod algebra;
pub mod config;
pub mod dressing;
pub mod error;
pub mod haag;
pub mod lattice;
pub mod numerics;
pub mod pipeline;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
