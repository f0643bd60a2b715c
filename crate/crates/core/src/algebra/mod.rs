//! Exact algebra of normal-ordered bosonic operator polynomials.

mod series;
mod term;
mod wick;

pub use series::{free_hamiltonian, ModeLabel, OperatorSeries, TermRow};
pub use term::{
    canonicalize, ModeList, NormalTerm, RawTerm, Signature, SignatureDisplay, TermMap, TermType,
    PRUNE_THRESHOLD,
};
pub use wick::{commutator as commutator_terms, product as product_terms};

use std::collections::BTreeMap;

use crate::error::Result;

pub fn normal_order_product(p: &OperatorSeries, q: &OperatorSeries) -> Result<OperatorSeries> {
    p.product(q)
}

pub fn commutator(p: &OperatorSeries, q: &OperatorSeries) -> Result<OperatorSeries> {
    p.commutator(q)
}

pub fn dagger(p: &OperatorSeries) -> OperatorSeries {
    p.dagger()
}

pub fn classify(p: &OperatorSeries) -> BTreeMap<TermType, OperatorSeries> {
    p.classify()
}

/// `[p, H₀]`.
pub fn ad_h0(p: &OperatorSeries) -> OperatorSeries {
    p.ad_h0()
}
