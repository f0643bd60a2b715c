//! Power series in the coupling `λ` with term-map coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::term::{Signature, TermMap, TermType};
use super::wick;
use crate::error::{Error, Result};
use crate::lattice::{ModeId, ModeSpace};
use crate::C64;

/// `Σₙ λⁿ Xₙ` for `n = 0..=max_order`. Arithmetic drops every order above
/// `max_order`.
#[derive(Debug, Clone)]
pub struct OperatorSeries {
    space: Arc<ModeSpace>,
    orders: Vec<TermMap>,
}

impl PartialEq for OperatorSeries {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.orders == other.orders
    }
}

fn same_space(a: &Arc<ModeSpace>, b: &Arc<ModeSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl OperatorSeries {
    pub fn zero(space: Arc<ModeSpace>, max_order: usize) -> Self {
        Self {
            space,
            orders: vec![TermMap::new(); max_order + 1],
        }
    }

    /// Series holding `terms` at `order` and nothing else.
    pub fn at_order(space: Arc<ModeSpace>, max_order: usize, order: usize, terms: TermMap) -> Self {
        let mut s = Self::zero(space, max_order);
        if order <= max_order {
            s.orders[order] = terms;
        }
        s
    }

    pub fn from_orders(space: Arc<ModeSpace>, orders: Vec<TermMap>) -> Self {
        assert!(!orders.is_empty(), "a series needs at least order 0");
        Self { space, orders }
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn order(&self, n: usize) -> &TermMap {
        &self.orders[n]
    }

    pub fn set_order(&mut self, n: usize, terms: TermMap) {
        self.orders[n] = terms;
    }

    pub fn orders(&self) -> &[TermMap] {
        &self.orders
    }

    pub fn is_zero(&self) -> bool {
        self.orders.iter().all(TermMap::is_empty)
    }

    pub fn term_count(&self) -> usize {
        self.orders.iter().map(TermMap::len).sum()
    }

    /// Copy truncated (or zero-padded) to `max_order`.
    pub fn with_max_order(&self, max_order: usize) -> Self {
        let mut orders: Vec<TermMap> = self.orders.iter().take(max_order + 1).cloned().collect();
        orders.resize(max_order + 1, TermMap::new());
        Self {
            space: self.space.clone(),
            orders,
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn graded(&self, other: &Self, f: impl Fn(&TermMap, &TermMap) -> TermMap) -> Result<Self> {
        self.check_space(other)?;
        let max = self.max_order().min(other.max_order());
        let mut out = Self::zero(self.space.clone(), max);
        for (i, p) in self.orders.iter().enumerate().take(max + 1) {
            if p.is_empty() {
                continue;
            }
            for (j, q) in other.orders.iter().enumerate().take(max + 1 - i) {
                if q.is_empty() {
                    continue;
                }
                let part = f(p, q);
                out.orders[i + j].add_scaled(&part, C64::new(1.0, 0.0));
            }
        }
        Ok(out)
    }

    /// Normal-ordered `self · other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.graded(other, wick::product)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.graded(other, wick::commutator)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    fn add_scaled(&self, other: &Self, alpha: C64) -> Result<Self> {
        self.check_space(other)?;
        let max = self.max_order().min(other.max_order());
        let mut out = self.with_max_order(max);
        for (n, t) in other.orders.iter().enumerate().take(max + 1) {
            out.orders[n].add_scaled(t, alpha);
        }
        Ok(out)
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            space: self.space.clone(),
            orders: self.orders.iter().map(|t| t.scaled(alpha)).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space.clone(),
            orders: self.orders.iter().map(TermMap::dagger).collect(),
        }
    }

    /// `[self, H₀]` computed from energy sums alone: each term picks up
    /// `ΣE(annihilators) − ΣE(creators)`.
    pub fn ad_h0(&self) -> Self {
        Self {
            space: self.space.clone(),
            orders: self.orders.iter().map(|t| ad_h0_terms(t, &self.space)).collect(),
        }
    }

    /// Sub-series keyed by term type.
    pub fn classify(&self) -> BTreeMap<TermType, OperatorSeries> {
        let mut out: BTreeMap<TermType, OperatorSeries> = BTreeMap::new();
        for (n, t) in self.orders.iter().enumerate() {
            for (sig, &c) in t {
                out.entry(sig.term_type())
                    .or_insert_with(|| Self::zero(self.space.clone(), self.max_order()))
                    .orders[n]
                    .add_term(sig.clone(), c);
            }
        }
        out
    }

    /// Sum `Σₙ λⁿ Xₙ` at a numeric coupling.
    pub fn evaluate(&self, lambda: f64) -> TermMap {
        let mut out = TermMap::new();
        let mut w = 1.0;
        for t in &self.orders {
            if w == 0.0 {
                break;
            }
            out.add_scaled(t, C64::new(w, 0.0));
            w *= lambda;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.orders.iter().map(TermMap::max_abs).fold(0.0, f64::max)
    }

    /// Rows of the JSON term table, in order then signature order.
    pub fn rows(&self) -> Vec<TermRow> {
        self.orders
            .iter()
            .enumerate()
            .flat_map(|(n, t)| t.iter().map(move |(s, c)| TermRow::new(&self.space, n, s, *c)))
            .collect()
    }
}

pub(crate) fn ad_h0_terms(terms: &TermMap, space: &ModeSpace) -> TermMap {
    terms
        .iter()
        .map(|(s, &c)| (s.clone(), c * (-s.energy_difference(space))))
        .collect()
}

/// Free Hamiltonian `Σ E a†a` over every mode of the space.
pub fn free_hamiltonian(space: &ModeSpace) -> TermMap {
    space
        .ids()
        .map(|m| (Signature::new([m], [m]), C64::new(space.energy(m), 0.0)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeLabel {
    pub species: String,
    pub k: Vec<i32>,
}

impl ModeLabel {
    pub fn new(space: &ModeSpace, id: ModeId) -> Self {
        let m = space.mode(id);
        Self {
            species: space.species()[m.species].name.clone(),
            k: m.k.clone(),
        }
    }
}

/// One row of a serialized term table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRow {
    pub order: usize,
    #[serde(rename = "type")]
    pub term_type: [usize; 2],
    pub creators: Vec<ModeLabel>,
    pub annihilators: Vec<ModeLabel>,
    pub re: f64,
    pub im: f64,
}

impl TermRow {
    pub fn new(space: &ModeSpace, order: usize, sig: &Signature, coeff: C64) -> Self {
        let t = sig.term_type();
        Self {
            order,
            term_type: [t.creators, t.annihilators],
            creators: sig.creators.iter().map(|&m| ModeLabel::new(space, m)).collect(),
            annihilators: sig.annihilators.iter().map(|&m| ModeLabel::new(space, m)).collect(),
            re: coeff.re,
            im: coeff.im,
        }
    }
}
