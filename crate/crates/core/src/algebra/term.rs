//! Normal-ordered monomials and canonical term maps.

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice::{ModeId, ModeIndex, ModeSpace};
use crate::C64;

/// Coefficients below this magnitude are dropped after every canonicalization.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

pub type ModeList = SmallVec<[ModeId; 6]>;

/// Type `(m, n)` of a monomial: `m` creators followed by `n` annihilators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermType {
    pub creators: usize,
    pub annihilators: usize,
}

impl TermType {
    pub const fn new(creators: usize, annihilators: usize) -> Self {
        Self {
            creators,
            annihilators,
        }
    }

    /// Terms that spoil the no-particle state or the one-particle states as
    /// eigenstates: `(m,0)`, `(m,1)` with `m >= 2`, their conjugates, and the
    /// linear terms.
    pub fn is_bad(self) -> bool {
        let (m, n) = (self.creators, self.annihilators);
        (n <= 1 && m >= 2) || (m <= 1 && n >= 2) || (m + n == 1)
    }

    pub fn is_good(self) -> bool {
        !self.is_bad()
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.annihilators, self.creators)
    }
}

impl fmt::Display for TermType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.creators, self.annihilators)
    }
}

/// Key of a normal-ordered monomial `a†…a† a…a`; both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub creators: ModeList,
    pub annihilators: ModeList,
}

impl Signature {
    pub fn new(creators: impl IntoIterator<Item = ModeId>, annihilators: impl IntoIterator<Item = ModeId>) -> Self {
        let mut creators: ModeList = creators.into_iter().collect();
        let mut annihilators: ModeList = annihilators.into_iter().collect();
        creators.sort_unstable();
        annihilators.sort_unstable();
        Self {
            creators,
            annihilators,
        }
    }

    pub fn identity() -> Self {
        Self {
            creators: ModeList::new(),
            annihilators: ModeList::new(),
        }
    }

    pub fn term_type(&self) -> TermType {
        TermType::new(self.creators.len(), self.annihilators.len())
    }

    pub fn dagger(&self) -> Self {
        Self {
            creators: self.annihilators.clone(),
            annihilators: self.creators.clone(),
        }
    }

    /// `ΣE(creators) − ΣE(annihilators)`.
    pub fn energy_difference(&self, space: &ModeSpace) -> f64 {
        let up: f64 = self.creators.iter().map(|&m| space.energy(m)).sum();
        let down: f64 = self.annihilators.iter().map(|&m| space.energy(m)).sum();
        up - down
    }

    /// Net integer wavevector carried by the monomial, component-wise.
    pub fn wavevector_transfer(&self, space: &ModeSpace) -> Vec<i32> {
        let dim = space.lattice().dim;
        let mut net = vec![0i32; dim];
        for &m in &self.creators {
            for (n, k) in net.iter_mut().zip(&space.mode(m).k) {
                *n += k;
            }
        }
        for &m in &self.annihilators {
            for (n, k) in net.iter_mut().zip(&space.mode(m).k) {
                *n -= k;
            }
        }
        net
    }

    pub fn max_mode(&self) -> Option<ModeId> {
        self.creators
            .iter()
            .chain(self.annihilators.iter())
            .copied()
            .max()
    }

    pub fn display<'a>(&'a self, space: &'a ModeSpace) -> SignatureDisplay<'a> {
        SignatureDisplay { sig: self, space }
    }
}

pub struct SignatureDisplay<'a> {
    sig: &'a Signature,
    space: &'a ModeSpace,
}

impl fmt::Display for SignatureDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.creators.is_empty() && self.sig.annihilators.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for &m in &self.sig.creators {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "a†{}", self.space.label(m))?;
        }
        for &m in &self.sig.annihilators {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "a{}", self.space.label(m))?;
        }
        Ok(())
    }
}

/// A monomial with its collected coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalTerm {
    pub signature: Signature,
    pub coeff: C64,
}

impl NormalTerm {
    pub fn term_type(&self) -> TermType {
        self.signature.term_type()
    }
}

/// A raw (not yet canonical) monomial expressed with user-facing mode indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub creators: Vec<ModeIndex>,
    pub annihilators: Vec<ModeIndex>,
    pub coeff: C64,
}

impl RawTerm {
    pub fn new(creators: Vec<ModeIndex>, annihilators: Vec<ModeIndex>, coeff: C64) -> Self {
        Self {
            creators,
            annihilators,
            coeff,
        }
    }
}

/// Canonical map from signature to coefficient, iterated in signature order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermMap {
    terms: BTreeMap<Signature, C64>,
}

impl TermMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(coeff: C64) -> Self {
        let mut t = Self::new();
        t.add_term(Signature::identity(), coeff);
        t.prune();
        t
    }

    pub fn single(signature: Signature, coeff: C64) -> Self {
        let mut t = Self::new();
        t.add_term(signature, coeff);
        t.prune();
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, sig: &Signature) -> C64 {
        self.terms.get(sig).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Signature, C64> {
        self.terms.iter()
    }

    pub fn signatures(&self) -> impl Iterator<Item = &Signature> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = NormalTerm> + '_ {
        self.terms.iter().map(|(s, &c)| NormalTerm {
            signature: s.clone(),
            coeff: c,
        })
    }

    /// Accumulates without pruning; callers prune once at the end.
    pub fn add_term(&mut self, sig: Signature, coeff: C64) {
        match self.terms.entry(sig) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => *e.get_mut() += coeff,
        }
    }

    pub fn remove(&mut self, sig: &Signature) -> Option<C64> {
        self.terms.remove(sig)
    }

    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn add_scaled(&mut self, other: &TermMap, alpha: C64) {
        for (s, &c) in &other.terms {
            self.add_term(s.clone(), c * alpha);
        }
        self.prune();
    }

    pub fn scaled(&self, alpha: C64) -> TermMap {
        let mut out = TermMap {
            terms: self.terms.iter().map(|(s, &c)| (s.clone(), c * alpha)).collect(),
        };
        out.prune();
        out
    }

    pub fn sum(&self, other: &TermMap) -> TermMap {
        let mut out = self.clone();
        out.add_scaled(other, C64::new(1.0, 0.0));
        out
    }

    pub fn difference(&self, other: &TermMap) -> TermMap {
        let mut out = self.clone();
        out.add_scaled(other, C64::new(-1.0, 0.0));
        out
    }

    pub fn dagger(&self) -> TermMap {
        TermMap {
            terms: self.terms.iter().map(|(s, c)| (s.dagger(), c.conj())).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Signature) -> bool) -> TermMap {
        TermMap {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, &c)| (s.clone(), c))
                .collect(),
        }
    }

    pub fn types(&self) -> std::collections::BTreeSet<TermType> {
        self.terms.keys().map(Signature::term_type).collect()
    }

    /// Maximum of `|c(T) − c(T†)*|` over all terms.
    pub fn hermiticity_defect(&self) -> f64 {
        self.difference(&self.dagger()).max_abs()
    }

    /// Maximum of `|c(T) + c(T†)*|` over all terms.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        self.sum(&self.dagger()).max_abs()
    }

    /// Largest mode number referenced, if any.
    pub fn max_mode(&self) -> Option<ModeId> {
        self.terms.keys().filter_map(Signature::max_mode).max()
    }
}

impl FromIterator<(Signature, C64)> for TermMap {
    fn from_iter<I: IntoIterator<Item = (Signature, C64)>>(iter: I) -> Self {
        let mut t = TermMap::new();
        for (s, c) in iter {
            t.add_term(s, c);
        }
        t.prune();
        t
    }
}

impl<'a> IntoIterator for &'a TermMap {
    type Item = (&'a Signature, &'a C64);
    type IntoIter = btree_map::Iter<'a, Signature, C64>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Sorts, collects and prunes a list of raw monomials.
///
/// Creators commute among themselves, as do annihilators, so sorting each list
/// is exact; the input is assumed to already be written creators-first.
pub fn canonicalize(space: &ModeSpace, raw: &[RawTerm]) -> Result<TermMap> {
    let mut out = TermMap::new();
    for (entry, term) in raw.iter().enumerate() {
        let lookup = |m: &ModeIndex| {
            space.id_of(m).ok_or_else(|| Error::InvalidMode {
                entry,
                reason: format!("species {} wavevector {:?} is not on the lattice", m.species, m.k),
            })
        };
        let creators = term.creators.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let annihilators = term.annihilators.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        out.add_term(Signature::new(creators, annihilators), term.coeff);
    }
    out.prune();
    Ok(out)
}
