//! Momentum lattice, field species and the flattened mode table.
//!
//! A lattice with `S` (odd) sites per dimension carries the wavevectors
//! `k ∈ {-(S-1)/2, …, (S-1)/2}^dim`, closed under `k → -k`. Momenta are
//! `p = 2πk / L`. Every `(species, k)` pair is a mode; modes are numbered
//! species-major, then lexicographically in `k`, and that numbering is the
//! canonical sort order used by the operator algebra.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dim: usize,
    pub sites_per_dim: usize,
    pub physical_length: f64,
}

impl LatticeSpec {
    pub fn new(dim: usize, sites_per_dim: usize, physical_length: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidLattice("dimension must be at least 1".into()));
        }
        if sites_per_dim == 0 || sites_per_dim % 2 == 0 {
            return Err(Error::InvalidLattice(format!(
                "sites_per_dim must be a positive odd integer, got {sites_per_dim}"
            )));
        }
        if !(physical_length.is_finite() && physical_length > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "physical_length must be positive, got {physical_length}"
            )));
        }
        Ok(Self {
            dim,
            sites_per_dim,
            physical_length,
        })
    }

    /// One-dimensional lattice.
    pub fn line(sites: usize, physical_length: f64) -> Result<Self> {
        Self::new(1, sites, physical_length)
    }

    pub fn half_width(&self) -> i32 {
        (self.sites_per_dim as i32 - 1) / 2
    }

    /// Number of wavevectors (equivalently, sites).
    pub fn cells(&self) -> usize {
        self.sites_per_dim.pow(self.dim as u32)
    }

    pub fn volume(&self) -> f64 {
        self.physical_length.powi(self.dim as i32)
    }

    pub fn spacing(&self) -> f64 {
        self.physical_length / self.sites_per_dim as f64
    }

    pub fn momentum(&self, k: &[i32]) -> Vec<f64> {
        k.iter()
            .map(|&ki| TAU * ki as f64 / self.physical_length)
            .collect()
    }

    pub fn contains(&self, k: &[i32]) -> bool {
        let h = self.half_width();
        k.len() == self.dim && k.iter().all(|&ki| (-h..=h).contains(&ki))
    }

    /// Maps an integer wavevector component back into the Brillouin range.
    pub fn wrap(&self, k: i32) -> i32 {
        let s = self.sites_per_dim as i32;
        let h = self.half_width();
        (k + h).rem_euclid(s) - h
    }

    /// All wavevectors in lexicographic order.
    pub fn wavevectors(&self) -> Vec<Vec<i32>> {
        let h = self.half_width();
        let axis: Vec<i32> = (-h..=h).collect();
        cartesian(&axis, self.dim)
    }

    /// All site coordinates (integer lattice positions) in lexicographic order.
    pub fn sites(&self) -> Vec<Vec<usize>> {
        let axis: Vec<usize> = (0..self.sites_per_dim).collect();
        cartesian(&axis, self.dim)
    }

    /// Euclidean minimum-image distance between two sites, in physical units.
    pub fn min_image_distance(&self, x: &[usize], y: &[usize]) -> f64 {
        let s = self.sites_per_dim as i64;
        let d2: f64 = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| {
                let d = (a as i64 - b as i64).rem_euclid(s);
                let d = d.min(s - d) as f64 * self.spacing();
                d * d
            })
            .sum();
        d2.sqrt()
    }
}

fn cartesian<T: Copy>(axis: &[T], dim: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// A bosonic field species. Statistics are always bosonic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpecies {
    pub name: String,
    pub mass: f64,
}

impl FieldSpecies {
    pub fn new(name: impl Into<String>, mass: f64) -> Result<Self> {
        let name = name.into();
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidSpecies {
                name,
                reason: format!("mass must be positive, got {mass}"),
            });
        }
        Ok(Self { name, mass })
    }
}

/// A mode `(species, k)` in user-facing form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub species: usize,
    pub k: Vec<i32>,
}

impl ModeIndex {
    pub fn new(species: usize, k: impl Into<Vec<i32>>) -> Self {
        Self {
            species,
            k: k.into(),
        }
    }
}

/// Dense mode number. The numeric order agrees with the `ModeIndex` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(pub u16);

impl ModeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The complete single-particle mode table of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpace {
    lattice: LatticeSpec,
    species: Vec<FieldSpecies>,
    modes: Vec<ModeIndex>,
    energies: Vec<f64>,
    momenta: Vec<Vec<f64>>,
    lookup: HashMap<ModeIndex, ModeId>,
}

impl ModeSpace {
    pub fn new(lattice: LatticeSpec, species: Vec<FieldSpecies>) -> Result<Self> {
        if species.is_empty() {
            return Err(Error::InvalidModel("at least one species is required".into()));
        }
        for s in &species {
            FieldSpecies::new(s.name.clone(), s.mass)?;
        }
        let wavevectors = lattice.wavevectors();
        let total = species.len() * wavevectors.len();
        if total > u16::MAX as usize {
            return Err(Error::InvalidLattice(format!("{total} modes is too many")));
        }
        let mut modes = Vec::with_capacity(total);
        let mut energies = Vec::with_capacity(total);
        let mut momenta = Vec::with_capacity(total);
        let mut lookup = HashMap::with_capacity(total);
        for (s, sp) in species.iter().enumerate() {
            for k in &wavevectors {
                let p = lattice.momentum(k);
                let p2: f64 = p.iter().map(|x| x * x).sum();
                let idx = ModeIndex::new(s, k.clone());
                lookup.insert(idx.clone(), ModeId(modes.len() as u16));
                modes.push(idx);
                energies.push((p2 + sp.mass * sp.mass).sqrt());
                momenta.push(p);
            }
        }
        Ok(Self {
            lattice,
            species,
            modes,
            energies,
            momenta,
            lookup,
        })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn species(&self) -> &[FieldSpecies] {
        &self.species
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ModeId> {
        (0..self.modes.len() as u16).map(ModeId)
    }

    pub fn id_of(&self, mode: &ModeIndex) -> Option<ModeId> {
        self.lookup.get(mode).copied()
    }

    pub fn mode_id(&self, species: usize, k: &[i32]) -> Option<ModeId> {
        self.id_of(&ModeIndex::new(species, k.to_vec()))
    }

    pub fn mode(&self, id: ModeId) -> &ModeIndex {
        &self.modes[id.index()]
    }

    pub fn energy(&self, id: ModeId) -> f64 {
        self.energies[id.index()]
    }

    pub fn momentum(&self, id: ModeId) -> &[f64] {
        &self.momenta[id.index()]
    }

    /// Mode ids of one species, in wavevector order.
    pub fn species_modes(&self, species: usize) -> impl Iterator<Item = ModeId> + '_ {
        self.ids().filter(move |&id| self.mode(id).species == species)
    }

    pub fn label(&self, id: ModeId) -> String {
        let m = self.mode(id);
        let k: Vec<String> = m.k.iter().map(|v| v.to_string()).collect();
        format!("{}({})", self.species[m.species].name, k.join(","))
    }
}
