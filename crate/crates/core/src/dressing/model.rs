//! Model definitions: free part, interaction kernels and the built-in library.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{free_hamiltonian, OperatorSeries, Signature, TermMap};
use crate::error::{Error, Result};
use crate::lattice::{FieldSpecies, LatticeSpec, ModeId, ModeSpace};
use crate::C64;

use super::RESONANCE_TOLERANCE;

/// Which terms each order of the dressing removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Remove only the terms that obstruct the vacuum and one-particle states.
    #[default]
    Shirokov,
    /// Remove every term except `(0,0)` and `(1,1)`.
    Weidlich,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Shirokov => "shirokov",
            Policy::Weidlich => "weidlich",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinInteraction {
    /// Normal-ordered cubic self-interaction of one scalar.
    Phi3,
    /// Bosonic "nucleon" `N` coupled to a scalar `φ` through `N†N φ`.
    ScalarYukawa,
}

impl BuiltinInteraction {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinInteraction::Phi3 => "phi3",
            BuiltinInteraction::ScalarYukawa => "scalar-yukawa",
        }
    }

    pub fn default_species(self) -> Vec<FieldSpecies> {
        match self {
            BuiltinInteraction::Phi3 => vec![FieldSpecies {
                name: "phi".into(),
                mass: 1.0,
            }],
            BuiltinInteraction::ScalarYukawa => vec![
                FieldSpecies {
                    name: "N".into(),
                    mass: 1.0,
                },
                FieldSpecies {
                    name: "phi".into(),
                    mass: 0.5,
                },
            ],
        }
    }

    pub fn species_count(self) -> usize {
        match self {
            BuiltinInteraction::Phi3 => 1,
            BuiltinInteraction::ScalarYukawa => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Vertex strength `g`.
    pub g: f64,
    /// Allow momentum sums to wrap around the Brillouin zone.
    pub umklapp: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            g: 1.0,
            umklapp: false,
        }
    }
}

/// `a + sign·b`, wrapped into the zone if umklapp is allowed.
fn add_k(space: &ModeSpace, a: &[i32], b: &[i32], sign: i32, umklapp: bool) -> Option<Vec<i32>> {
    let lat = space.lattice();
    let raw: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + sign * y).collect();
    if lat.contains(&raw) {
        Some(raw)
    } else if umklapp {
        Some(raw.into_iter().map(|v| lat.wrap(v)).collect())
    } else {
        None
    }
}

fn vertex_norm(space: &ModeSpace, modes: [ModeId; 3]) -> f64 {
    let prod: f64 = modes.iter().map(|&m| space.energy(m)).product();
    1.0 / (8.0 * prod * space.lattice().volume()).sqrt()
}

/// `(g/3!) ∫ :φ³:` expanded in modes of one species:
/// `a†a†a†` and `a†a†a` pieces plus their conjugates, each vertex weighted by
/// `1/√(8 E₁E₂E₃ · volume)`.
pub fn phi3_kernel(space: &ModeSpace, species: usize, opts: KernelOptions) -> TermMap {
    let modes: Vec<ModeId> = space.species_modes(species).collect();
    let mut out = TermMap::new();
    for &m1 in &modes {
        for &m2 in &modes {
            let k1 = &space.mode(m1).k;
            let k2 = &space.mode(m2).k;
            // a†k1 a†k2 a†k3 with k1 + k2 + k3 = 0
            let neg_k1: Vec<i32> = k1.iter().map(|v| -v).collect();
            if let Some(k3) = add_k(space, &neg_k1, k2, -1, opts.umklapp) {
                let m3 = space.mode_id(species, &k3).expect("wrapped wavevector on lattice");
                let c = opts.g / 6.0 * vertex_norm(space, [m1, m2, m3]);
                let sig = Signature::new([m1, m2, m3], []);
                out.add_term(sig.dagger(), C64::new(c, 0.0));
                out.add_term(sig, C64::new(c, 0.0));
            }
            // a†k1 a†k2 a_k3 with k3 = k1 + k2
            if let Some(k3) = add_k(space, k1, k2, 1, opts.umklapp) {
                let m3 = space.mode_id(species, &k3).expect("wrapped wavevector on lattice");
                let c = opts.g / 2.0 * vertex_norm(space, [m1, m2, m3]);
                let sig = Signature::new([m1, m2], [m3]);
                out.add_term(sig.dagger(), C64::new(c, 0.0));
                out.add_term(sig, C64::new(c, 0.0));
            }
        }
    }
    out.prune();
    out
}

/// `g Σ N†_{k₁} N_{k₂} (φ_{k₁−k₂} + φ†_{k₂−k₁})` with the same vertex weight as
/// [`phi3_kernel`].
pub fn scalar_yukawa_kernel(space: &ModeSpace, nucleon: usize, meson: usize, opts: KernelOptions) -> TermMap {
    let ns: Vec<ModeId> = space.species_modes(nucleon).collect();
    let mut out = TermMap::new();
    for &n1 in &ns {
        for &n2 in &ns {
            let k1 = &space.mode(n1).k;
            let k2 = &space.mode(n2).k;
            // absorption: φ_{k1−k2}
            if let Some(q) = add_k(space, k1, k2, -1, opts.umklapp) {
                let mq = space.mode_id(meson, &q).expect("wrapped wavevector on lattice");
                let c = opts.g * vertex_norm(space, [n1, n2, mq]);
                out.add_term(Signature::new([n1], [n2, mq]), C64::new(c, 0.0));
            }
            // emission: φ†_{k2−k1}
            if let Some(q) = add_k(space, k2, k1, -1, opts.umklapp) {
                let mq = space.mode_id(meson, &q).expect("wrapped wavevector on lattice");
                let c = opts.g * vertex_norm(space, [n1, n2, mq]);
                out.add_term(Signature::new([n1, mq], [n2]), C64::new(c, 0.0));
            }
        }
    }
    out.prune();
    out
}

/// `H = H₀ + λV` together with the dressing settings.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    space: Arc<ModeSpace>,
    interaction: TermMap,
    /// Default numeric value of `λ`.
    pub coupling: f64,
    pub max_order: usize,
    pub policy: Policy,
}

impl ModelSpec {
    pub fn new(
        space: Arc<ModeSpace>,
        interaction: TermMap,
        coupling: f64,
        max_order: usize,
        policy: Policy,
    ) -> Result<Self> {
        if max_order < 1 {
            return Err(Error::OrderTooLow {
                got: max_order,
                needed: 1,
            });
        }
        if let Some(m) = interaction.max_mode() {
            if m.index() >= space.len() {
                return Err(Error::UnknownMode {
                    mode: m.index(),
                    modes: space.len(),
                });
            }
        }
        let defect = interaction.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidModel(format!(
                "interaction is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self {
            space,
            interaction,
            coupling,
            max_order,
            policy,
        })
    }

    pub fn builtin(
        kind: BuiltinInteraction,
        lattice: LatticeSpec,
        species: Vec<FieldSpecies>,
        opts: KernelOptions,
        max_order: usize,
        policy: Policy,
    ) -> Result<Self> {
        if species.len() != kind.species_count() {
            return Err(Error::InvalidModel(format!(
                "{} needs {} species, got {}",
                kind.name(),
                kind.species_count(),
                species.len()
            )));
        }
        let space = Arc::new(ModeSpace::new(lattice, species)?);
        let v = match kind {
            BuiltinInteraction::Phi3 => phi3_kernel(&space, 0, opts),
            BuiltinInteraction::ScalarYukawa => scalar_yukawa_kernel(&space, 0, 1, opts),
        };
        Self::new(space, v, 1.0, max_order, policy)
    }

    /// Single scalar of the given mass on a line with `p = k` (length `2π`).
    pub fn phi3(sites: usize, mass: f64, g: f64, max_order: usize) -> Result<Self> {
        Self::builtin(
            BuiltinInteraction::Phi3,
            LatticeSpec::line(sites, TAU)?,
            vec![FieldSpecies::new("phi", mass)?],
            KernelOptions { g, umklapp: false },
            max_order,
            Policy::Shirokov,
        )
    }

    /// Nucleon of mass 1 and scalar of mass 0.5 on a line with `p = k`.
    pub fn scalar_yukawa(sites: usize, g: f64, max_order: usize) -> Result<Self> {
        Self::builtin(
            BuiltinInteraction::ScalarYukawa,
            LatticeSpec::line(sites, TAU)?,
            BuiltinInteraction::ScalarYukawa.default_species(),
            KernelOptions { g, umklapp: false },
            max_order,
            Policy::Shirokov,
        )
    }

    pub fn with_policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn interaction(&self) -> &TermMap {
        &self.interaction
    }

    pub fn free_part(&self) -> TermMap {
        free_hamiltonian(&self.space)
    }

    /// `H₀` at order 0 and `V` at order 1, truncated at `max_order`.
    pub fn hamiltonian(&self) -> OperatorSeries {
        let mut h = OperatorSeries::zero(self.space.clone(), self.max_order);
        h.set_order(0, self.free_part());
        h.set_order(1, self.interaction.clone());
        h
    }

    /// `H₀ + λV` as a single term map.
    pub fn hamiltonian_at(&self, lambda: f64) -> TermMap {
        let mut h = self.free_part();
        h.add_scaled(&self.interaction, C64::new(lambda, 0.0));
        h
    }

    /// Interaction signatures whose wavevectors only balance modulo the zone.
    pub fn umklapp_signatures(&self) -> Vec<Signature> {
        self.interaction
            .signatures()
            .filter(|s| s.wavevector_transfer(&self.space).iter().any(|&k| k != 0))
            .cloned()
            .collect()
    }

    /// Smallest `|ΔE|` over interaction vertices; fails if any vertex is on
    /// shell, i.e. if a particle could decay.
    pub fn check_no_decay(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        let mut resonant = Vec::new();
        for sig in self.interaction.signatures() {
            if sig.term_type().is_good() {
                continue;
            }
            let de = sig.energy_difference(&self.space).abs();
            if de < RESONANCE_TOLERANCE {
                resonant.push(sig.display(&self.space).to_string());
            }
            min = min.min(de);
        }
        if resonant.is_empty() {
            Ok(min)
        } else {
            Err(Error::ZeroDenominator {
                policy: None,
                order: 1,
                signatures: resonant,
            })
        }
    }
}
