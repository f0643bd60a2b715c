//! TOML run configuration.
//!
//! Every table rejects unknown keys. Values that parse but make no sense
//! (negative masses, even site counts, ...) are rejected by [`RunConfig::validate`]
//! with the dotted key path of the offending entry.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dressing::{BuiltinInteraction, KernelOptions, ModelSpec, Policy};
use crate::error::{Error, Result};
use crate::haag::GridPoint;
use crate::lattice::{FieldSpecies, LatticeSpec};
use crate::numerics::DEFAULT_DIMENSION_LIMIT;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub interaction: BuiltinInteraction,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub policy: Policy,
    #[serde(default)]
    pub umklapp: bool,
    #[serde(default)]
    pub lattice: LatticeConfig,
    /// Defaults to the species the interaction expects.
    #[serde(default)]
    pub species: Vec<SpeciesConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(default = "one_usize")]
    pub dim: usize,
    #[serde(default = "default_sites")]
    pub sites: usize,
    #[serde(default = "default_length")]
    pub physical_length: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            sites: default_sites(),
            physical_length: default_length(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub name: String,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "default_cutoff")]
    pub per_mode_cutoff: usize,
    #[serde(default = "default_cutoff")]
    pub total_cutoff: usize,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    /// Largest `|t|`, in lattice spacings.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_dimension_limit")]
    pub dimension_limit: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            per_mode_cutoff: default_cutoff(),
            total_cutoff: default_cutoff(),
            lambdas: default_lambdas(),
            horizon: default_horizon(),
            dimension_limit: default_dimension_limit(),
        }
    }
}

/// Per-check `basis` table; unset fields fall back to `[numerics]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffOverride {
    pub per_mode_cutoff: Option<usize>,
    pub total_cutoff: Option<usize>,
}

impl CutoffOverride {
    pub fn resolve(&self, numerics: &NumericsConfig) -> (usize, usize) {
        (
            self.per_mode_cutoff.unwrap_or(numerics.per_mode_cutoff),
            self.total_cutoff.unwrap_or(numerics.total_cutoff),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    #[serde(default)]
    pub self_test: SelfTestCheck,
    #[serde(default)]
    pub oracle: OracleCheck,
    #[serde(default)]
    pub residuals: ResidualCheck,
    #[serde(default)]
    pub momentum: ToggleCheck,
    #[serde(default)]
    pub mass_shift: MassShiftCheck,
    #[serde(default)]
    pub bogoliubov: BogoliubovCheck,
    #[serde(default)]
    pub equal_time: EqualTimeCheck,
    #[serde(default)]
    pub spacelike: SpacelikeCheck,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToggleCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
}

impl Default for ToggleCheck {
    fn default() -> Self {
        Self { enabled: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfTestCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_instances")]
    pub instances: usize,
}

impl Default for SelfTestCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            instances: default_instances(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "two")]
    pub block_quanta: usize,
    #[serde(default)]
    pub basis: CutoffOverride,
}

impl Default for OracleCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            block_quanta: 2,
            basis: CutoffOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Repeat on a basis with both cutoffs doubled.
    #[serde(default = "yes")]
    pub double_cutoff: bool,
    #[serde(default)]
    pub basis: CutoffOverride,
}

impl Default for ResidualCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            double_cutoff: true,
            basis: CutoffOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassShiftCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default)]
    pub basis: CutoffOverride,
}

impl Default for MassShiftCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            basis: CutoffOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BogoliubovCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_chi")]
    pub chi: f64,
    #[serde(default = "default_bogoliubov_cutoff")]
    pub cutoff: usize,
}

impl Default for BogoliubovCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            chi: default_chi(),
            cutoff: default_bogoliubov_cutoff(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualTimeCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default = "default_equal_time_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "one_usize")]
    pub block_quanta: usize,
    /// Site pairs; all pairs when empty.
    #[serde(default)]
    pub pairs: Vec<SitePair>,
    #[serde(default)]
    pub basis: CutoffOverride,
}

impl Default for EqualTimeCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            times: default_times(),
            lambdas: default_equal_time_lambdas(),
            block_quanta: 1,
            pairs: Vec::new(),
            basis: CutoffOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitePair {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacelikeCheck {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_spacelike_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "one_usize")]
    pub block_quanta: usize,
    /// Grid points; defaults to the largest separation at half its distance in time.
    #[serde(default)]
    pub points: Vec<GridPointConfig>,
    /// Compute non-spacelike points instead of rejecting them.
    #[serde(default)]
    pub allow_timelike: bool,
    #[serde(default)]
    pub basis: CutoffOverride,
}

impl Default for SpacelikeCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            lambdas: default_spacelike_lambdas(),
            block_quanta: 1,
            points: Vec::new(),
            allow_timelike: false,
            basis: CutoffOverride::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPointConfig {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// Time offset of the first field.
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_bad_term")]
    pub bad_term: f64,
    #[serde(default = "default_slope")]
    pub slope: f64,
    #[serde(default = "default_spacelike_slope")]
    pub spacelike_slope: f64,
    #[serde(default = "default_momentum")]
    pub momentum: f64,
    #[serde(default = "default_mass_shift")]
    pub mass_shift: f64,
    #[serde(default = "default_equal_time")]
    pub equal_time: f64,
    #[serde(default = "default_zero_residual")]
    pub zero_residual: f64,
    #[serde(default = "default_bogoliubov")]
    pub bogoliubov: f64,
    /// Required ratio of the subtracted spacelike commutator to the noise floor.
    #[serde(default = "default_noise_ratio")]
    pub noise_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bad_term: default_bad_term(),
            slope: default_slope(),
            spacelike_slope: default_spacelike_slope(),
            momentum: default_momentum(),
            mass_shift: default_mass_shift(),
            equal_time: default_equal_time(),
            zero_residual: default_zero_residual(),
            bogoliubov: default_bogoliubov(),
            noise_ratio: default_noise_ratio(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_report")]
    pub report: String,
    /// Write one CSV per scan next to the report.
    #[serde(default = "yes")]
    pub csv: bool,
    /// Include wall-clock timings; off keeps reports byte-stable.
    #[serde(default)]
    pub timing: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            report: default_report(),
            csv: true,
            timing: false,
        }
    }
}

fn yes() -> bool {
    true
}
fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn two() -> usize {
    2
}
fn default_order() -> usize {
    2
}
fn default_sites() -> usize {
    5
}
fn default_length() -> f64 {
    std::f64::consts::TAU
}
fn default_cutoff() -> usize {
    4
}
fn default_lambdas() -> Vec<f64> {
    vec![0.0, 0.02, 0.04, 0.08, 0.16]
}
fn default_horizon() -> f64 {
    crate::numerics::field::DEFAULT_HORIZON_SPACINGS
}
fn default_dimension_limit() -> usize {
    DEFAULT_DIMENSION_LIMIT
}
fn default_instances() -> usize {
    200
}
fn default_chi() -> f64 {
    0.1
}
fn default_bogoliubov_cutoff() -> usize {
    40
}
fn default_times() -> Vec<f64> {
    vec![0.0, 1.0, 2.0]
}
fn default_equal_time_lambdas() -> Vec<f64> {
    vec![0.0, 0.1]
}
fn default_spacelike_lambdas() -> Vec<f64> {
    vec![0.05, 0.1, 0.2]
}
fn default_bad_term() -> f64 {
    1e-10
}
fn default_slope() -> f64 {
    0.4
}
fn default_spacelike_slope() -> f64 {
    0.3
}
fn default_momentum() -> f64 {
    1e-10
}
fn default_mass_shift() -> f64 {
    1e-6
}
fn default_equal_time() -> f64 {
    1e-8
}
fn default_zero_residual() -> f64 {
    1e-12
}
fn default_bogoliubov() -> f64 {
    1e-6
}
fn default_noise_ratio() -> f64 {
    10.0
}
fn default_report() -> String {
    "report.json".into()
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let path = e
            .span()
            .map(|s| format!("line {}", text[..s.start].matches('\n').count() + 1))
            .unwrap_or_else(|| "config".into());
        Error::config(path, e.message().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_config(&text)
}

fn check(cond: bool, path: impl Into<String>, reason: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(path, reason))
    }
}

fn check_lambdas(path: &str, lambdas: &[f64]) -> Result<()> {
    check(!lambdas.is_empty(), path, "must not be empty")?;
    for (i, l) in lambdas.iter().enumerate() {
        check(l.is_finite() && *l >= 0.0, format!("{path}[{i}]"), format!("must be finite and ≥ 0, got {l}"))?;
    }
    Ok(())
}

fn check_site(path: &str, site: &[usize], dim: usize, sites: usize) -> Result<()> {
    check(site.len() == dim, path, format!("needs {dim} coordinates, got {}", site.len()))?;
    check(site.iter().all(|&s| s < sites), path, format!("coordinates must be below {sites}"))
}

fn check_cutoffs(path: &str, c: &CutoffOverride) -> Result<()> {
    if let Some(p) = c.per_mode_cutoff {
        check(p >= 1, format!("{path}.per_mode_cutoff"), "must be at least 1")?;
    }
    if let Some(t) = c.total_cutoff {
        check(t >= 1, format!("{path}.total_cutoff"), "must be at least 1")?;
    }
    Ok(())
}

impl RunConfig {
    /// The species list in effect after defaults.
    pub fn species(&self) -> Vec<SpeciesConfig> {
        if self.model.species.is_empty() {
            self.model
                .interaction
                .default_species()
                .into_iter()
                .map(|s| SpeciesConfig {
                    name: s.name,
                    mass: s.mass,
                })
                .collect()
        } else {
            self.model.species.clone()
        }
    }

    /// Copy with defaults filled in, as echoed into reports.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.model.species = self.species();
        c
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        check(m.order >= 1, "model.order", format!("must be at least 1, got {}", m.order))?;
        check(m.g.is_finite(), "model.g", "must be finite")?;
        let lat = &m.lattice;
        check(lat.dim >= 1, "model.lattice.dim", "must be at least 1")?;
        check(
            lat.sites % 2 == 1,
            "model.lattice.sites",
            format!("must be odd so that the zone is symmetric, got {}", lat.sites),
        )?;
        check(
            lat.physical_length.is_finite() && lat.physical_length > 0.0,
            "model.lattice.physical_length",
            format!("must be positive, got {}", lat.physical_length),
        )?;
        let want = m.interaction.species_count();
        check(
            m.species.is_empty() || m.species.len() == want,
            "model.species",
            format!("{} needs {want} species, got {}", m.interaction.name(), m.species.len()),
        )?;
        for (i, s) in m.species.iter().enumerate() {
            check(
                s.mass.is_finite() && s.mass > 0.0,
                format!("model.species[{i}].mass"),
                format!("species `{}` needs a positive mass, got {}", s.name, s.mass),
            )?;
            check(!s.name.is_empty(), format!("model.species[{i}].name"), "must not be empty")?;
        }

        let n = &self.numerics;
        check(n.per_mode_cutoff >= 1, "numerics.per_mode_cutoff", "must be at least 1")?;
        check(n.total_cutoff >= 1, "numerics.total_cutoff", "must be at least 1")?;
        check_lambdas("numerics.lambdas", &n.lambdas)?;
        check(n.horizon > 0.0 && n.horizon.is_finite(), "numerics.horizon", "must be positive")?;

        let c = &self.checks;
        check(c.self_test.instances >= 1, "checks.self_test.instances", "must be at least 1")?;
        check_cutoffs("checks.oracle.basis", &c.oracle.basis)?;
        check_cutoffs("checks.residuals.basis", &c.residuals.basis)?;
        check_cutoffs("checks.mass_shift.basis", &c.mass_shift.basis)?;
        check_cutoffs("checks.equal_time.basis", &c.equal_time.basis)?;
        check_cutoffs("checks.spacelike.basis", &c.spacelike.basis)?;
        check(c.bogoliubov.cutoff >= 2, "checks.bogoliubov.cutoff", "must be at least 2")?;
        check(c.bogoliubov.chi.is_finite(), "checks.bogoliubov.chi", "must be finite")?;
        check_lambdas("checks.equal_time.lambdas", &c.equal_time.lambdas)?;
        check_lambdas("checks.spacelike.lambdas", &c.spacelike.lambdas)?;
        for (i, t) in c.equal_time.times.iter().enumerate() {
            check(t.is_finite(), format!("checks.equal_time.times[{i}]"), "must be finite")?;
        }
        for (i, p) in c.equal_time.pairs.iter().enumerate() {
            check_site(&format!("checks.equal_time.pairs[{i}].x"), &p.x, lat.dim, lat.sites)?;
            check_site(&format!("checks.equal_time.pairs[{i}].y"), &p.y, lat.dim, lat.sites)?;
        }
        for (i, p) in c.spacelike.points.iter().enumerate() {
            check_site(&format!("checks.spacelike.points[{i}].x"), &p.x, lat.dim, lat.sites)?;
            check_site(&format!("checks.spacelike.points[{i}].y"), &p.y, lat.dim, lat.sites)?;
            check(p.tau.is_finite(), format!("checks.spacelike.points[{i}].tau"), "must be finite")?;
        }
        let t = &c.tolerances;
        for (name, v) in [
            ("bad_term", t.bad_term),
            ("slope", t.slope),
            ("spacelike_slope", t.spacelike_slope),
            ("momentum", t.momentum),
            ("mass_shift", t.mass_shift),
            ("equal_time", t.equal_time),
            ("zero_residual", t.zero_residual),
            ("bogoliubov", t.bogoliubov),
            ("noise_ratio", t.noise_ratio),
        ] {
            check(v > 0.0 && v.is_finite(), format!("checks.tolerances.{name}"), "must be positive")?;
        }
        check(!self.output.report.is_empty(), "output.report", "must not be empty")?;
        Ok(())
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        let l = &self.model.lattice;
        LatticeSpec::new(l.dim, l.sites, l.physical_length)
    }

    pub fn build_model(&self) -> Result<ModelSpec> {
        let species = self
            .species()
            .into_iter()
            .map(|s| FieldSpecies::new(s.name, s.mass))
            .collect::<Result<Vec<_>>>()?;
        ModelSpec::builtin(
            self.model.interaction,
            self.lattice()?,
            species,
            KernelOptions {
                g: self.model.g,
                umklapp: self.model.umklapp,
            },
            self.model.order,
            self.model.policy,
        )
    }

    /// Evolution horizon in time units.
    pub fn horizon(&self) -> Result<f64> {
        Ok(self.numerics.horizon * self.lattice()?.spacing())
    }

    /// Spacelike grid; the default is the largest separation at half its distance in time.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let spacing = self.lattice()?.spacing();
        let points = &self.checks.spacelike.points;
        if points.is_empty() {
            let l = &self.model.lattice;
            let mut x = vec![0; l.dim];
            x[0] = l.sites / 2;
            return Ok(vec![GridPoint {
                x,
                y: vec![0; l.dim],
                tau: 0.5 * spacing * (l.sites / 2) as f64,
            }]);
        }
        Ok(points
            .iter()
            .map(|p| GridPoint {
                x: p.x.clone(),
                y: p.y.clone(),
                tau: p.tau,
            })
            .collect())
    }

    /// Equal-time pairs: the configured list, or every ordered pair `x < y`.
    pub fn pairs(&self) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
        if !self.checks.equal_time.pairs.is_empty() {
            return Ok(self.checks.equal_time.pairs.iter().map(|p| (p.x.clone(), p.y.clone())).collect());
        }
        let sites = self.lattice()?.sites();
        Ok(sites
            .iter()
            .enumerate()
            .flat_map(|(i, x)| sites[i + 1..].iter().map(move |y| (x.clone(), y.clone())))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[model]\ninteraction = \"phi3\"\n";

    #[test]
    fn empty_tables_match_absent_tables() {
        let tables = [
            "numerics", "output", "checks.self_test", "checks.oracle", "checks.residuals", "checks.momentum",
            "checks.mass_shift", "checks.bogoliubov", "checks.equal_time", "checks.spacelike", "checks.tolerances",
        ];
        let text: String = tables.iter().map(|t| format!("[{t}]\n")).collect();
        let explicit = parse_config(&format!("{MINIMAL}{text}")).unwrap();
        assert_eq!(explicit, parse_config(MINIMAL).unwrap());
    }

    #[test]
    fn minimal_config_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.model.order, 2);
        assert_eq!(c.model.policy, Policy::Shirokov);
        assert_eq!((c.numerics.per_mode_cutoff, c.numerics.total_cutoff), (4, 4));
        assert_eq!(c.species()[0].name, "phi");
        assert!(!c.output.timing);
    }

    #[test]
    fn negative_mass_names_species() {
        let text = "[model]\ninteraction = \"phi3\"\n[[model.species]]\nname = \"sigma\"\nmass = -1.0\n";
        match parse_config(text) {
            Err(Error::Config { path, reason }) => {
                assert_eq!(path, "model.species[0].mass");
                assert!(reason.contains("sigma"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = "[model]\ninteraction = \"phi3\"\ncolour = 3\n";
        match parse_config(text) {
            Err(Error::Config { path, reason }) => {
                assert_eq!(path, "line 3");
                assert!(reason.contains("colour"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn weidlich_on_yukawa_parses() {
        let c = parse_config("[model]\ninteraction = \"scalar-yukawa\"\npolicy = \"weidlich\"\n").unwrap();
        assert_eq!(c.model.policy, Policy::Weidlich);
        assert_eq!(c.species().len(), 2);
    }

    #[test]
    fn even_sites_rejected() {
        let err = parse_config("[model]\ninteraction = \"phi3\"\n[model.lattice]\nsites = 4\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "model.lattice.sites"));
    }

    #[test]
    fn default_pairs_are_unordered() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.pairs().unwrap().len(), 10);
        let g = c.grid().unwrap();
        assert_eq!(g[0].x, vec![2]);
    }
}
