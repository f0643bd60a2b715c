//! JSON report and CSV scan tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::algebra::{OperatorSeries, TermRow};
use crate::config::RunConfig;
use crate::dressing::{DressingResult, ModelSpec, NearResonance};
use crate::error::Result;
use crate::haag::{BogoliubovReport, ResidualReport, ScanReport};
use crate::selftest::SelfTestReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Fixed conventions the numbers in a report depend on.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub transformed_hamiltonian: &'static str,
    pub dressed_vacuum: &'static str,
    pub field: &'static str,
    pub energy_denominator: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            transformed_hamiltonian: "K = exp(R) H exp(-R), R = sum_n lambda^n R_n",
            dressed_vacuum: "exp(-R)|0>",
            field: "A(x) = V^(-1/2) sum_k (2 E_k)^(-1/2) (exp(i p x) a_k + exp(-i p x) a_k^dagger)",
            energy_denominator: "sum E(creators) - sum E(annihilators)",
        }
    }
}

/// Pass/fail record for one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    /// `|got − expected| ≤ tolerance`; NaN fails.
    pub fn within(check: impl Into<String>, expected: f64, got: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            expected,
            got,
            tolerance,
            pass: (got - expected).abs() <= tolerance,
        }
    }

    /// `got ≤ bound`, recorded with `expected = 0`.
    pub fn below(check: impl Into<String>, got: f64, bound: f64) -> Self {
        Self {
            check: check.into(),
            expected: 0.0,
            got,
            tolerance: bound,
            pass: got <= bound,
        }
    }

    /// `got ≥ bound`, recorded with `expected = bound` and zero tolerance.
    pub fn at_least(check: impl Into<String>, got: f64, bound: f64) -> Self {
        Self {
            check: check.into(),
            expected: bound,
            got,
            tolerance: 0.0,
            pass: got >= bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyCorrection {
    pub mode: String,
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DressingSection {
    pub policy: String,
    pub order: usize,
    /// Smallest `|ΔE|` divided by; absent when nothing was removed.
    pub min_denominator: Option<f64>,
    pub vacuum_energy_shift: f64,
    pub k_terms: Vec<TermRow>,
    pub generator_terms: Vec<TermRow>,
    /// Bad terms left in `K` above the bad-term tolerance.
    pub bad_terms: Vec<TermRow>,
    pub energy_corrections: Vec<EnergyCorrection>,
    pub near_resonances: Vec<NearResonance>,
    pub umklapp_signatures: Vec<String>,
}

impl DressingSection {
    pub fn new(model: &ModelSpec, result: &DressingResult, bad_tolerance: f64) -> Self {
        let space = model.space();
        let bad = OperatorSeries::from_orders(
            space.clone(),
            result
                .k
                .orders()
                .iter()
                .map(|t| t.filter(|s| s.term_type().is_bad()))
                .collect(),
        );
        let bad_terms = bad
            .rows()
            .into_iter()
            .filter(|r| r.re.hypot(r.im) > bad_tolerance)
            .collect();
        let energy_corrections = if result.max_order() >= 2 {
            space
                .ids()
                .map(|m| {
                    let mode = space.mode(m);
                    EnergyCorrection {
                        mode: space.label(m),
                        delta: crate::dressing::extract_energy_correction(result, mode.species, &mode.k)
                            .unwrap_or(f64::NAN),
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            policy: result.policy.name().to_string(),
            order: result.max_order(),
            min_denominator: result.min_denominator.is_finite().then_some(result.min_denominator),
            vacuum_energy_shift: result.vacuum_energy_shift(),
            k_terms: result.k.rows(),
            generator_terms: result.generator_series().rows(),
            bad_terms,
            energy_corrections,
            near_resonances: result.diagnostics.clone(),
            umklapp_signatures: model
                .umklapp_signatures()
                .iter()
                .map(|s| s.display(space).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleSection {
    pub lambdas: Vec<f64>,
    pub differences: Vec<f64>,
    pub slope: f64,
    pub block_quanta: usize,
    pub per_mode_cutoff: usize,
    pub total_cutoff: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassShiftRow {
    pub mode: String,
    pub symbolic: f64,
    pub perturbative: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ChecksSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_test: Option<SelfTestReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_shift: Option<Vec<MassShiftRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bogoliubov: Option<BogoliubovReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal_time: Option<ScanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacelike: Option<ScanReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    pub seed: u64,
    pub conventions: Conventions,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dressing: Option<DressingSection>,
    pub checks: ChecksSection,
    pub verdicts: Vec<Verdict>,
    pub errors: Vec<ErrorEntry>,
    /// Checks that were narrowed without failing, e.g. a skipped cutoff doubling.
    pub warnings: Vec<ErrorEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: &RunConfig, command: &str, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::default(),
            command: command.to_string(),
            seed,
            conventions: Conventions::default(),
            config: config.resolved(),
            dressing: None,
            checks: ChecksSection::default(),
            verdicts: Vec::new(),
            errors: Vec::new(),
            warnings: Vec::new(),
            timing: None,
            pass: true,
        }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn error(&mut self, stage: &str, message: impl Into<String>) {
        self.errors.push(ErrorEntry {
            stage: stage.to_string(),
            message: message.into(),
        });
    }

    pub fn warn(&mut self, stage: &str, message: impl Into<String>) {
        self.warnings.push(ErrorEntry {
            stage: stage.to_string(),
            message: message.into(),
        });
    }

    pub fn finish(&mut self) {
        self.pass = self.errors.is_empty() && self.verdicts.iter().all(|v| v.pass);
    }

    pub fn failures(&self) -> Vec<String> {
        self.verdicts
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.check.clone())
            .chain(self.errors.iter().map(|e| format!("{}: {}", e.stage, e.message)))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes a scan as `separation,tau,lambda,magnitude,baseline,subtracted`.
pub fn write_scan_csv(path: &Path, scan: &ScanReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["separation", "tau", "lambda", "magnitude", "baseline", "subtracted"])?;
    for r in &scan.rows {
        w.write_record([
            r.separation.to_string(),
            r.tau.to_string(),
            r.lambda.to_string(),
            r.magnitude.to_string(),
            r.baseline.to_string(),
            r.subtracted.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the JSON report and, if enabled, one CSV per scan. Returns the
/// paths written.
pub fn emit_report(report: &Report, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let json = out_dir.join(&report.config.output.report);
    fs::write(&json, report.to_json()?)?;
    written.push(json);
    if report.config.output.csv {
        for (name, scan) in [
            ("equal_time.csv", &report.checks.equal_time),
            ("spacelike.csv", &report.checks.spacelike),
        ] {
            if let Some(scan) = scan {
                let p = out_dir.join(name);
                write_scan_csv(&p, scan)?;
                written.push(p);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn verdict_fails_on_nan() {
        assert!(!Verdict::within("slope", 3.0, f64::NAN, 0.4).pass);
        assert!(Verdict::within("slope", 3.0, 2.7, 0.4).pass);
        assert!(!Verdict::below("defect", 1e-9, 1e-10).pass);
    }

    #[test]
    fn empty_report_has_config_echo_only() {
        let cfg = parse_config("[model]\ninteraction = \"phi3\"\n").unwrap();
        let mut r = Report::new(&cfg, "verify", 0);
        r.finish();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["config"]["model"]["species"][0]["name"], "phi");
        assert!(v.get("dressing").is_none());
        assert_eq!(v["checks"], serde_json::json!({}));
        assert_eq!(v["verdicts"], serde_json::json!([]));
        assert!(v.get("timing").is_none());
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn failing_verdict_schema() {
        let v = serde_json::to_value(Verdict::within("residual slope", 3.0, 2.0, 0.4)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"check": "residual slope", "expected": 3.0, "got": 2.0, "tolerance": 0.4, "pass": false})
        );
    }
}
