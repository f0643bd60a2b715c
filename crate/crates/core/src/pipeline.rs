//! `dress`, `verify` and `scan` stages driven by a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::algebra::OperatorSeries;
use crate::config::RunConfig;
use crate::dressing::{dress, extract_energy_correction, DressingResult, ModelSpec};
use crate::error::{Error, Result};
use crate::haag::{
    bogoliubov_check, eigenstate_residuals, equal_time_scan, fit_loglog_slope, momentum_commutator_defect,
    spacelike_scan, ScanOptions,
};
use crate::numerics::{matrix_of, rspt2_shift, spectral_norm, DressedFrame, FockBasis};
use crate::C64;
use nalgebra::DMatrix;
use crate::report::{emit_report, DressingSection, MassShiftRow, OracleSection, Report, Verdict};
use crate::selftest::{algebra_self_test, SELF_TEST_TOLERANCE};

/// Seed of the randomized algebra self-test when none is given.
pub const DEFAULT_SEED: u64 = 20_261_015;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Dress,
    Verify,
    Scan,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dress => "dress",
            Command::Verify => "verify",
            Command::Scan => "scan",
            Command::All => "all",
        }
    }

    fn dresses(self) -> bool {
        matches!(self, Command::Dress | Command::All)
    }

    fn verifies(self) -> bool {
        matches!(self, Command::Verify | Command::All)
    }

    fn scans(self) -> bool {
        matches!(self, Command::Scan | Command::All)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    /// 0 when every enabled check passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

struct Timer {
    enabled: bool,
    stages: BTreeMap<String, f64>,
}

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.stages.insert(stage.to_string(), start.elapsed().as_secs_f64());
        }
        out
    }
}

fn basis(cfg: &RunConfig, cutoffs: (usize, usize), modes: usize) -> Result<FockBasis> {
    FockBasis::with_limit(modes, cutoffs.0, cutoffs.1, cfg.numerics.dimension_limit)
}

fn positive(lambdas: &[f64]) -> Vec<f64> {
    lambdas.iter().copied().filter(|&l| l > 0.0).collect()
}

/// Runs `command` and returns the finished report. Errors are reserved for
/// problems with the configuration itself; failures of the physics stages
/// are recorded in the report.
pub fn run(cfg: &RunConfig, command: Command, seed: Option<u64>) -> Result<Report> {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let model = cfg.build_model()?;
    let horizon = cfg.horizon()?;
    let mut report = Report::new(cfg, command.name(), seed);
    let mut timer = Timer {
        enabled: cfg.output.timing,
        stages: BTreeMap::new(),
    };

    let dressed = timer.time("dress", || dress(&model));
    let result = match dressed {
        Ok(r) => r,
        Err(e) => {
            report.error("dress", e.to_string());
            report.finish();
            return Ok(report);
        }
    };

    if command.dresses() {
        dress_stage(cfg, &model, &result, &mut report);
    }
    if command.verifies() {
        timer.time("verify", || verify_stage(cfg, &model, &result, seed, &mut report));
    }
    if command.scans() {
        timer.time("scan", || scan_stage(cfg, &model, &result, horizon, &mut report));
    }
    if cfg.output.timing {
        report.timing = Some(timer.stages);
    }
    report.finish();
    Ok(report)
}

/// [`run`] followed by writing the report files into `out_dir`.
pub fn run_and_emit(cfg: &RunConfig, command: Command, out_dir: &Path, seed: Option<u64>) -> Result<RunOutcome> {
    let report = run(cfg, command, seed)?;
    let files = emit_report(&report, out_dir)?;
    Ok(RunOutcome { report, files })
}

fn dress_stage(cfg: &RunConfig, model: &ModelSpec, result: &DressingResult, report: &mut Report) {
    let tol = cfg.checks.tolerances.bad_term;
    let section = DressingSection::new(model, result, tol);
    let worst_bad = result.residual_bad_terms(0.0).iter().map(|t| t.2).fold(0.0, f64::max);
    report.push(Verdict::below("bad terms left in K", worst_bad, tol));
    report.push(Verdict::below("order-1 part of K", result.k.order(1).max_abs(), 0.0));
    let mut consistency: f64 = 0.0;
    for (i, (r, removed)) in result.generators.iter().zip(&result.removed).enumerate() {
        let n = i + 1;
        let lhs = OperatorSeries::at_order(model.space().clone(), n, n, r.clone()).ad_h0();
        consistency = consistency.max(lhs.order(n).sum(removed).max_abs());
    }
    report.push(Verdict::below("generator consistency ad_H0(R_n) = -removed_n", consistency, 1e-12));
    report.dressing = Some(section);
}

fn verify_stage(cfg: &RunConfig, model: &ModelSpec, result: &DressingResult, seed: u64, report: &mut Report) {
    let checks = &cfg.checks;
    let tol = &checks.tolerances;
    let expected_slope = (result.max_order() + 1) as f64;
    let modes = model.space().len();

    if checks.self_test.enabled {
        match algebra_self_test(seed, checks.self_test.instances) {
            Ok(st) => {
                report.push(Verdict::below("algebra self-test", st.worst(), SELF_TEST_TOLERANCE));
                report.checks.self_test = Some(st);
            }
            Err(e) => report.error("verify.self_test", e.to_string()),
        }
    }

    if checks.momentum.enabled {
        let defect = momentum_commutator_defect(&result.k);
        report.push(Verdict::below("[K, P] vanishes", defect, tol.momentum));
        report.checks.momentum_defect = Some(defect);
    }

    if checks.oracle.enabled {
        let cut = checks.oracle.basis.resolve(&cfg.numerics);
        match oracle(cfg, model, result, cut, modes) {
            Ok(section) => {
                if section.lambdas.len() >= 2 {
                    report.push(Verdict::within("oracle equivalence slope", expected_slope, section.slope, tol.slope));
                }
                report.checks.oracle = Some(section);
            }
            Err(e) => report.error("verify.oracle", e.to_string()),
        }
    }

    if checks.residuals.enabled {
        let cut = checks.residuals.basis.resolve(&cfg.numerics);
        let run = |report: &mut Report| -> Result<_> {
            let b = basis(cfg, cut, modes)?;
            let wide = if checks.residuals.double_cutoff {
                match basis(cfg, (2 * cut.0, 2 * cut.1), modes) {
                    Ok(w) => Some(w),
                    Err(e @ Error::DimensionLimit { .. }) => {
                        report.warn("verify.residuals", format!("cutoff doubling skipped: {e}"));
                        None
                    }
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            eigenstate_residuals(model, result, &b, &cfg.numerics.lambdas, wide.as_ref())
        };
        match run(report) {
            Ok(rep) => {
                if let Some(i0) = rep.lambdas.iter().position(|&l| l == 0.0) {
                    let worst = rep.states.iter().map(|s| s.residuals[i0]).fold(0.0, f64::max);
                    report.push(Verdict::below("residuals at lambda = 0", worst, tol.zero_residual));
                }
                if positive(&rep.lambdas).len() >= 2 {
                    for s in &rep.states {
                        let worst = s.residuals.iter().copied().fold(0.0, f64::max);
                        if worst <= tol.zero_residual {
                            // exact eigenstate of the truncated K: no slope to fit
                            report.push(Verdict::below(format!("residual {} vanishes", s.state), worst, tol.zero_residual));
                        } else {
                            report.push(Verdict::within(
                                format!("residual slope {}", s.state),
                                expected_slope,
                                s.slope,
                                tol.slope,
                            ));
                        }
                    }
                }
                report.checks.residuals = Some(rep);
            }
            Err(e) => report.error("verify.residuals", e.to_string()),
        }
    }

    if checks.mass_shift.enabled && result.max_order() >= 2 {
        // intermediate states of a one-particle level carry up to four quanta
        let (p, t) = checks.mass_shift.basis.resolve(&cfg.numerics);
        match mass_shift(cfg, model, result, (p.max(4), t.max(4)), modes) {
            Ok(rows) => {
                for r in &rows {
                    report.push(Verdict::within(
                        format!("mass shift {}", r.mode),
                        r.perturbative,
                        r.symbolic,
                        tol.mass_shift,
                    ));
                }
                report.checks.mass_shift = Some(rows);
            }
            Err(e) => report.error("verify.mass_shift", e.to_string()),
        }
    }

    if checks.bogoliubov.enabled {
        match bogoliubov_check(checks.bogoliubov.chi, checks.bogoliubov.cutoff) {
            Ok(b) => {
                report.push(Verdict::below("Bogoliubov deviation", b.deviation, tol.bogoliubov));
                report.push(Verdict {
                    check: "Bogoliubov deviation shrinks on cutoff doubling".into(),
                    expected: b.deviation,
                    got: b.deviation_doubled,
                    tolerance: 0.0,
                    pass: b.shrinks,
                });
                report.checks.bogoliubov = Some(b);
            }
            Err(e) => report.error("verify.bogoliubov", e.to_string()),
        }
    }
}

fn oracle(
    cfg: &RunConfig,
    model: &ModelSpec,
    result: &DressingResult,
    cut: (usize, usize),
    modes: usize,
) -> Result<OracleSection> {
    let b = basis(cfg, cut, modes)?;
    let block_quanta = cfg.checks.oracle.block_quanta;
    let low = b.low_block(block_quanta);
    let lambdas = positive(&cfg.numerics.lambdas);
    let mut differences = Vec::new();
    for &l in &lambdas {
        // columns of e^{R} H e^{-R} − K on the low block, one Krylov product each
        let frame = DressedFrame::new(model, &b, Some(result), l, 0)?;
        let k = matrix_of(&result.k.evaluate(l), &b)?;
        let mut d = DMatrix::<C64>::zeros(low.len(), low.len());
        for (j, &col) in low.iter().enumerate() {
            let mut e = vec![C64::new(0.0, 0.0); b.dim()];
            e[col] = C64::new(1.0, 0.0);
            let conj = frame.undress_state(&frame.hamiltonian().matvec(&frame.dress_state(&e)));
            for (i, &row) in low.iter().enumerate() {
                d[(i, j)] = conj[row] - k.get(row, col);
            }
        }
        differences.push(spectral_norm(&d));
    }
    Ok(OracleSection {
        slope: fit_loglog_slope(&lambdas, &differences),
        lambdas,
        differences,
        block_quanta,
        per_mode_cutoff: cut.0,
        total_cutoff: cut.1,
    })
}

fn mass_shift(
    cfg: &RunConfig,
    model: &ModelSpec,
    result: &DressingResult,
    cut: (usize, usize),
    modes: usize,
) -> Result<Vec<MassShiftRow>> {
    let b = basis(cfg, cut, modes)?;
    let space = model.space();
    space
        .ids()
        .map(|m| {
            let mode = space.mode(m);
            Ok(MassShiftRow {
                mode: space.label(m),
                symbolic: extract_energy_correction(result, mode.species, &mode.k)?,
                perturbative: rspt2_shift(model, &b, mode.species, &mode.k)?,
            })
        })
        .collect()
}

fn scan_stage(cfg: &RunConfig, model: &ModelSpec, result: &DressingResult, horizon: f64, report: &mut Report) {
    let checks = &cfg.checks;
    let tol = &checks.tolerances;
    let modes = model.space().len();

    if checks.equal_time.enabled {
        let et = &checks.equal_time;
        let run = || -> Result<_> {
            let b = basis(cfg, et.basis.resolve(&cfg.numerics), modes)?;
            let opts = ScanOptions {
                block_quanta: et.block_quanta,
                horizon: Some(horizon),
                ..Default::default()
            };
            equal_time_scan(model, result, &b, &et.lambdas, &et.times, &cfg.pairs()?, &opts)
        };
        match run() {
            Ok(scan) => {
                report.push(Verdict::below("equal-time commutator", scan.max_magnitude(), tol.equal_time));
                report.checks.equal_time = Some(scan);
            }
            Err(e) => report.error("scan.equal_time", e.to_string()),
        }
    }

    if checks.spacelike.enabled {
        let sl = &checks.spacelike;
        let run = || -> Result<_> {
            let b = basis(cfg, sl.basis.resolve(&cfg.numerics), modes)?;
            let opts = ScanOptions {
                block_quanta: sl.block_quanta,
                horizon: Some(horizon),
                allow_timelike: sl.allow_timelike,
                ..Default::default()
            };
            spacelike_scan(model, result, &b, &sl.lambdas, &cfg.grid()?, &opts)
        };
        match run() {
            Ok(scan) => {
                let zero = scan
                    .rows
                    .iter()
                    .filter(|r| r.lambda == 0.0)
                    .map(|r| r.subtracted)
                    .fold(0.0, f64::max);
                report.push(Verdict::below("baseline-subtracted commutator at lambda = 0", zero, 0.0));
                // strongest spacelike signal at λ ≥ 0.1
                let best = scan
                    .rows
                    .iter()
                    .filter(|r| r.spacelike && r.lambda >= 0.1)
                    .max_by(|a, b| a.subtracted.total_cmp(&b.subtracted));
                match best {
                    Some(row) => {
                        report.push(Verdict::at_least(
                            "spacelike commutator above noise",
                            row.subtracted,
                            tol.noise_ratio * scan.noise_floor,
                        ));
                        if let Some(fit) = scan
                            .slopes
                            .iter()
                            .find(|f| f.separation == row.separation && f.tau == row.tau)
                        {
                            report.push(Verdict::within(
                                "spacelike commutator slope",
                                2.0,
                                fit.slope,
                                tol.spacelike_slope,
                            ));
                        }
                    }
                    None => report.error("scan.spacelike", "no spacelike grid point with lambda >= 0.1"),
                }
                report.checks.spacelike = Some(scan);
            }
            Err(e) => report.error("scan.spacelike", e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn quick(extra: &str) -> RunConfig {
        parse_config(&format!(
            "[model]\ninteraction = \"phi3\"\n[model.lattice]\nsites = 3\n{extra}"
        ))
        .unwrap()
    }

    #[test]
    fn dress_reports_empty_bad_table() {
        let r = run(&quick(""), Command::Dress, None).unwrap();
        let d = r.dressing.as_ref().unwrap();
        assert!(d.bad_terms.is_empty());
        assert!(!d.k_terms.is_empty());
        assert!(d.vacuum_energy_shift < 0.0);
        assert!(r.pass, "{:?}", r.failures());
    }

    #[test]
    fn verify_at_zero_coupling_passes() {
        let cfg = quick("[numerics]\nlambdas = [0.0]\n[checks.self_test]\ninstances = 5\n");
        let r = run(&cfg, Command::Verify, Some(1)).unwrap();
        assert!(r.pass, "{:?}", r.failures());
        assert!(r.verdicts.iter().any(|v| v.check == "residuals at lambda = 0"));
        assert!(!r.verdicts.iter().any(|v| v.check.starts_with("residual slope")));
    }

    #[test]
    fn weidlich_failure_is_reported() {
        let cfg = quick("");
        let mut cfg = cfg;
        cfg.model.policy = crate::dressing::Policy::Weidlich;
        let r = run(&cfg, Command::All, None).unwrap();
        assert!(!r.pass);
        assert_eq!(r.errors[0].stage, "dress");
        assert!(r.errors[0].message.contains("zero energy denominator"));
    }

    #[test]
    fn reports_are_byte_stable() {
        let cfg = quick("[checks.self_test]\ninstances = 3\n");
        let a = run(&cfg, Command::Dress, None).unwrap().to_json().unwrap();
        let b = run(&cfg, Command::Dress, None).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }
}
