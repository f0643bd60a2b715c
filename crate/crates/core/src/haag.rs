//! Executable versions of the structural claims about the dressed theory:
//! eigenstate residuals, momentum commutation, equal-time locality,
//! spacelike nonlocality and the single-mode Bogoliubov rotation.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{commutator_terms, OperatorSeries, Signature, TermMap};
use crate::dressing::{DressingResult, ModelSpec};
use crate::error::{Error, Result};
use crate::lattice::{ModeId, ModeSpace};
use crate::numerics::{expm, expm_multiply_hermitian, matrix_of, spectral_norm, DressedFrame, FockBasis, SparseOperator};
use crate::C64;

/// Relative change on cutoff doubling above which a residual is flagged.
pub const CUTOFF_SENSITIVITY: f64 = 0.1;

/// `P_j = Σₖ p_j(k) a†ₖaₖ`, one map per spatial direction.
pub fn momentum_operator(space: &ModeSpace) -> Vec<TermMap> {
    (0..space.lattice().dim)
        .map(|j| {
            space
                .ids()
                .map(|m| (Signature::new([m], [m]), C64::new(space.momentum(m)[j], 0.0)))
                .collect()
        })
        .collect()
}

/// Largest coefficient of `[K, P_j]` over all directions and orders.
pub fn momentum_commutator_defect(k: &OperatorSeries) -> f64 {
    let p = momentum_operator(k.space());
    k.orders()
        .iter()
        .flat_map(|kn| p.iter().map(move |pj| commutator_terms(kn, pj).max_abs()))
        .fold(0.0, f64::max)
}

/// Least-squares slope of `ln y` against `ln x`; NaN if any `y ≤ 0`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.len() < 2 || ys.iter().any(|&y| !(y > 0.0)) {
        return f64::NAN;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn unit(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `‖(H − ⟨H⟩)ψ‖` for normalised `ψ`.
fn energy_residual(h: &SparseOperator, psi: &[C64]) -> f64 {
    let n = norm(psi);
    let psi: Vec<C64> = psi.iter().map(|x| x / n).collect();
    let hpsi = h.matvec(&psi);
    let e = dot(&psi, &hpsi).re;
    let r: Vec<C64> = hpsi.iter().zip(&psi).map(|(a, b)| a - b * e).collect();
    norm(&r)
}

#[derive(Debug, Clone, Serialize)]
pub struct StateResiduals {
    pub state: String,
    pub residuals: Vec<f64>,
    /// Same residuals on the doubled cutoff, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled: Option<Vec<f64>>,
    pub slope: f64,
    pub cutoff_sensitive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub lambdas: Vec<f64>,
    pub expected_slope: f64,
    pub states: Vec<StateResiduals>,
}

impl ResidualReport {
    pub fn vacuum(&self) -> &StateResiduals {
        &self.states[0]
    }

    pub fn worst_slope_error(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.slope - self.expected_slope).abs())
            .fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
    }
}

fn residuals_on(
    model: &ModelSpec,
    result: &DressingResult,
    basis: &FockBasis,
    lambdas: &[f64],
    states: &[(String, usize)],
) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::with_capacity(lambdas.len()); states.len()];
    for &lambda in lambdas {
        let h = matrix_of(&model.hamiltonian_at(lambda), basis)?;
        let ir = matrix_of(&result.generator_at(lambda), basis)?.scaled(C64::new(0.0, 1.0));
        for (slot, (_, idx)) in out.iter_mut().zip(states) {
            // e^{-R}|s⟩
            let psi = expm_multiply_hermitian(&ir, -1.0, &unit(basis.dim(), *idx));
            slot.push(energy_residual(&h, &psi));
        }
    }
    Ok(out)
}

/// Residuals of the dressed vacuum `e^{-R}|0⟩` and of every dressed
/// one-particle state `e^{-R} a†ₖ|0⟩` as eigenvectors of `H(λ)`.
pub fn eigenstate_residuals(
    model: &ModelSpec,
    result: &DressingResult,
    basis: &FockBasis,
    lambdas: &[f64],
    doubled: Option<&FockBasis>,
) -> Result<ResidualReport> {
    let space = model.space();
    let mut states = vec![("vacuum".to_string(), basis.vacuum())];
    for m in space.ids() {
        let idx = basis
            .one_particle(m)
            .ok_or_else(|| Error::InvalidCutoff("one-particle states lie outside the basis".into()))?;
        states.push((space.label(m), idx));
    }
    let base = residuals_on(model, result, basis, lambdas, &states)?;
    let wide = match doubled {
        Some(b2) => {
            let st: Vec<(String, usize)> = space
                .ids()
                .map(|m| (space.label(m), b2.one_particle(m).unwrap_or(usize::MAX)))
                .collect();
            if st.iter().any(|(_, i)| *i == usize::MAX) {
                return Err(Error::InvalidCutoff("one-particle states lie outside the doubled basis".into()));
            }
            let mut all = vec![("vacuum".to_string(), b2.vacuum())];
            all.extend(st);
            Some(residuals_on(model, result, b2, lambdas, &all)?)
        }
        None => None,
    };
    let fit: Vec<(f64, usize)> = lambdas.iter().copied().enumerate().filter(|(_, l)| *l > 0.0).map(|(i, l)| (l, i)).collect();
    let xs: Vec<f64> = fit.iter().map(|(l, _)| *l).collect();
    let states = states
        .into_iter()
        .enumerate()
        .map(|(s, (label, _))| {
            let r = base[s].clone();
            let ys: Vec<f64> = fit.iter().map(|(_, i)| r[*i]).collect();
            let d = wide.as_ref().map(|w| w[s].clone());
            let cutoff_sensitive = d.as_ref().is_some_and(|d| {
                r.iter()
                    .zip(d)
                    .any(|(a, b)| b.abs() > 1e-12 && ((a - b) / b).abs() > CUTOFF_SENSITIVITY)
            });
            StateResiduals {
                state: label,
                slope: fit_loglog_slope(&xs, &ys),
                residuals: r,
                doubled: d,
                cutoff_sensitive,
            }
        })
        .collect();
    Ok(ResidualReport {
        lambdas: lambdas.to_vec(),
        expected_slope: (result.max_order() + 1) as f64,
        states,
    })
}

/// One point of a commutator scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub separation: f64,
    pub tau: f64,
    pub lambda: f64,
    /// Spectral norm of the commutator restricted to the low-quanta block.
    pub magnitude: f64,
    /// `|⟨Ω|C|Ω⟩|` in the dressed vacuum `e^{-R}|0⟩`.
    pub vacuum: f64,
    /// `magnitude` at `λ = 0`.
    pub baseline: f64,
    /// Restricted norm of `C(λ) − C(0)`.
    pub subtracted: f64,
    pub spacelike: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub separation: f64,
    pub tau: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    EqualTime,
    Spacelike,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    /// Restricted block: states with at most this many bare quanta.
    pub block_quanta: usize,
    pub noise_floor: f64,
    pub rows: Vec<ScanRow>,
    pub slopes: Vec<SlopeFit>,
}

impl ScanReport {
    pub fn max_magnitude(&self) -> f64 {
        self.rows.iter().map(|r| r.magnitude).fold(0.0, f64::max)
    }
}

/// Settings shared by the commutator scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    /// Compare on states with at most this many bare quanta.
    pub block_quanta: usize,
    /// Species whose field is scanned.
    pub species: usize,
    /// Largest `|t|`; `None` keeps the frame default.
    pub horizon: Option<f64>,
    /// Compute non-spacelike grid points instead of rejecting them.
    pub allow_timelike: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            block_quanta: 1,
            species: 0,
            horizon: None,
            allow_timelike: false,
        }
    }
}

fn frame<'a>(
    model: &'a ModelSpec,
    basis: &'a FockBasis,
    result: &DressingResult,
    lambda: f64,
    opts: &ScanOptions,
) -> Result<DressedFrame<'a>> {
    let f = DressedFrame::new(model, basis, Some(result), lambda, opts.species)?;
    Ok(match opts.horizon {
        Some(h) => f.with_horizon(h),
        None => f,
    })
}

/// A pair of sites with the time offset `τ` of the first field.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub tau: f64,
}

/// `A(s,t)|v⟩` for every site `s` and every probe `v`, indexed
/// `[site][probe]`. The bare-frame images `W†v` are shared across sites.
fn field_images(frame: &DressedFrame, sites: &[Vec<usize>], t: f64, probes: &[Vec<C64>]) -> Result<Vec<Vec<Vec<C64>>>> {
    frame.check_time(t)?;
    let bare: Vec<Vec<C64>> = probes.iter().map(|v| frame.to_bare(t, v)).collect();
    sites
        .iter()
        .map(|s| {
            let a0 = frame.bare_field(s)?;
            Ok(bare.iter().map(|b| frame.from_bare(t, &a0.matvec(b))).collect())
        })
        .collect()
}

/// `⟨vᵢ|[A, B]|vⱼ⟩ = ⟨A vᵢ|B vⱼ⟩ − ⟨B vᵢ|A vⱼ⟩` for Hermitian `A`, `B`,
/// given the images `A vⱼ` and `B vⱼ`.
fn commutator_block(a: &[Vec<C64>], b: &[Vec<C64>]) -> DMatrix<C64> {
    DMatrix::from_fn(a.len(), a.len(), |i, j| dot(&a[i], &b[j]) - dot(&b[i], &a[j]))
}

/// Low-block basis vectors followed by the dressed vacuum `e^{-R}|0⟩`.
fn probes(frame: &DressedFrame, low: &[usize]) -> Vec<Vec<C64>> {
    let dim = frame.basis().dim();
    let mut v: Vec<Vec<C64>> = low.iter().map(|&j| unit(dim, j)).collect();
    v.push(frame.dress_state(&unit(dim, frame.basis().vacuum())));
    v
}

/// Splits a probe-space commutator into the low block and `|⟨Ω|C|Ω⟩|`.
fn split(full: DMatrix<C64>) -> (DMatrix<C64>, f64) {
    let n = full.nrows() - 1;
    let vac = full[(n, n)].norm();
    (full.view((0, 0), (n, n)).into_owned(), vac)
}

/// Round-trip error `‖W†W e_j − e_j‖` over the low block, scaled by the
/// squared field norm: the size of commutator entries that propagation error
/// alone could produce.
fn noise_floor(frame: &DressedFrame, sites: &[Vec<usize>], t: f64, low: &[usize]) -> Result<f64> {
    let dim = frame.basis().dim();
    let mut roundtrip: f64 = 0.0;
    for &j in low {
        let e = unit(dim, j);
        let back = frame.from_bare(t, &frame.to_bare(t, &e));
        let err: Vec<C64> = back.iter().zip(&e).map(|(a, b)| a - b).collect();
        roundtrip = roundtrip.max(norm(&err));
    }
    let mut field: f64 = 0.0;
    for s in sites {
        field = field.max(frame.bare_field(s)?.norm_one());
    }
    Ok((4.0 * roundtrip * field * field).max(f64::EPSILON))
}

/// `‖[A(x,t), A(y,t)]‖` on the low block for all requested pairs, times and
/// couplings. Equal-time commutators are conjugation invariant, so these are
/// expected to vanish at every `λ` and `t`.
pub fn equal_time_scan(
    model: &ModelSpec,
    result: &DressingResult,
    basis: &FockBasis,
    lambdas: &[f64],
    times: &[f64],
    pairs: &[(Vec<usize>, Vec<usize>)],
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let block_quanta = opts.block_quanta;
    let low = basis.low_block(block_quanta);
    let lattice = model.space().lattice();
    let mut rows = Vec::new();
    let mut floor: f64 = f64::EPSILON;
    let sites: Vec<Vec<usize>> = pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
    let mut baselines = std::collections::HashMap::new();
    let mut site_list: Vec<Vec<usize>> = Vec::new();
    for s in &sites {
        if !site_list.contains(s) {
            site_list.push(s.clone());
        }
    }
    let slot = |s: &Vec<usize>| site_list.iter().position(|x| x == s).expect("site listed");
    for &lambda in lambdas {
        let frame = frame(model, basis, result, lambda, opts)?;
        let probe = probes(&frame, &low);
        for &t in times {
            frame.check_time(t)?;
            floor = floor.max(noise_floor(&frame, &site_list, t, &low)?);
            let images = field_images(&frame, &site_list, t, &probe)?;
            for (x, y) in pairs {
                let (block, vac) = if x == y {
                    (DMatrix::zeros(low.len(), low.len()), 0.0)
                } else {
                    split(commutator_block(&images[slot(x)], &images[slot(y)]))
                };
                let magnitude = spectral_norm(&block);
                let key = (x.clone(), y.clone(), t.to_bits());
                let baseline = *baselines.entry(key).or_insert(magnitude);
                rows.push(ScanRow {
                    x: x.clone(),
                    y: y.clone(),
                    separation: lattice.min_image_distance(x, y),
                    tau: 0.0,
                    lambda,
                    magnitude,
                    vacuum: vac,
                    baseline,
                    subtracted: (magnitude - baseline).abs(),
                    spacelike: true,
                });
            }
        }
    }
    Ok(ScanReport {
        kind: ScanKind::EqualTime,
        block_quanta,
        noise_floor: floor,
        rows,
        slopes: Vec::new(),
    })
}

/// Baseline-subtracted `[A(x,τ), A(y,0)]` on spacelike grid points.
///
/// Every point must satisfy `distance(x,y) > |τ|` unless `allow_timelike`
/// is set, in which case non-spacelike points are computed and marked.
/// `λ = 0` is added to `lambdas` if absent; it supplies the baseline.
pub fn spacelike_scan(
    model: &ModelSpec,
    result: &DressingResult,
    basis: &FockBasis,
    lambdas: &[f64],
    grid: &[GridPoint],
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let block_quanta = opts.block_quanta;
    let lattice = model.space().lattice();
    for p in grid {
        let distance = lattice.min_image_distance(&p.x, &p.y);
        if distance <= p.tau.abs() && !opts.allow_timelike {
            return Err(Error::NotSpacelike {
                x: p.x.clone(),
                y: p.y.clone(),
                tau: p.tau,
                distance,
            });
        }
    }
    let mut lambdas: Vec<f64> = lambdas.to_vec();
    if !lambdas.contains(&0.0) {
        lambdas.insert(0, 0.0);
    }
    lambdas.sort_by(f64::total_cmp);
    let low = basis.low_block(block_quanta);
    let sites: Vec<Vec<usize>> = grid.iter().flat_map(|p| [p.x.clone(), p.y.clone()]).collect();
    let mut floor: f64 = f64::EPSILON;
    let mut blocks: Vec<Vec<(DMatrix<C64>, f64)>> = vec![Vec::new(); grid.len()];
    for &lambda in &lambdas {
        let frame = frame(model, basis, result, lambda, opts)?;
        let probe = probes(&frame, &low);
        for (slot, p) in blocks.iter_mut().zip(grid) {
            floor = floor.max(noise_floor(&frame, &sites, p.tau, &low)?);
            let ax = field_images(&frame, std::slice::from_ref(&p.x), p.tau, &probe)?;
            let ay = field_images(&frame, std::slice::from_ref(&p.y), 0.0, &probe)?;
            slot.push(split(commutator_block(&ax[0], &ay[0])));
        }
    }
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for (p, per_lambda) in grid.iter().zip(&blocks) {
        let separation = lattice.min_image_distance(&p.x, &p.y);
        let base = &per_lambda[0].0;
        let baseline = spectral_norm(base);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (&lambda, (block, vac)) in lambdas.iter().zip(per_lambda) {
            let subtracted = spectral_norm(&(block - base));
            if lambda > 0.0 {
                xs.push(lambda);
                ys.push(subtracted);
            }
            rows.push(ScanRow {
                x: p.x.clone(),
                y: p.y.clone(),
                separation,
                tau: p.tau,
                lambda,
                magnitude: spectral_norm(block),
                vacuum: *vac,
                baseline,
                subtracted,
                spacelike: separation > p.tau.abs(),
            });
        }
        slopes.push(SlopeFit {
            separation,
            tau: p.tau,
            slope: fit_loglog_slope(&xs, &ys),
        });
    }
    Ok(ScanReport {
        kind: ScanKind::Spacelike,
        block_quanta,
        noise_floor: floor,
        rows,
        slopes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BogoliubovReport {
    pub chi: f64,
    pub cutoff: usize,
    /// Max elementwise deviation on states with at most `cutoff/2` quanta.
    pub deviation: f64,
    /// The same at twice the cutoff.
    pub deviation_doubled: f64,
    /// Max deviation of `[b, b†]` from the identity on the block.
    pub commutator_defect: f64,
    pub shrinks: bool,
}

fn bogoliubov_deviation(chi: f64, cutoff: usize) -> Result<(f64, f64)> {
    let basis = FockBasis::new(1, cutoff, cutoff)?;
    let m = ModeId(0);
    let one = C64::new(1.0, 0.0);
    let a = matrix_of(&TermMap::single(Signature::new([], [m]), one), &basis)?.to_dense();
    let ad = a.adjoint();
    let r: TermMap = [
        (Signature::new([], [m, m]), C64::new(chi / 2.0, 0.0)),
        (Signature::new([m, m], []), C64::new(-chi / 2.0, 0.0)),
    ]
    .into_iter()
    .collect();
    let r = matrix_of(&r, &basis)?.to_dense();
    let u = expm(&r);
    let b = &u * &a * u.adjoint();
    let want = &a * C64::new(chi.cosh(), 0.0) + &ad * C64::new(chi.sinh(), 0.0);
    let low = basis.low_block(cutoff / 2);
    let diff = (&b - want).select_rows(&low).select_columns(&low);
    let deviation = diff.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let comm = &b * b.adjoint() - b.adjoint() * &b;
    let comm = comm.select_rows(&low).select_columns(&low) - DMatrix::<C64>::identity(low.len(), low.len());
    let defect = comm.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok((deviation, defect))
}

/// `e^R a e^{-R}` with `R = (χ/2)(aa − a†a†)` against `cosh χ a + sinh χ a†`.
pub fn bogoliubov_check(chi: f64, cutoff: usize) -> Result<BogoliubovReport> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff(format!("Bogoliubov check needs cutoff ≥ 2, got {cutoff}")));
    }
    let (deviation, commutator_defect) = bogoliubov_deviation(chi, cutoff)?;
    let (deviation_doubled, _) = bogoliubov_deviation(chi, 2 * cutoff)?;
    Ok(BogoliubovReport {
        chi,
        cutoff,
        deviation,
        deviation_doubled,
        commutator_defect,
        // at round-off level the comparison carries no information
        shrinks: deviation_doubled <= deviation.max(1e-13),
    })
}
