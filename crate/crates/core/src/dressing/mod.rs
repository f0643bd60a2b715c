//! Order-by-order construction of the dressing transformation.
//!
//! With `W = exp R`, `R = Σₙ λⁿ Rₙ` anti-Hermitian, the transformed Hamiltonian
//! `K = e^R H e^{-R}` is expanded by nested commutators. At order `n` the only
//! unknown contribution is `[Rₙ, H₀]`, so `Rₙ` is fixed by requiring that it
//! cancel the selected part of everything else at that order.

mod model;

pub use model::{phi3_kernel, scalar_yukawa_kernel, BuiltinInteraction, KernelOptions, ModelSpec, Policy};

use serde::Serialize;

use crate::algebra::{OperatorSeries, Signature, TermMap, TermType};
use crate::error::{Error, Result};
use crate::lattice::ModeSpace;
use crate::C64;

/// Energy denominators below this magnitude are treated as exact resonances.
pub const RESONANCE_TOLERANCE: f64 = 1e-8;

/// Denominators below this are listed in the diagnostics (but still solved).
pub const NEAR_RESONANCE: f64 = 0.1;

/// `Σ_{j≥0} adʲ_R(H)/j!`, truncated at order `max_order`.
///
/// `R` must have no order-0 part; then every application of `ad_R` raises the
/// lowest order by one and at most `max_order` nested commutators contribute.
pub fn bch_conjugate(r: &OperatorSeries, h: &OperatorSeries, max_order: usize) -> Result<OperatorSeries> {
    if !r.order(0).is_empty() {
        return Err(Error::InvalidModel("generator has an order-0 part".into()));
    }
    let r = r.with_max_order(max_order);
    let mut k = h.with_max_order(max_order);
    let mut nested = k.clone();
    for j in 1..=max_order {
        nested = r.commutator(&nested)?.scale(C64::new(1.0 / j as f64, 0.0));
        if nested.is_zero() {
            break;
        }
        k = k.add(&nested)?;
    }
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearResonance {
    pub order: usize,
    pub signature: String,
    pub denominator: f64,
}

/// Per-order solve with bookkeeping for the diagnostics.
struct Solved {
    generator: TermMap,
    min_denominator: f64,
    near: Vec<(Signature, f64)>,
}

fn solve(bad: &TermMap, space: &ModeSpace, order: usize, policy: Option<&'static str>) -> Result<Solved> {
    let mut resonant = Vec::new();
    let mut near = Vec::new();
    let mut min_denominator = f64::INFINITY;
    let mut generator = TermMap::new();
    for (sig, &c) in bad {
        let de = sig.energy_difference(space);
        min_denominator = min_denominator.min(de.abs());
        if de.abs() < RESONANCE_TOLERANCE {
            resonant.push(sig.display(space).to_string());
            continue;
        }
        if de.abs() < NEAR_RESONANCE {
            near.push((sig.clone(), de));
        }
        generator.add_term(sig.clone(), c / de);
    }
    if !resonant.is_empty() {
        return Err(Error::ZeroDenominator {
            policy,
            order,
            signatures: resonant,
        });
    }
    generator.prune();
    Ok(Solved {
        generator,
        min_denominator,
        near,
    })
}

/// Generator `R` with `[R, H₀] = −bad`: each term gets `c / ΔE` with
/// `ΔE = ΣE(creators) − ΣE(annihilators)`.
pub fn solve_generator(bad: &TermMap, space: &ModeSpace) -> Result<TermMap> {
    solve(bad, space, 0, None).map(|s| s.generator)
}

/// Output of [`dress`].
#[derive(Debug, Clone)]
pub struct DressingResult {
    pub policy: Policy,
    /// `R₁ … R_N`; entry `n − 1` holds `Rₙ`.
    pub generators: Vec<TermMap>,
    /// `K = e^R H e^{-R}` through order `N`.
    pub k: OperatorSeries,
    /// Terms eliminated at each order; entry `n − 1` is order `n`.
    pub removed: Vec<TermMap>,
    pub min_denominator: f64,
    pub diagnostics: Vec<NearResonance>,
}

impl DressingResult {
    pub fn max_order(&self) -> usize {
        self.generators.len()
    }

    pub fn space(&self) -> &std::sync::Arc<ModeSpace> {
        self.k.space()
    }

    /// `R` as a series with `Rₙ` at order `n`.
    pub fn generator_series(&self) -> OperatorSeries {
        let mut orders = vec![TermMap::new()];
        orders.extend(self.generators.iter().cloned());
        OperatorSeries::from_orders(self.k.space().clone(), orders)
    }

    /// `R(λ) = Σ λⁿ Rₙ`.
    pub fn generator_at(&self, lambda: f64) -> TermMap {
        self.generator_series().evaluate(lambda)
    }

    /// The c-number part of `K` at order 2 (vacuum energy shift per `λ²`).
    pub fn vacuum_energy_shift(&self) -> f64 {
        if self.max_order() < 2 {
            return 0.0;
        }
        self.k.order(2).get(&Signature::identity()).re
    }

    /// Bad terms left in `K` above `threshold`, as `(order, type, |c|)`.
    pub fn residual_bad_terms(&self, threshold: f64) -> Vec<(usize, TermType, f64)> {
        self.k
            .orders()
            .iter()
            .enumerate()
            .flat_map(|(n, t)| {
                t.iter()
                    .filter(move |(s, c)| s.term_type().is_bad() && c.norm() > threshold)
                    .map(move |(s, c)| (n, s.term_type(), c.norm()))
            })
            .collect()
    }
}

fn target_terms(policy: Policy, terms: &TermMap) -> TermMap {
    match policy {
        Policy::Shirokov => terms.filter(|s| s.term_type().is_bad()),
        Policy::Weidlich => terms.filter(|s| {
            let t = s.term_type();
            t != TermType::new(0, 0) && t != TermType::new(1, 1)
        }),
    }
}

/// Runs the dressing through `model.max_order`.
pub fn dress(model: &ModelSpec) -> Result<DressingResult> {
    let n_max = model.max_order;
    if n_max < 1 {
        return Err(Error::OrderTooLow { got: n_max, needed: 1 });
    }
    let space = model.space().clone();
    let h = model.hamiltonian();
    let mut r = OperatorSeries::zero(space.clone(), n_max);
    let mut generators = Vec::with_capacity(n_max);
    let mut removed = Vec::with_capacity(n_max);
    let mut min_denominator = f64::INFINITY;
    let mut diagnostics = Vec::new();

    for n in 1..=n_max {
        // Rₙ is still zero here, so this is Kₙ minus [Rₙ, H₀].
        let partial = bch_conjugate(&r, &h, n)?;
        let target = target_terms(model.policy, partial.order(n));
        let solved = solve(&target, &space, n, Some(model.policy.name()))?;
        min_denominator = min_denominator.min(solved.min_denominator);
        diagnostics.extend(solved.near.into_iter().map(|(s, de)| NearResonance {
            order: n,
            signature: s.display(&space).to_string(),
            denominator: de,
        }));
        r.set_order(n, solved.generator.clone());
        generators.push(solved.generator);
        removed.push(target);
    }

    let k = bch_conjugate(&r, &h, n_max)?;
    Ok(DressingResult {
        policy: model.policy,
        generators,
        k,
        removed,
        min_denominator,
        diagnostics,
    })
}

/// `Δ(k)`: the order-2 coefficient of `a†ₖaₖ` in `K`.
pub fn extract_energy_correction(result: &DressingResult, species: usize, k: &[i32]) -> Result<f64> {
    if result.max_order() < 2 {
        return Err(Error::OrderTooLow {
            got: result.max_order(),
            needed: 2,
        });
    }
    let space = result.space();
    let id = space.mode_id(species, k).ok_or_else(|| Error::InvalidMode {
        entry: 0,
        reason: format!("species {species} wavevector {k:?} is not on the lattice"),
    })?;
    let c = result.k.order(2).get(&Signature::new([id], [id]));
    if c.im.abs() >= 1e-10 {
        return Err(Error::InvalidModel(format!(
            "energy correction for {} has imaginary part {:e}",
            space.label(id),
            c.im
        )));
    }
    Ok(c.re)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::algebra::{classify, free_hamiltonian};

    fn types(t: &TermMap) -> BTreeSet<(usize, usize)> {
        t.types().into_iter().map(|t| (t.creators, t.annihilators)).collect()
    }

    #[test]
    fn zero_generator_is_identity_conjugation() {
        let m = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
        let h = m.hamiltonian();
        let r = OperatorSeries::zero(m.space().clone(), 2);
        assert_eq!(bch_conjugate(&r, &h, 2).unwrap(), h);
    }

    #[test]
    fn low_orders_match_nested_commutators() {
        let m = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap();
        let sp = m.space().clone();
        let res = dress(&m).unwrap();
        let h0 = OperatorSeries::at_order(sp.clone(), 2, 0, free_hamiltonian(&sp));
        let v = OperatorSeries::at_order(sp.clone(), 2, 0, m.interaction().clone());
        let r1 = OperatorSeries::at_order(sp.clone(), 2, 0, res.generators[0].clone());
        let r2 = OperatorSeries::at_order(sp.clone(), 2, 0, res.generators[1].clone());
        // K₁ = [R₁, H₀] + V
        let k1 = r1.commutator(&h0).unwrap().add(&v).unwrap();
        assert!(k1.sub(&OperatorSeries::at_order(sp.clone(), 2, 0, res.k.order(1).clone())).unwrap().max_abs() < 1e-15);
        assert!(res.k.order(1).is_empty());
        // K₂ = [R₂, H₀] + [R₁, V] + ½[R₁, [R₁, H₀]]
        let k2 = r2
            .commutator(&h0)
            .unwrap()
            .add(&r1.commutator(&v).unwrap())
            .unwrap()
            .add(&r1.commutator(&r1.commutator(&h0).unwrap()).unwrap().scale(C64::new(0.5, 0.0)))
            .unwrap();
        let got = OperatorSeries::at_order(sp, 2, 0, res.k.order(2).clone());
        assert!(k2.sub(&got).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn decay_vertex_generator() {
        let m = ModelSpec::phi3(3, 1.0, 1.0, 1).unwrap();
        let sp = m.space();
        let (p, n, z) = (
            sp.mode_id(0, &[1]).unwrap(),
            sp.mode_id(0, &[-1]).unwrap(),
            sp.mode_id(0, &[0]).unwrap(),
        );
        let bad = TermMap::single(Signature::new([p, n], [z]), C64::new(1.0, 0.0));
        let r = solve_generator(&bad, sp).unwrap();
        let coeff = r.get(&Signature::new([p, n], [z]));
        let expected = 1.0 / (2.0 * 2f64.sqrt() - 1.0);
        assert!((coeff.re - expected).abs() < 1e-15);
        assert!((expected - 0.5469).abs() < 1e-4);
        let check = OperatorSeries::at_order(sp.clone(), 1, 0, r).ad_h0();
        assert!(check.order(0).sum(&bad).is_empty());

        let bad = TermMap::single(Signature::new([p, n, z], []), C64::new(1.0, 0.0));
        let r = solve_generator(&bad, sp).unwrap();
        let coeff = r.get(&Signature::new([p, n, z], []));
        assert!((coeff.re - 1.0 / (2.0 * 2f64.sqrt() + 1.0)).abs() < 1e-15);
        let check = OperatorSeries::at_order(sp.clone(), 1, 0, r).ad_h0();
        assert!(check.order(0).sum(&bad).is_empty());
    }

    #[test]
    fn elastic_term_has_zero_denominator() {
        let m = ModelSpec::phi3(5, 1.0, 1.0, 1).unwrap();
        let sp = m.space();
        let (a, b) = (sp.mode_id(0, &[1]).unwrap(), sp.mode_id(0, &[2]).unwrap());
        let elastic = TermMap::single(Signature::new([a, b], [a, b]), C64::new(1.0, 0.0));
        match solve_generator(&elastic, sp) {
            Err(Error::ZeroDenominator { signatures, .. }) => assert_eq!(signatures.len(), 1),
            other => panic!("expected ZeroDenominator, got {other:?}"),
        }
    }

    #[test]
    fn first_order_removes_whole_interaction() {
        let m = ModelSpec::phi3(5, 1.0, 1.0, 1).unwrap();
        let res = dress(&m).unwrap();
        assert_eq!(res.k.order(0), &m.free_part());
        assert!(res.k.order(1).is_empty());
        assert_eq!(&res.removed[0], m.interaction());
    }

    #[test]
    fn second_order_taxonomy() {
        let m = ModelSpec::phi3(5, 1.0, 1.0, 2).unwrap();
        let res = dress(&m).unwrap();
        let k2 = types(res.k.order(2));
        assert_eq!(k2, BTreeSet::from([(0, 0), (1, 1), (2, 2)]));
        let removed = types(&res.removed[1]);
        for t in [(2, 0), (4, 0), (3, 1), (0, 2), (0, 4), (1, 3)] {
            assert!(removed.contains(&t), "{t:?} missing from {removed:?}");
        }
        assert!(removed.iter().all(|&(m, n)| TermType::new(m, n).is_bad()));
        assert!(res.vacuum_energy_shift() < 0.0);
    }

    #[test]
    fn generators_anti_hermitian_and_consistent() {
        for m in [
            ModelSpec::phi3(5, 1.0, 1.0, 3).unwrap(),
            ModelSpec::scalar_yukawa(3, 1.0, 3).unwrap(),
        ] {
            let res = dress(&m).unwrap();
            for (n, (r, removed)) in res.generators.iter().zip(&res.removed).enumerate() {
                assert!(r.anti_hermiticity_defect() < 1e-12, "order {}", n + 1);
                let ad = OperatorSeries::at_order(m.space().clone(), 1, 0, r.clone()).ad_h0();
                assert!(ad.order(0).sum(removed).max_abs() < 1e-12);
            }
            assert!(res.k.dagger().sub(&res.k).unwrap().max_abs() < 1e-10);
            assert!(res.residual_bad_terms(1e-10).is_empty());
            let classes = classify(&res.k);
            assert!(classes.keys().all(|t| t.is_good()));
        }
    }

    #[test]
    fn free_model_has_no_energy_correction() {
        let m = ModelSpec::phi3(3, 1.0, 0.0, 2).unwrap();
        let res = dress(&m).unwrap();
        for k in -1..=1 {
            assert_eq!(extract_energy_correction(&res, 0, &[k]).unwrap(), 0.0);
        }
        assert_eq!(res.k.order(0), &m.free_part());
        assert!(res.k.orders()[1..].iter().all(TermMap::is_empty));
    }

    #[test]
    fn energy_correction_needs_second_order() {
        let res = dress(&ModelSpec::phi3(3, 1.0, 1.0, 1).unwrap()).unwrap();
        assert!(matches!(
            extract_energy_correction(&res, 0, &[0]),
            Err(Error::OrderTooLow { needed: 2, .. })
        ));
    }

    #[test]
    fn weidlich_fails_on_elastic_scattering() {
        let m = ModelSpec::phi3(3, 1.0, 1.0, 2).unwrap().with_policy(Policy::Weidlich);
        match dress(&m) {
            Err(Error::ZeroDenominator { policy, order, signatures }) => {
                assert_eq!(policy, Some("weidlich"));
                assert_eq!(order, 2);
                assert!(!signatures.is_empty());
            }
            other => panic!("expected ZeroDenominator, got {other:?}"),
        }
        let first = dress(&m.clone().with_max_order(1)).unwrap();
        let shirokov = dress(&m.with_policy(Policy::Shirokov).with_max_order(1)).unwrap();
        assert!(first.k.order(1).is_empty());
        let wt = first.k.classify().into_keys().collect::<BTreeSet<_>>();
        let st = shirokov.k.classify().into_keys().collect::<BTreeSet<_>>();
        assert!(wt.is_subset(&st));
    }
}
