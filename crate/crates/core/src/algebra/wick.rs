//! Normal ordering of products by bosonic Wick contraction.
//!
//! For normal-ordered monomials `(C₁ A₁)(C₂ A₂)` only the middle pair `A₁ C₂`
//! is out of order. Distinct modes commute, so the reordering factorises over
//! the modes shared by `A₁` and `C₂`: for a mode appearing `a` times in `A₁`
//! and `c` times in `C₂`,
//!
//! ```text
//! a^a (a†)^c = Σ_j  j! C(a,j) C(c,j) (a†)^(c−j) a^(a−j)
//! ```

use smallvec::SmallVec;

use super::term::{ModeList, Signature, TermMap};
use crate::lattice::ModeId;
use crate::C64;

/// Modes shared by an annihilator list and a creator list, with multiplicities.
type Overlap = SmallVec<[(ModeId, usize, usize); 4]>;

fn overlap(annihilators: &[ModeId], creators: &[ModeId]) -> Overlap {
    let mut out = Overlap::new();
    let (mut i, mut j) = (0, 0);
    while i < annihilators.len() && j < creators.len() {
        let (x, y) = (annihilators[i], creators[j]);
        if x < y {
            i += 1;
        } else if y < x {
            j += 1;
        } else {
            let mut a = 0;
            while i < annihilators.len() && annihilators[i] == x {
                a += 1;
                i += 1;
            }
            let mut c = 0;
            while j < creators.len() && creators[j] == x {
                c += 1;
                j += 1;
            }
            out.push((x, a, c));
        }
    }
    out
}

fn merge(a: &[ModeId], b: &[ModeId]) -> ModeList {
    let mut out = ModeList::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Drops `removed[q]` copies of each overlap mode from a sorted list.
fn remove_copies(list: &[ModeId], overlap: &Overlap, removed: &[usize]) -> ModeList {
    let mut out = ModeList::with_capacity(list.len());
    let mut budget: SmallVec<[(ModeId, usize); 4]> =
        overlap.iter().zip(removed).map(|(&(m, _, _), &r)| (m, r)).collect();
    for &m in list {
        if let Some(slot) = budget.iter_mut().find(|(b, left)| *b == m && *left > 0) {
            slot.1 -= 1;
            continue;
        }
        out.push(m);
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Accumulates the normal-ordered form of `left · right · coeff` into `out`.
/// With `connected_only`, the term without any contraction is skipped.
pub(crate) fn multiply_into(
    left: &Signature,
    right: &Signature,
    coeff: C64,
    connected_only: bool,
    out: &mut TermMap,
) {
    let shared = overlap(&left.annihilators, &right.creators);
    if shared.is_empty() {
        if !connected_only {
            out.add_term(
                Signature {
                    creators: merge(&left.creators, &right.creators),
                    annihilators: merge(&left.annihilators, &right.annihilators),
                },
                coeff,
            );
        }
        return;
    }

    let limits: SmallVec<[usize; 4]> = shared.iter().map(|&(_, a, c)| a.min(c)).collect();
    let mut j: SmallVec<[usize; 4]> = SmallVec::from_elem(0, shared.len());
    loop {
        let contracted = j.iter().any(|&x| x > 0);
        if contracted || !connected_only {
            let weight: f64 = shared
                .iter()
                .zip(&j)
                .map(|(&(_, a, c), &jq)| factorial(jq) * binomial(a, jq) * binomial(c, jq))
                .product();
            let creators = merge(&left.creators, &remove_copies(&right.creators, &shared, &j));
            let annihilators = merge(&remove_copies(&left.annihilators, &shared, &j), &right.annihilators);
            out.add_term(
                Signature {
                    creators,
                    annihilators,
                },
                coeff * weight,
            );
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == j.len() {
                return;
            }
            if j[pos] < limits[pos] {
                j[pos] += 1;
                break;
            }
            j[pos] = 0;
            pos += 1;
        }
    }
}

/// Normal-ordered product of two (ungraded) term maps.
pub fn product(p: &TermMap, q: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ls, &lc) in p {
        for (rs, &rc) in q {
            multiply_into(ls, rs, lc * rc, false, &mut out);
        }
    }
    out.prune();
    out
}

/// `[p, q]`. Uncontracted products cancel between the two orderings and are
/// never formed.
pub fn commutator(p: &TermMap, q: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ls, &lc) in p {
        for (rs, &rc) in q {
            multiply_into(ls, rs, lc * rc, true, &mut out);
            multiply_into(rs, ls, -(lc * rc), true, &mut out);
        }
    }
    out.prune();
    out
}
