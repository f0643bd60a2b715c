//! Occupation-number basis under per-mode and total-quanta cutoffs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::ModeId;

pub const DEFAULT_DIMENSION_LIMIT: usize = 200_000;

pub type Occupation = Vec<u8>;

/// Enumerated Fock states, graded by total quanta; within one grade the
/// occupation vectors run in descending lexicographic order (`20, 11, 02`).
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_modes: usize,
    per_mode_cutoff: usize,
    total_cutoff: usize,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

/// Number of occupation vectors of `modes` slots with exactly `total` quanta,
/// none above `cap`.
fn count_exact(modes: usize, cap: usize, total: usize) -> usize {
    // dp[t] = number of vectors over the modes seen so far with sum t
    let mut dp = vec![0usize; total + 1];
    dp[0] = 1;
    for _ in 0..modes {
        let mut next = vec![0usize; total + 1];
        for (t, &ways) in dp.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for n in 0..=cap.min(total - t) {
                next[t + n] = next[t + n].saturating_add(ways);
            }
        }
        dp = next;
    }
    dp[total]
}

pub fn basis_dimension(n_modes: usize, per_mode_cutoff: usize, total_cutoff: usize) -> usize {
    (0..=total_cutoff)
        .map(|t| count_exact(n_modes, per_mode_cutoff, t))
        .fold(0usize, usize::saturating_add)
}

fn enumerate_grade(n_modes: usize, cap: usize, total: usize, prefix: &mut Occupation, out: &mut Vec<Occupation>) {
    let slot = prefix.len();
    if slot == n_modes {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let remaining_capacity = (n_modes - slot - 1) * cap;
    let hi = cap.min(total);
    let lo = total.saturating_sub(remaining_capacity);
    for n in (lo..=hi).rev() {
        prefix.push(n as u8);
        enumerate_grade(n_modes, cap, total - n, prefix, out);
        prefix.pop();
    }
}

impl FockBasis {
    pub fn new(n_modes: usize, per_mode_cutoff: usize, total_cutoff: usize) -> Result<Self> {
        Self::with_limit(n_modes, per_mode_cutoff, total_cutoff, DEFAULT_DIMENSION_LIMIT)
    }

    pub fn with_limit(n_modes: usize, per_mode_cutoff: usize, total_cutoff: usize, limit: usize) -> Result<Self> {
        if per_mode_cutoff > u8::MAX as usize {
            return Err(Error::InvalidCutoff(format!(
                "per-mode cutoff {per_mode_cutoff} exceeds {}",
                u8::MAX
            )));
        }
        let dimension = basis_dimension(n_modes, per_mode_cutoff, total_cutoff);
        if dimension > limit {
            return Err(Error::DimensionLimit { dimension, limit });
        }
        let mut states = Vec::with_capacity(dimension);
        for t in 0..=total_cutoff {
            enumerate_grade(n_modes, per_mode_cutoff, t, &mut Vec::with_capacity(n_modes), &mut states);
        }
        debug_assert_eq!(states.len(), dimension);
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self {
            n_modes,
            per_mode_cutoff,
            total_cutoff,
            states,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn per_mode_cutoff(&self) -> usize {
        self.per_mode_cutoff
    }

    pub fn total_cutoff(&self) -> usize {
        self.total_cutoff
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    pub fn quanta(&self, i: usize) -> usize {
        self.states[i].iter().map(|&n| n as usize).sum()
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    /// Index of `a†_m |0⟩`, if the cutoffs admit it.
    pub fn one_particle(&self, m: ModeId) -> Option<usize> {
        let mut occ = vec![0u8; self.n_modes];
        *occ.get_mut(m.index())? = 1;
        self.index_of(&occ)
    }

    /// Indices of states with at most `max_quanta` quanta.
    pub fn low_block(&self, max_quanta: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.quanta(i) <= max_quanta).collect()
    }

    /// States at least `margin` quanta below both cutoffs.
    pub fn interior(&self, margin: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                self.quanta(i) + margin <= self.total_cutoff
                    && self.states[i].iter().all(|&n| n as usize + margin <= self.per_mode_cutoff)
            })
            .collect()
    }

    pub fn label(&self, i: usize) -> String {
        let s: Vec<String> = self.states[i].iter().map(|n| n.to_string()).collect();
        format!("|{}⟩", s.join(""))
    }
}
