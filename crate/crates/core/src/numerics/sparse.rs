//! Compressed-row complex matrices and their assembly from term maps.

use nalgebra::DMatrix;

use super::basis::FockBasis;
use crate::algebra::TermMap;
use crate::error::{Error, Result};
use crate::C64;

/// Square CSR matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))))
    }

    /// Duplicate entries are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            rows[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut v = C64::new(0.0, 0.0);
                while i < row.len() && row[i].0 == c {
                    v += row[i].1;
                    i += 1;
                }
                if v != C64::new(0.0, 0.0) {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            dim,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<C64>, tol: f64) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        Self::from_triplets(
            n,
            (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, m[(r, c)]))
                .filter(|(_, _, v)| v.norm() > tol),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * alpha).collect(),
            ..self.clone()
        }
    }

    /// `self + alpha · other`.
    pub fn add_scaled(&self, other: &Self, alpha: C64) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(
            self.dim,
            self.triplets().chain(other.triplets().map(|(r, c, v)| (r, c, v * alpha))),
        )
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.dim];
        for (_, c, v) in self.triplets() {
            cols[c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.add_scaled(&self.adjoint(), C64::new(-1.0, 0.0)).max_abs()
    }

    /// Largest entry of `|A + A†|`.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        self.add_scaled(&self.adjoint(), C64::new(1.0, 0.0)).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Dense sub-block on the given rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

/// Matrix of a normal-ordered polynomial on a truncated basis.
///
/// Each monomial acts as written: annihilators first (`√n`), then creators
/// (`√(n+1)`). An application that leaves the basis yields zero.
pub fn matrix_of(terms: &TermMap, basis: &FockBasis) -> Result<SparseOperator> {
    if let Some(m) = terms.max_mode() {
        if m.index() >= basis.n_modes() {
            return Err(Error::UnknownMode {
                mode: m.index(),
                modes: basis.n_modes(),
            });
        }
    }
    let per_mode = basis.per_mode_cutoff();
    let total_cap = basis.total_cutoff();
    let mut triplets = Vec::new();
    let mut occ: Vec<u8> = Vec::with_capacity(basis.n_modes());
    for col in 0..basis.dim() {
        let start = basis.state(col);
        let start_total = basis.quanta(col);
        'term: for (sig, &coeff) in terms {
            occ.clear();
            occ.extend_from_slice(start);
            let mut amp = 1.0;
            let mut total = start_total;
            for &m in &sig.annihilators {
                let n = occ[m.index()];
                if n == 0 {
                    continue 'term;
                }
                amp *= (n as f64).sqrt();
                occ[m.index()] = n - 1;
                total -= 1;
            }
            for &m in &sig.creators {
                let n = occ[m.index()] as usize;
                if n + 1 > per_mode || total + 1 > total_cap {
                    continue 'term;
                }
                amp *= ((n + 1) as f64).sqrt();
                occ[m.index()] += 1;
                total += 1;
            }
            let row = basis.index_of(&occ).expect("state within cutoffs is enumerated");
            triplets.push((row, col, coeff * amp));
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), triplets))
}

pub fn dense_commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}

/// Largest entry of `|m|`.
pub fn dense_max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Spectral norm via singular values.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}
