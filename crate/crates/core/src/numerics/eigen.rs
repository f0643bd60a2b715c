//! Lowest eigenpair of a Hermitian operator.

use nalgebra::{DMatrix, DVector};

use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::C64;

/// Dimensions below this use a dense Hermitian eigensolver.
pub const DENSE_LIMIT: usize = 2000;

/// Energy gap below which the ground state is reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: Vec<C64>,
    /// `‖Hv − Ev‖`.
    pub residual: f64,
    pub degenerate: bool,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn residual(h: &SparseOperator, e: f64, v: &[C64]) -> f64 {
    let hv = h.matvec(v);
    let r: Vec<C64> = hv.iter().zip(v).map(|(a, b)| a - b * e).collect();
    norm(&r)
}

pub fn ground_state(h: &SparseOperator) -> Result<GroundState> {
    if h.dim() < DENSE_LIMIT {
        dense_ground_state(h)
    } else {
        lanczos_ground_state(h, 60, 200)
    }
}

fn dense_ground_state(h: &SparseOperator) -> Result<GroundState> {
    let eig = h.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let i0 = order[0];
    let energy = eig.eigenvalues[i0];
    let vector: Vec<C64> = eig.eigenvectors.column(i0).iter().copied().collect();
    let degenerate = order
        .get(1)
        .map(|&i1| eig.eigenvalues[i1] - energy < DEGENERACY_GAP)
        .unwrap_or(false);
    let res = residual(h, energy, &vector);
    check(h, GroundState {
        energy,
        vector,
        residual: res,
        degenerate,
    })
}

fn check(h: &SparseOperator, gs: GroundState) -> Result<GroundState> {
    let scale = h.norm_one().max(1.0);
    if gs.residual < 1e-10 * scale {
        Ok(gs)
    } else {
        Err(Error::NotConverged { residual: gs.residual })
    }
}

/// Restarted Lanczos with full reorthogonalisation; each restart begins from
/// the current Ritz vector.
fn lanczos_ground_state(h: &SparseOperator, krylov: usize, restarts: usize) -> Result<GroundState> {
    let n = h.dim();
    let m = krylov.min(n);
    let tol = 1e-10 * h.norm_one().max(1.0);
    // deterministic, generic start vector
    let mut start: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i * 7919) % 101) as f64 / 101.0, 0.0))
        .collect();
    let mut best = None;
    for _ in 0..restarts {
        let s = norm(&start);
        start.iter_mut().for_each(|x| *x /= s);
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            let mut w = h.matvec(&basis[j]);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let b = norm(&w);
            if j + 1 == m || b < 1e-14 {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            basis.push(w);
        }
        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let i0 = order[0];
        let energy = eig.eigenvalues[i0];
        let coeffs: DVector<f64> = eig.eigenvectors.column(i0).into_owned();
        let mut vector = vec![C64::new(0.0, 0.0); n];
        for (c, q) in coeffs.iter().zip(&basis) {
            vector.iter_mut().zip(q).for_each(|(x, y)| *x += y * *c);
        }
        let s = norm(&vector);
        vector.iter_mut().for_each(|x| *x /= s);
        let res = residual(h, energy, &vector);
        let degenerate = order
            .get(1)
            .map(|&i1| eig.eigenvalues[i1] - energy < DEGENERACY_GAP)
            .unwrap_or(false);
        let gs = GroundState {
            energy,
            vector: vector.clone(),
            residual: res,
            degenerate,
        };
        if res < tol {
            return Ok(gs);
        }
        best = Some(gs);
        start = vector;
    }
    Err(Error::NotConverged {
        residual: best.map(|g| g.residual).unwrap_or(f64::INFINITY),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> SparseOperator {
        SparseOperator::from_triplets(values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, C64::new(v, 0.0))))
    }

    #[test]
    fn diagonal_ground_state() {
        let gs = ground_state(&diag(&[0.0, 1.0, 2.5])).unwrap();
        assert_eq!(gs.energy, 0.0);
        assert!((gs.vector[0].norm() - 1.0).abs() < 1e-14);
        assert!(!gs.degenerate);
    }

    #[test]
    fn degenerate_pair_flagged() {
        let gs = ground_state(&diag(&[-1.0, -1.0, 3.0])).unwrap();
        assert_eq!(gs.energy, -1.0);
        assert!(gs.degenerate);
        assert!(gs.vector[2].norm() < 1e-14);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        // tridiagonal chain with complex hopping
        let n = 300;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, C64::new((i as f64 * 0.37).sin(), 0.0)));
            if i + 1 < n {
                let hop = C64::new(0.5, 0.2);
                t.push((i, i + 1, hop));
                t.push((i + 1, i, hop.conj()));
            }
        }
        let h = SparseOperator::from_triplets(n, t);
        let dense = dense_ground_state(&h).unwrap();
        let lanczos = lanczos_ground_state(&h, 60, 400).unwrap();
        assert!((dense.energy - lanczos.energy).abs() < 1e-9);
        assert!(lanczos.residual < 1e-9);
    }
}
