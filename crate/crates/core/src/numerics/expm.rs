//! Matrix exponentials: dense scaling-and-squaring with a degree-13 Padé
//! approximant, and a Taylor-series action `exp(tA)v` for sparse `A`.

use nalgebra::DMatrix;

use super::sparse::SparseOperator;
use crate::C64;

/// Numerator coefficients of the [13/13] Padé approximant to `exp`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled [13/13] approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371_920_351_148_152;

fn norm_one(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = norm_one(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * C64::new(0.5f64.powi(squarings), 0.0);

    let b = |i: usize| C64::new(PADE13[i], 0.0);
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// `‖U U† − 1‖` as the largest entry.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let d = u * u.adjoint() - DMatrix::<C64>::identity(n, n);
    d.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(t·A) v` by a sub-stepped Taylor series. Each sub-step has
/// `|t|·‖A‖₁ / steps ≤ 1`, so the series terms decay factorially.
pub fn expm_multiply(a: &SparseOperator, t: C64, v: &[C64]) -> Vec<C64> {
    let norm = t.norm() * a.norm_one();
    if norm == 0.0 {
        return v.to_vec();
    }
    let steps = norm.ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut x = v.to_vec();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        for k in 1..=80 {
            term = a.matvec(&term);
            let scale = h / k as f64;
            for z in term.iter_mut() {
                *z *= scale;
            }
            for (s, z) in acc.iter_mut().zip(&term) {
                *s += z;
            }
            if vec_norm(&term) <= 1e-17 * vec_norm(&acc) {
                break;
            }
        }
        x = acc;
    }
    x
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Krylov dimension used by [`expm_multiply_hermitian`].
const KRYLOV_DIM: usize = 30;

/// `exp(-i t H) v` for Hermitian `H` by Lanczos projection. A step is
/// accepted when the standard a-posteriori bound `β_m |[e^{-itT}e₁]_m|`
/// is below `1e-14 ‖v‖`; otherwise the step is halved.
pub fn expm_multiply_hermitian(h: &SparseOperator, t: f64, v: &[C64]) -> Vec<C64> {
    let mut x = v.to_vec();
    let mut remaining = t;
    let mut dt = t;
    while remaining.abs() > 0.0 {
        if dt.abs() > remaining.abs() {
            dt = remaining;
        }
        match lanczos_step(h, dt, &x) {
            Some(y) => {
                x = y;
                remaining -= dt;
                dt *= 1.5;
            }
            None => dt *= 0.5,
        }
    }
    x
}

fn lanczos_step(h: &SparseOperator, t: f64, v: &[C64]) -> Option<Vec<C64>> {
    let beta0 = vec_norm(v);
    if beta0 == 0.0 {
        return Some(v.to_vec());
    }
    let scale = h.norm_one().max(1.0);
    let mut q: Vec<Vec<C64>> = vec![v.iter().map(|x| x / beta0).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut tail = 0.0;
    for j in 0..KRYLOV_DIM.min(h.dim()) {
        let mut w = h.matvec(&q[j]);
        alpha.push(dot(&q[j], &w).re);
        for _ in 0..2 {
            for qi in &q {
                let c = dot(qi, &w);
                w.iter_mut().zip(qi).for_each(|(a, b)| *a -= c * b);
            }
        }
        let b = vec_norm(&w);
        if b <= 1e-13 * scale {
            tail = 0.0;
            break;
        }
        tail = b;
        if j + 1 == KRYLOV_DIM.min(h.dim()) {
            break;
        }
        beta.push(b);
        q.push(w.iter().map(|x| x / b).collect());
    }
    let m = alpha.len();
    let tri = DMatrix::from_fn(m, m, |i, j| {
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
    let eig = tri.symmetric_eigen();
    // e^{-itT} e₁ = V e^{-itΛ} Vᵀ e₁
    let coeffs: Vec<C64> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| {
                    let vk = eig.eigenvectors[(0, k)];
                    C64::new(0.0, -t * eig.eigenvalues[k]).exp() * (eig.eigenvectors[(i, k)] * vk)
                })
                .sum()
        })
        .collect();
    if tail * coeffs[m - 1].norm() > 1e-14 {
        return None;
    }
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (c, qi) in coeffs.iter().zip(&q) {
        out.iter_mut().zip(qi).for_each(|(o, x)| *o += c * x * beta0);
    }
    Some(out)
}
