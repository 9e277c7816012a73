//! Small dense kernels: cyclic Jacobi eigensolver, rank-revealing null
//! vector and a pivoted square solve. Matrices are row-major `Vec<f64>`.

use crate::error::{Error, Result};

/// Off-diagonal Frobenius threshold for Jacobi convergence (scaled by the
/// matrix Frobenius norm when that exceeds one).
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a symmetric `n x n` matrix by cyclic Jacobi
/// rotations.
///
/// Returns `(eigenvalues, eigenvectors)` where `eigenvectors[i]` is the unit
/// eigenvector of `eigenvalues[i]`; the order is whatever the sweeps leave.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    // v is stored row-major with v[k*n + i] = component k of eigenvector i
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = norm(matrix).max(1.0);
    let tol = JACOBI_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off < tol {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = (0..n).map(|i| (0..n).map(|k| v[k * n + i]).collect()).collect();
    Ok((values, vectors))
}

/// A unit vector `z` with `N z ≈ 0` for the `rows x cols` matrix `N`, found by
/// Householder QR with column pivoting of `N^T`. Returns `None` when `N` is
/// numerically of full column rank at tolerance `tol` (relative to the
/// largest column norm).
pub fn null_vector(mat: &[f64], rows: usize, cols: usize, tol: f64) -> Option<Vec<f64>> {
    if cols == 0 {
        return None;
    }
    // work = N^T, cols x rows, row-major
    let m = cols;
    let k = rows;
    let mut w = vec![0.0; m * k];
    for i in 0..rows {
        for j in 0..cols {
            w[j * k + i] = mat[i * cols + j];
        }
    }
    let mut col_norm: Vec<f64> = (0..k).map(|c| (0..m).map(|r| w[r * k + c].powi(2)).sum::<f64>()).collect();
    let max_norm = col_norm.iter().cloned().fold(0.0_f64, f64::max).sqrt();
    let threshold = tol * max_norm.max(f64::MIN_POSITIVE);
    let mut reflectors: Vec<Vec<f64>> = Vec::new();

    let steps = m.min(k);
    let mut rank = 0;
    for step in 0..steps {
        // pivot: remaining column with the largest norm
        let (piv, _) = (step..k)
            .map(|c| (c, col_norm[c]))
            .fold((step, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if piv != step {
            for r in 0..m {
                w.swap(r * k + step, r * k + piv);
            }
            col_norm.swap(step, piv);
        }
        let x_norm = (step..m).map(|r| w[r * k + step].powi(2)).sum::<f64>().sqrt();
        if x_norm <= threshold {
            break;
        }
        let alpha = if w[step * k + step] > 0.0 { -x_norm } else { x_norm };
        let mut u: Vec<f64> = (step..m).map(|r| w[r * k + step]).collect();
        u[0] -= alpha;
        let u_norm = norm(&u);
        if u_norm > 0.0 {
            for x in &mut u {
                *x /= u_norm;
            }
        }
        for c in step..k {
            let proj: f64 = (step..m).map(|r| u[r - step] * w[r * k + c]).sum();
            for r in step..m {
                w[r * k + c] -= 2.0 * proj * u[r - step];
            }
        }
        for c in step + 1..k {
            col_norm[c] = (step + 1..m).map(|r| w[r * k + c].powi(2)).sum();
        }
        reflectors.push(u);
        rank += 1;
    }

    if rank >= m {
        return None;
    }
    // z = H_1 H_2 ... H_r e_{rank}
    let mut z = vec![0.0; m];
    z[rank] = 1.0;
    for (step, u) in reflectors.iter().enumerate().rev() {
        let proj: f64 = (step..m).map(|r| u[r - step] * z[r]).sum();
        for r in step..m {
            z[r] -= 2.0 * proj * u[r - step];
        }
    }
    Some(z)
}

/// Solves the square system `A x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` for a numerically singular matrix.
pub fn solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))?;
        if m[piv * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
            }
            x.swap(piv, col);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            if f != 0.0 {
                for c in col..n {
                    m[r * n + c] -= f * m[col * n + c];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r * n + c] * x[c]).sum();
        x[r] = (x[r] - s) / m[r * n + r];
    }
    Some(x)
}
