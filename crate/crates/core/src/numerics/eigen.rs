use super::{SymMatrix, Tolerance};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigen decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k*n .. (k+1)*n]`.
    vectors: Vec<f64>,
    n: usize,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n;
        SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.values[k] * self.vector(k)[i] * self.vector(k)[j])
                .sum()
        })
        .expect("dimension already validated")
    }
}

/// Cyclic Jacobi rotations until the largest off-diagonal entry falls below
/// `1e-12 * max|m|`.
pub fn eig_sym(m: &SymMatrix) -> Result<SymEigen> {
    if !m.is_finite() {
        return Err(Error::NonFinite("symmetric matrix"));
    }
    let n = m.dim();
    let mut a: Vec<f64> = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = OFF_DIAGONAL_TOL * m.max_abs();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, n, p, q, c, s, t * apq);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|i| v[i * n + k]));
    }
    Ok(SymEigen { values, vectors, n })
}

// Applies the rotation in the (p, q) plane that zeroes a[p][q].
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64, shift: f64) {
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
    a[p * n + p] -= shift;
    a[q * n + q] += shift;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(eig_sym(m)?.values[0])
}

/// `true` iff the smallest eigenvalue is at least `-eps_psd`.
pub fn is_psd(m: &SymMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol.eps_psd)
}
