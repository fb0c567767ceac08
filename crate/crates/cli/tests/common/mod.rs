//! Reference computations written directly from the definitions, kept
//! apart from the library so the acceptance checks are independent.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

pub type W = [[f64; 3]; 3];

pub fn birkhoff(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> W {
    [[a + f, b + d, c + e], [c + d, a + e, b + f], [b + e, c + f, a + d]]
}

pub fn circulant(a: f64, b: f64, c: f64) -> W {
    birkhoff(a, b, c, 0.0, 0.0, 0.0)
}

pub fn scale(w: &W) -> f64 {
    w[0].iter().sum()
}

/// `Σ_kl E_kl ⊗ Φ(E_kl)` with `Φ(X) = diag(W x) - X`, slot `3k + i`.
pub fn choi(w: &W) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(9, 9);
    for k in 0..3 {
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = if k == l && i == j { w[i][k] } else { 0.0 };
                    if i == k && j == l {
                        v -= 1.0;
                    }
                    m[(3 * k + i, 3 * l + j)] = v;
                }
            }
        }
    }
    m
}

/// Transpose of the second tensor factor.
pub fn partial_transpose(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(9, 9, |r, s| {
        let (i, k) = (r / 3, r % 3);
        let (j, l) = (s / 3, s % 3);
        m[(3 * i + l, 3 * j + k)]
    })
}

pub fn min_eig(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

pub fn hat(w: &W) -> [[f64; 3]; 3] {
    let s = scale(w);
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let wtw: f64 = (0..3).map(|k| w[k][i] * w[k][j]).sum();
            h[i][j] = s * (w[i][j] + w[j][i]) - 2.0 * wtw;
        }
    }
    h
}

/// Smaller eigenvalue of `Ŵ` on the plane orthogonal to `(1,1,1)`.
pub fn restricted_hat_min(w: &W) -> f64 {
    let h = hat(w);
    let u = [
        [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0],
        [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()],
    ];
    let q = |p: usize, r: usize| -> f64 {
        (0..3).map(|i| (0..3).map(|j| u[p][i] * h[i][j] * u[r][j]).sum::<f64>()).sum()
    };
    let m = Matrix2::new(q(0, 0), q(0, 1), q(1, 0), q(1, 1));
    SymmetricEigen::new(m).eigenvalues.min()
}

pub fn edge(w: &W, i: usize, j: usize) -> f64 {
    ((w[i][i] - 1.0) * (w[j][j] - 1.0)).max(0.0).sqrt() + (w[i][j] * w[j][i]).max(0.0).sqrt()
}

pub fn cp_harmonic(w: &W) -> f64 {
    (0..3).map(|i| 1.0 / w[i][i]).sum()
}

/// `(d, e, f)` at plane radius `r` and angle `φ`, the `d` axis at `φ = 0`.
pub fn plane_to_def(r: f64, phi: f64) -> [f64; 3] {
    let k = (2.0f64 / 3.0).sqrt() * r;
    [
        k * phi.cos(),
        k * (phi + 2.0 * std::f64::consts::PI / 3.0).cos(),
        k * (phi - 2.0 * std::f64::consts::PI / 3.0).cos(),
    ]
}
