use num_complex::Complex64;

use super::WMatrix;
use crate::error::{Error, Result};
use crate::numerics::{min_eigenvalue, SymMatrix};

/// A 3x3 complex Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianInput {
    m: [[Complex64; 3]; 3],
}

impl HermitianInput {
    pub fn new(m: [[Complex64; 3]; 3]) -> Result<Self> {
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Hermitian input"));
        }
        let scale = 1.0 + m.iter().flatten().fold(0.0_f64, |s, z| s.max(z.norm()));
        for i in 0..3 {
            for j in i..3 {
                if (m[i][j] - m[j][i].conj()).norm() > 1e-12 * scale {
                    return Err(Error::NotHermitian { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(Self { m })
    }

    pub fn zero() -> Self {
        Self {
            m: [[Complex64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn from_real(m: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    /// `ψ ψ†`.
    pub fn rank_one(psi: [Complex64; 3]) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = psi[i] * psi[j].conj();
            }
        }
        Self { m }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: self.m.map(|r| r.map(|z| z * s)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    /// Real 6x6 form `[[Re, -Im], [Im, Re]]`; its spectrum is that of the
    /// Hermitian matrix with every eigenvalue doubled.
    pub fn realified(&self) -> SymMatrix {
        SymMatrix::from_fn(6, |r, c| {
            let z = self.m[r % 3][c % 3];
            match (r < 3, c < 3) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
        .expect("fixed dimension")
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.realified())
    }
}

/// `diag(Σ_j w_ij x_jj) - X`.
pub fn apply_map(w: &WMatrix, x: &HermitianInput) -> HermitianInput {
    let mut out = x.scale(-1.0).m;
    for (i, row) in out.iter_mut().enumerate() {
        let d: f64 = (0..3).map(|j| w.get(i, j) * x.get(j, j).re).sum();
        row[i] += Complex64::new(d, 0.0);
    }
    HermitianInput { m: out }
}
