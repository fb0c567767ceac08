use crate::error::{Error, Result};

/// Largest supported dimension (the 9x9 Choi matrix).
pub const MAX_DIM: usize = 9;

/// Dense real symmetric matrix, row-major.
///
/// Constructors symmetrize their input, so `get(i, j) == get(j, i)` holds
/// bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            data: vec![0.0; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        Ok(m)
    }

    /// Builds from a row-major slice, replacing each pair by its average.
    pub fn from_row_major(n: usize, values: &[f64]) -> Result<Self> {
        check_dim(n)?;
        if values.len() != n * n {
            return Err(Error::Arity {
                expected: n * n,
                got: values.len(),
            });
        }
        Self::from_fn(n, |i, j| values[i * n + j])
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        for r in rows {
            if r.as_ref().len() != n {
                return Err(Error::Arity {
                    expected: n,
                    got: r.as_ref().len(),
                });
            }
        }
        Self::from_fn(n, |i, j| rows[i].as_ref()[j])
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    f(i, i)
                } else {
                    0.5 * (f(i, j) + f(j, i))
                };
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(self * other)`; both symmetric, so this is the Frobenius product.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add(&other.scale(-1.0))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `Qᵀ M Q` for a row-major `n x k` matrix `q` (columns are the basis).
    pub fn congruence(&self, q: &[f64], k: usize) -> Result<SymMatrix> {
        let n = self.n;
        if q.len() != n * k {
            return Err(Error::Arity {
                expected: n * k,
                got: q.len(),
            });
        }
        SymMatrix::from_fn(k, |a, b| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += q[i * k + a] * self.get(i, j) * q[j * k + b];
                }
            }
            s
        })
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(n));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_on_construction() {
        let m = SymMatrix::from_row_major(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert_eq!(SymMatrix::zeros(0), Err(Error::Dimension(0)));
        assert_eq!(SymMatrix::zeros(10), Err(Error::Dimension(10)));
        assert!(matches!(
            SymMatrix::from_row_major(3, &[0.0; 8]),
            Err(Error::Arity { expected: 9, got: 8 })
        ));
    }

    #[test]
    fn congruence_projects() {
        let m = SymMatrix::diagonal(&[1.0, 2.0, 3.0]).unwrap();
        // columns e2, e3
        let q = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let p = m.congruence(&q, 2).unwrap();
        assert_eq!(p.as_slice(), &[2.0, 0.0, 0.0, 3.0]);
    }
}
