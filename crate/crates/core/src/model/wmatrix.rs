use serde::{Deserialize, Serialize};

use super::BirkhoffParams;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;

/// A 3x3 nonnegative matrix whose rows and columns all sum to the same
/// value `w`, i.e. `W / w` is doubly stochastic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WMatrixRepr", into = "WMatrixRepr")]
pub struct WMatrix {
    entries: [[f64; 3]; 3],
    w: f64,
}

/// JSON form: row-major entries plus an optional declared sum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WMatrixRepr {
    pub entries: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
}

impl TryFrom<WMatrixRepr> for WMatrix {
    type Error = Error;

    fn try_from(r: WMatrixRepr) -> Result<Self> {
        WMatrix::from_row_major(&r.entries, r.w, &Tolerance::default())
    }
}

impl From<WMatrix> for WMatrixRepr {
    fn from(m: WMatrix) -> Self {
        WMatrixRepr {
            entries: m.row_major().to_vec(),
            w: Some(m.w),
        }
    }
}

impl WMatrix {
    pub fn new(entries: [[f64; 3]; 3], tol: &Tolerance) -> Result<Self> {
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("W entries"));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < -tol.eps_eq {
                    return Err(Error::NegativeEntry {
                        row: i + 1,
                        col: j + 1,
                        value: v,
                    });
                }
            }
        }
        let row_sums: Vec<f64> = entries.iter().map(|r| r.iter().sum()).collect();
        let reference = row_sums[0];
        let slack = tol.eps_eq * (1.0 + reference.abs());
        for (i, &s) in row_sums.iter().enumerate() {
            if (s - reference).abs() > slack {
                return Err(Error::NotDoublyStochastic {
                    kind: "row",
                    index: i + 1,
                    sum: s,
                    expected: reference,
                });
            }
        }
        for j in 0..3 {
            let s: f64 = (0..3).map(|i| entries[i][j]).sum();
            if (s - reference).abs() > slack {
                return Err(Error::NotDoublyStochastic {
                    kind: "column",
                    index: j + 1,
                    sum: s,
                    expected: reference,
                });
            }
        }
        let w = row_sums.iter().sum::<f64>() / 3.0;
        Ok(Self { entries, w })
    }

    pub fn from_row_major(values: &[f64], declared_w: Option<f64>, tol: &Tolerance) -> Result<Self> {
        if values.len() != 9 {
            return Err(Error::Arity {
                expected: 9,
                got: values.len(),
            });
        }
        let mut e = [[0.0; 3]; 3];
        for (k, &v) in values.iter().enumerate() {
            e[k / 3][k % 3] = v;
        }
        let m = Self::new(e, tol)?;
        if let Some(d) = declared_w {
            if !d.is_finite() || (d - m.w).abs() > tol.eps_eq * (1.0 + m.w.abs()) {
                return Err(Error::DeclaredSum {
                    declared: d,
                    actual: m.w,
                });
            }
        }
        Ok(m)
    }

    /// `[[a, b, c], [c, a, b], [b, c, a]]`.
    pub fn circulant(a: f64, b: f64, c: f64, tol: &Tolerance) -> Result<Self> {
        Self::new([[a, b, c], [c, a, b], [b, c, a]], tol)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn row_major(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for k in 0..9 {
            out[k] = self.entries[k / 3][k % 3];
        }
        out
    }

    /// Common row and column sum.
    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.entries[i][i]).sum()
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.entries[0][0], self.entries[1][1], self.entries[2][2]]
    }

    /// Gauge-fixed Birkhoff parameters (`d + e + f = 0`).
    pub fn gauge(&self) -> BirkhoffParams {
        super::birkhoff_from_w(self)
    }

    /// Whether some index decouples from the other two, i.e. `W` is block
    /// diagonal under a simultaneous row/column permutation.
    ///
    /// Returns the decoupled index (0-based).
    pub fn block_diagonal_index(&self, tol: &Tolerance) -> Option<usize> {
        (0..3).find(|&i| {
            (0..3)
                .filter(|&j| j != i)
                .all(|j| self.entries[i][j] < tol.eps_eq && self.entries[j][i] < tol.eps_eq)
        })
    }

    pub fn is_block_diagonal(&self, tol: &Tolerance) -> bool {
        self.block_diagonal_index(tol).is_some()
    }

    /// Equal to its own circulant average within `eps_eq`.
    pub fn is_circulant(&self, tol: &Tolerance) -> bool {
        let g = self.gauge();
        let slack = tol.eps_eq * (1.0 + self.w.abs());
        g.d().abs() <= slack && g.e().abs() <= slack && g.f().abs() <= slack
    }
}
