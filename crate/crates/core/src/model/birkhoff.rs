use serde::{Deserialize, Serialize};

use super::WMatrix;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;

/// Circulant part `(a, b, c)` plus the perturbation `(d, e, f)` along the
/// three transposition-type permutation matrices, in the gauge
/// `d + e + f = 0`.
///
/// ```text
/// W = [[a+f, b+d, c+e],
///      [c+d, a+e, b+f],
///      [b+e, c+f, a+d]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BirkhoffRepr", into = "BirkhoffRepr")]
pub struct BirkhoffParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    f: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirkhoffRepr {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl TryFrom<BirkhoffRepr> for BirkhoffParams {
    type Error = Error;

    fn try_from(r: BirkhoffRepr) -> Result<Self> {
        BirkhoffParams::new(r.a, r.b, r.c, r.d, r.e, r.f, &Tolerance::default())
    }
}

impl From<BirkhoffParams> for BirkhoffRepr {
    fn from(p: BirkhoffParams) -> Self {
        BirkhoffRepr {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            e: p.e,
            f: p.f,
        }
    }
}

impl BirkhoffParams {
    /// Strict constructor: requires the gauge and nonnegative entries.
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, tol: &Tolerance) -> Result<Self> {
        let p = Self { a, b, c, d, e, f };
        if p.as_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Birkhoff parameters"));
        }
        let gauge = d + e + f;
        if gauge.abs() > tol.eps_eq * (1.0 + a.abs() + b.abs() + c.abs()) {
            return Err(Error::Gauge(gauge));
        }
        p.check_entries(tol)?;
        Ok(p)
    }

    /// Accepts any gauge and shifts `ξ = (d + e + f) / 3` into the circulant part.
    pub fn from_any_gauge(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, tol: &Tolerance) -> Result<Self> {
        let xi = (d + e + f) / 3.0;
        let (d, e) = (d - xi, e - xi);
        // close the gauge exactly
        Self::new(a + xi, b + xi, c + xi, d, e, -(d + e), tol)
    }

    pub fn circulant(a: f64, b: f64, c: f64) -> Self {
        Self {
            a,
            b,
            c,
            d: 0.0,
            e: 0.0,
            f: 0.0,
        }
    }

    pub(crate) fn unchecked(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn e(&self) -> f64 {
        self.e
    }
    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// `w = a + b + c` in this gauge.
    pub fn w(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        let Self { a, b, c, d, e, f } = *self;
        [
            [a + f, b + d, c + e],
            [c + d, a + e, b + f],
            [b + e, c + f, a + d],
        ]
    }

    fn check_entries(&self, tol: &Tolerance) -> Result<()> {
        for (i, row) in self.entries().iter().enumerate() {
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
        Ok(())
    }
}

pub fn w_from_birkhoff(p: &BirkhoffParams, tol: &Tolerance) -> Result<WMatrix> {
    p.check_entries(tol)?;
    WMatrix::new(p.entries(), tol)
}

/// `a = Tr W / 3`, then `f, e, d` from the diagonal and `b, c` from the
/// first row.
pub fn birkhoff_from_w(m: &WMatrix) -> BirkhoffParams {
    let a = m.trace() / 3.0;
    let f = m.get(0, 0) - a;
    let e = m.get(1, 1) - a;
    let d = m.get(2, 2) - a;
    let b = m.get(0, 1) - d;
    let c = m.get(0, 2) - e;
    BirkhoffParams::unchecked(a, b, c, d, e, f)
}

/// `(W + S W Sᵀ + Sᵀ W S) / 3` with `S e_i = e_{i+1}`.
pub fn circulant_average(m: &WMatrix, tol: &Tolerance) -> Result<WMatrix> {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // (S W Sᵀ)_{ij} = W_{i-1, j-1}; (Sᵀ W S)_{ij} = W_{i+1, j+1}
            *v = (m.get(i, j) + m.get((i + 2) % 3, (j + 2) % 3) + m.get((i + 1) % 3, (j + 1) % 3)) / 3.0;
        }
    }
    WMatrix::new(out, tol)
}

/// `|w_ij - w_ji|`, which is the same for every pair `i != j`.
pub fn delta(m: &WMatrix, tol: &Tolerance) -> Result<f64> {
    let pairs = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (m.get(i, j) - m.get(j, i)).abs());
    let slack = tol.eps_eq * (1.0 + m.w().abs());
    let spread = pairs.iter().fold(f64::MIN, |a, &b| a.max(b)) - pairs.iter().fold(f64::MAX, |a, &b| a.min(b));
    if spread > slack {
        return Err(Error::Consistency(format!(
            "asymmetries {pairs:?} differ; W is not doubly stochastic"
        )));
    }
    Ok(pairs[0])
}
