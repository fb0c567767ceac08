//! Decomposability of `Φ_W`: a map is decomposable when its Choi matrix
//! splits as `A + (id⊗T) B` with `A, B` PSD.
//!
//! The sufficient condition comes with an explicit split; the necessary
//! condition comes with a PPT witness `X` whose trace against the Choi
//! matrix goes negative. For circulant-averaged `W`, non-decomposability of
//! the average carries over to `W`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{choi_matrix, circulant_average, partial_transpose, WMatrix, DIAGONAL_SLOTS};
use crate::numerics::{SymMatrix, Tolerance};
use crate::positivity::{circulant_positive, is_completely_positive, PositivityVerdict};
use crate::Ternary;

/// Pairs `(i, j)` with the Choi slots `3i + j` and `3j + i` they couple
/// under the partial transpose.
const SPLIT_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn ser_matrix<S: Serializer>(m: &SymMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_slice().serialize(s)
}

/// `Φ̂_W = A + (id⊗T) B`; matrices serialize row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    #[serde(rename = "A", serialize_with = "ser_matrix")]
    pub a: SymMatrix,
    #[serde(rename = "B", serialize_with = "ser_matrix")]
    pub b: SymMatrix,
    /// `max |Φ̂_W - A - (id⊗T) B|`.
    pub residual: f64,
}

fn u_vec(w: &WMatrix) -> [f64; 3] {
    w.diagonal().map(|d| (d - 1.0).max(0.0).sqrt())
}

/// `w_ij w_ji >= ((√((w_ii-1)(w_jj-1)) - 2) / 2)²` for every pair; false when
/// a diagonal entry is below 1.
pub fn sufficient_condition(w: &WMatrix, tol: &Tolerance) -> bool {
    if w.diagonal().iter().any(|&d| d < 1.0 - tol.eps_eq) {
        return false;
    }
    let u = u_vec(w);
    SPLIT_PAIRS.iter().all(|&(i, j)| {
        let rhs = ((u[i] * u[j] - 2.0) / 2.0).powi(2);
        w.get(i, j) * w.get(j, i) >= rhs - tol.eps_eq * (1.0 + rhs)
    })
}

/// The explicit split: `A` is `diag(w_ii - 1)` with `a_ij = -½ u_i u_j` on
/// slots 0, 4, 8 (`u_i = √(w_ii - 1)`), `B` carries the remaining diagonal
/// and `b_ij = ½ u_i u_j - 1` on the slot pairs `(3i+j, 3j+i)`.
pub fn build_decomposition(w: &WMatrix, tol: &Tolerance) -> Result<Decomposition> {
    if !sufficient_condition(w, tol) {
        return Err(Error::NotDecomposableBySplit);
    }
    let choi = choi_matrix(w).into_inner();
    let u = u_vec(w);
    let mut a = SymMatrix::zeros(9)?;
    for (i, &si) in DIAGONAL_SLOTS.iter().enumerate() {
        for (j, &sj) in DIAGONAL_SLOTS.iter().enumerate() {
            let v = if i == j { w.get(i, i) - 1.0 } else { -0.5 * u[i] * u[j] };
            a.set(si, sj, v);
        }
    }
    let mut b = SymMatrix::zeros(9)?;
    for s in 0..9 {
        if !DIAGONAL_SLOTS.contains(&s) {
            b.set(s, s, choi.get(s, s));
        }
    }
    for &(i, j) in &SPLIT_PAIRS {
        b.set(3 * i + j, 3 * j + i, 0.5 * u[i] * u[j] - 1.0);
    }
    let residual = choi.max_abs_diff(&a.add(&partial_transpose(&b)));
    Ok(Decomposition { a, b, residual })
}

/// `Σ w_ii + 2 Σ_{i<j} √(w_ij w_ji) - 9`, the infimum over `ε` of
/// [`witness_trace`]; the condition holds when it is nonnegative.
pub fn necessary_condition(w: &WMatrix, tol: &Tolerance) -> (bool, f64) {
    let value = w.trace() + 2.0 * SPLIT_PAIRS.iter().map(|&(i, j)| (w.get(i, j) * w.get(j, i)).sqrt()).sum::<f64>() - 9.0;
    (value >= -tol.eps_eq * (1.0 + w.w()), value)
}

/// The witness: ones on the slot-{0,4,8} block, and diagonal
/// `(1,1) = ε₁`, `(2,2) = 1/ε₂`, `(3,3) = 1/ε₁`, `(5,5) = ε₃`, `(6,6) = ε₂`,
/// `(7,7) = 1/ε₃`. Both `X` and its partial transpose are PSD.
pub fn witness_matrix(eps: [f64; 3]) -> Result<SymMatrix> {
    check_eps(eps)?;
    let [e1, e2, e3] = eps;
    let mut x = SymMatrix::zeros(9)?;
    for &s in &DIAGONAL_SLOTS {
        for &t in &DIAGONAL_SLOTS {
            x.set(s, t, 1.0);
        }
    }
    for (s, v) in [(1, e1), (2, 1.0 / e2), (3, 1.0 / e1), (5, e3), (6, e2), (7, 1.0 / e3)] {
        x.set(s, s, v);
    }
    Ok(x)
}

fn check_eps(eps: [f64; 3]) -> Result<()> {
    if eps.iter().any(|e| !e.is_finite() || *e <= 0.0) {
        return Err(Error::Epsilon(eps));
    }
    Ok(())
}

/// `Tr(Φ̂_W X) = Σ w_ii + (ε₁w₂₁ + w₁₂/ε₁) + (ε₂w₁₃ + w₃₁/ε₂) + (ε₃w₃₂ + w₂₃/ε₃) - 9`,
/// cross-checked against the 9x9 trace.
pub fn witness_trace(w: &WMatrix, eps: [f64; 3]) -> Result<f64> {
    check_eps(eps)?;
    let [e1, e2, e3] = eps;
    let g = |i: usize, j: usize| w.get(i - 1, j - 1);
    let formula = w.trace() + (e1 * g(2, 1) + g(1, 2) / e1) + (e2 * g(1, 3) + g(3, 1) / e2) + (e3 * g(3, 2) + g(2, 3) / e3)
        - 9.0;
    let x = witness_matrix(eps)?;
    let direct = choi_matrix(w).matrix().trace_product(&x);
    let scale = 1.0 + x.max_abs() * w.w();
    if (formula - direct).abs() > 1e-12 * scale {
        return Err(Error::Consistency(format!(
            "witness trace formula {formula} disagrees with the matrix trace {direct}"
        )));
    }
    Ok(formula)
}

/// `ε = (√(w₁₂/w₂₁), √(w₃₁/w₁₃), √(w₂₃/w₃₂))`, or `None` if some ratio is
/// zero or undefined.
pub fn optimal_epsilon(w: &WMatrix) -> Option<[f64; 3]> {
    let eps = [(0, 1, 1, 0), (2, 0, 0, 2), (1, 2, 2, 1)].map(|(i, j, k, l)| (w.get(i, j) / w.get(k, l)).sqrt());
    eps.iter().all(|e| e.is_finite() && *e > 0.0).then_some(eps)
}

/// Whether the infimum over `ε` is a minimum: fails when exactly one of
/// `w_ij`, `w_ji` vanishes for some pair.
pub fn infimum_attained(w: &WMatrix) -> bool {
    SPLIT_PAIRS.iter().all(|&(i, j)| (w.get(i, j) > 0.0) == (w.get(j, i) > 0.0))
}

/// Non-decomposability inherited from the circulant average `C`: true when
/// `Φ_C` is positive with `a < 3` and `bc < ((3 - a)/2)²`.
pub fn circulant_reduction(w: &WMatrix, tol: &Tolerance) -> Result<bool> {
    let c = circulant_average(w, tol)?;
    let (a, b, cc) = (c.get(0, 0), c.get(0, 1), c.get(0, 2));
    let bound = ((3.0 - a) / 2.0).powi(2);
    Ok(a < 3.0 - tol.eps_eq && b * cc < bound - tol.eps_eq * (1.0 + bound) && circulant_positive(a, b, cc, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposable {
    Yes,
    No,
    Unknown,
    /// The map is not positive.
    NotApplicable,
}

impl Decomposable {
    pub fn as_str(self) -> &'static str {
        match self {
            Decomposable::Yes => "yes",
            Decomposable::No => "no",
            Decomposable::Unknown => "unknown",
            Decomposable::NotApplicable => "not_applicable",
        }
    }
}

impl std::fmt::Display for Decomposable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposabilityVerdict {
    pub decomposable: Decomposable,
    pub sufficient_holds: bool,
    pub necessary_holds: bool,
    pub circulant_nondecomposable: bool,
    pub decomposition: Option<Decomposition>,
    /// Infimum over `ε` of the witness trace.
    pub witness_value: f64,
    pub optimal_epsilon: Option<[f64; 3]>,
    pub infimum_attained: bool,
}

/// Combine the three routes: CP gives `yes` with `B = 0`, the split gives
/// `yes` with a certificate, a negative witness value or the circulant route
/// gives `no`, and anything else is `unknown`.
pub fn classify_decomposability(w: &WMatrix, pv: &PositivityVerdict, tol: &Tolerance) -> Result<DecomposabilityVerdict> {
    decide(w, pv.cp, pv.positive, tol)
}

/// [`classify_decomposability`] from the bare positivity outcome.
pub fn decide(w: &WMatrix, cp: bool, positive: Ternary, tol: &Tolerance) -> Result<DecomposabilityVerdict> {
    let sufficient_holds = sufficient_condition(w, tol);
    let (necessary_holds, witness_value) = necessary_condition(w, tol);
    let circulant_nondecomposable = circulant_reduction(w, tol)?;
    let mut verdict = DecomposabilityVerdict {
        decomposable: Decomposable::Unknown,
        sufficient_holds,
        necessary_holds,
        circulant_nondecomposable,
        decomposition: None,
        witness_value,
        optimal_epsilon: optimal_epsilon(w),
        infimum_attained: infimum_attained(w),
    };
    if positive == Ternary::No {
        verdict.decomposable = Decomposable::NotApplicable;
    } else if cp || is_completely_positive(w, tol) {
        let a = choi_matrix(w).into_inner();
        verdict.decomposition = Some(Decomposition {
            a,
            b: SymMatrix::zeros(9)?,
            residual: 0.0,
        });
        verdict.decomposable = Decomposable::Yes;
    } else if sufficient_holds {
        verdict.decomposition = Some(build_decomposition(w, tol)?);
        verdict.decomposable = Decomposable::Yes;
    } else if !necessary_holds || circulant_nondecomposable {
        verdict.decomposable = Decomposable::No;
    }
    Ok(verdict)
}
