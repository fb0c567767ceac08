//! Complete positivity and positivity of `Φ_W`.
//!
//! Positivity is decided on rank-one inputs `ψψ†`; with `x_i = |ψ_i|²` and
//! `z = W x` the question becomes whether every principal minor of
//! `diag(z) - ψψ†` is nonnegative on the probability simplex. The simplex
//! splits into vertices, edges and interior, each giving one family of
//! conditions. Under the Hessian gate (`Ŵ` PSD with kernel `span{1}`) the
//! interior maximum of `f(x) = Σ x_i / z_i` sits at the centre, and the three
//! families are also sufficient.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{delta, WMatrix};
use crate::numerics::{eig_sym, SymMatrix, Tolerance};
use crate::oracles::{find_violation, SearchDepth, Witness};
use crate::Ternary;

/// Unordered index pairs `(1,2)`, `(1,3)`, `(2,3)` (0-based).
pub const EDGE_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

// Orthonormal basis of the plane orthogonal to (1,1,1), row-major 3x2.
const PERP_BASIS: [f64; 6] = [
    std::f64::consts::FRAC_1_SQRT_2,
    0.408_248_290_463_863,
    -std::f64::consts::FRAC_1_SQRT_2,
    0.408_248_290_463_863,
    0.0,
    -0.816_496_580_927_726,
];

/// The 3x3 block of the Choi matrix on slots 0, 4, 8:
/// `diag(w_ii - 1)` with `-1` off the diagonal.
pub fn cp_test_matrix(w: &WMatrix) -> SymMatrix {
    SymMatrix::from_fn(3, |i, j| if i == j { w.get(i, i) - 1.0 } else { -1.0 }).expect("fixed dimension")
}

/// `Σ 1/w_ii <= 1`, i.e. the harmonic mean of the diagonal is at least 3.
pub fn is_completely_positive(w: &WMatrix, tol: &Tolerance) -> bool {
    let diag = w.diagonal();
    if diag.iter().any(|&d| d <= 0.0) {
        return false;
    }
    diag.iter().map(|d| 1.0 / d).sum::<f64>() <= 1.0 + tol.eps_eq
}

/// `w_ii >= 1`.
pub fn vertex_conditions(w: &WMatrix, tol: &Tolerance) -> [bool; 3] {
    w.diagonal().map(|d| d >= 1.0 - tol.eps_eq)
}

/// `√((w_ii-1)(w_jj-1)) + √(w_ij w_ji)`, or `None` when a vertex condition
/// of the pair fails.
pub fn edge_value(w: &WMatrix, i: usize, j: usize, tol: &Tolerance) -> Option<f64> {
    let (ui, uj) = (w.get(i, i) - 1.0, w.get(j, j) - 1.0);
    if ui < -tol.eps_eq || uj < -tol.eps_eq {
        return None;
    }
    Some((ui.max(0.0) * uj.max(0.0)).sqrt() + (w.get(i, j).max(0.0) * w.get(j, i).max(0.0)).sqrt())
}

/// One flag per pair in [`EDGE_PAIRS`] order.
pub fn edge_conditions(w: &WMatrix, tol: &Tolerance) -> [bool; 3] {
    EDGE_PAIRS.map(|(i, j)| edge_value(w, i, j, tol).is_some_and(|v| v >= 1.0 - tol.eps_eq))
}

/// `w >= 3`, the value of `f` at the centre of the simplex being `3 / w`.
pub fn interior_condition(w: &WMatrix, tol: &Tolerance) -> bool {
    w.w() >= 3.0 - tol.eps_eq
}

/// `Ŵ = w (W + Wᵀ) - 2 WᵀW`.
pub fn hessian_matrix(w: &WMatrix) -> SymMatrix {
    let s = w.w();
    SymMatrix::from_fn(3, |i, j| {
        let wtw: f64 = (0..3).map(|k| w.get(k, i) * w.get(k, j)).sum();
        s * (w.get(i, j) + w.get(j, i)) - 2.0 * wtw
    })
    .expect("fixed dimension")
}

/// `Ŵ` restricted to the plane orthogonal to `(1,1,1)`.
pub fn restricted_hessian(w: &WMatrix) -> SymMatrix {
    hessian_matrix(w)
        .congruence(&PERP_BASIS, 2)
        .expect("fixed dimension")
}

/// Closed-form PSD test for `Ŵ`:
///
/// ```text
/// Σ (w_ii - w_{i+1,i+1})² <= ½ (w - √((Tr W - 2w)² + 3δ²))²
/// ```
///
/// together with `w >= √((Tr W - 2w)² + 3δ²)`, without which the squared
/// right-hand side admits spurious solutions.
pub fn hessian_condition(w: &WMatrix, tol: &Tolerance) -> Result<bool> {
    let s = w.w();
    let dlt = delta(w, tol)?;
    let diag = w.diagonal();
    let lhs: f64 = (0..3).map(|i| (diag[i] - diag[(i + 1) % 3]).powi(2)).sum();
    let inner = s - ((w.trace() - 2.0 * s).powi(2) + 3.0 * dlt * dlt).sqrt();
    Ok(inner >= -tol.eps_eq * (1.0 + s) && lhs <= 0.5 * inner * inner + tol.eps_eq * (1.0 + s * s))
}

/// Closed form and eigenvalue route to the Hessian condition side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianCheck {
    /// Closed-form condition.
    pub formula: bool,
    /// Eigenvalues of `Ŵ` on the plane orthogonal to `(1,1,1)`, ascending.
    pub restricted_eigenvalues: [f64; 2],
    /// `Ŵ` positive definite on that plane, so its kernel is exactly `span{1}`.
    pub kernel_simple: bool,
    /// The two routes agree (up to a thin band around the boundary).
    pub consistent: bool,
}

pub fn hessian_check(w: &WMatrix, tol: &Tolerance) -> Result<HessianCheck> {
    let formula = hessian_condition(w, tol)?;
    let restricted = restricted_hessian(w);
    let eig = eig_sym(&restricted)?;
    let values = [eig.values[0], eig.values[1]];
    let scale = 1.0 + hessian_matrix(w).max_abs();
    let eigen_psd = values[0] >= -tol.eps_psd;
    let consistent = formula == eigen_psd || values[0].abs() <= 1e-8 * scale;
    Ok(HessianCheck {
        formula,
        restricted_eigenvalues: values,
        kernel_simple: values[0] > tol.eps_psd * scale,
        consistent,
    })
}

/// The Hessian condition with `Ŵ` positive definite on the plane
/// orthogonal to `(1,1,1)`, or `W` circulant. On the circle itself the
/// interior maximum need not be unique, so the gate stays closed there.
pub fn hessian_gate(w: &WMatrix, tol: &Tolerance) -> Result<bool> {
    let hc = hessian_check(w, tol)?;
    Ok(gate_of(w, &hc, tol))
}

fn gate_of(w: &WMatrix, hc: &HessianCheck, tol: &Tolerance) -> bool {
    w.is_circulant(tol) || (hc.formula && hc.kernel_simple)
}

fn check_simplex(x: [f64; 3]) -> Result<()> {
    let sum: f64 = x.iter().sum();
    if x.iter().any(|v| !v.is_finite() || *v < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotInSimplex(x));
    }
    Ok(())
}

pub(crate) fn z_of(w: &WMatrix, x: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| w.get(i, j) * x[j]).sum())
}

/// `f(x) = Σ x_i / z_i` on the closed simplex.
///
/// A vanishing `z_i` with `x_i > 0` is a singularity (a direction of
/// non-positivity); `z_i = x_i = 0` contributes nothing unless `W` is block
/// diagonal, where that limit is the excluded singular boundary.
pub fn f_value(w: &WMatrix, x: [f64; 3], tol: &Tolerance) -> Result<f64> {
    check_simplex(x)?;
    let z = z_of(w, x);
    let mut total = 0.0;
    for i in 0..3 {
        if x[i] > 0.0 {
            if z[i] <= 0.0 {
                return Err(Error::Singular { index: i + 1, x: x[i], z: z[i] });
            }
            total += x[i] / z[i];
        } else if z[i] <= 0.0 {
            if let Some(k) = w.block_diagonal_index(tol) {
                return Err(Error::BlockDiagonal(k + 1));
            }
        }
    }
    Ok(total)
}

/// `M_I(x) = Π_{i∈I} z_i - Σ_{i∈I} x_i Π_{j∈I∖{i}} z_j`, the principal minor
/// of `diag(z) - ψψ†` on the rows and columns in `I` (0-based).
pub fn principal_minor(w: &WMatrix, x: [f64; 3], subset: &[usize]) -> Result<f64> {
    check_simplex(x)?;
    let mut idx: Vec<usize> = subset.iter().copied().filter(|&i| i < 3).collect();
    idx.sort_unstable();
    idx.dedup();
    if idx.is_empty() || idx.len() != subset.len() {
        return Err(Error::EmptyIndexSet);
    }
    let z = z_of(w, x);
    let prod: f64 = idx.iter().map(|&i| z[i]).product();
    let sub: f64 = idx
        .iter()
        .map(|&i| x[i] * idx.iter().filter(|&&j| j != i).map(|&j| z[j]).product::<f64>())
        .sum();
    Ok(prod - sub)
}

/// Positivity of the circulant map with parameters `(a, b, c)`: `a >= 1`,
/// `a + b + c >= 3`, and `bc >= (2 - a)²` when `a <= 2`.
pub fn circulant_positive(a: f64, b: f64, c: f64, tol: &Tolerance) -> bool {
    let e = tol.eps_eq;
    a >= 1.0 - e && a + b + c >= 3.0 - e && (a > 2.0 || (b * c).max(0.0).sqrt() >= 2.0 - a - e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conditions {
    pub vertex: [bool; 3],
    /// In [`EDGE_PAIRS`] order.
    pub edge: [bool; 3],
    pub interior: bool,
    pub hessian: bool,
    /// The condition under which vertex, edge and interior are sufficient.
    pub hessian_gate: bool,
    pub circulant: bool,
    pub hessian_check: HessianCheck,
}

impl Conditions {
    pub fn necessary_hold(&self) -> bool {
        self.vertex.iter().all(|&v| v) && self.edge.iter().all(|&v| v) && self.interior
    }
}

/// How the positivity verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityBasis {
    CompletelyPositive,
    /// A vertex, edge or interior condition fails.
    ConditionViolated,
    /// All conditions hold inside the Hessian gate.
    HessianGate,
    /// Circulant `W`: the three-bullet circulant criterion applies directly.
    Circulant,
    /// Outside the gate, a brute-force search found a violating `ψ`.
    OracleWitness,
    /// Outside the gate and no violation found.
    GateFailed,
    /// A condition fails by less than any witness can demonstrate.
    Marginal,
    /// A PSD decomposition `A + (id⊗T)B` certifies positivity.
    Decomposition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityVerdict {
    pub cp: bool,
    pub positive: Ternary,
    pub basis: PositivityBasis,
    pub conditions: Conditions,
    /// Present whenever `positive` is `no`.
    pub witness: Option<Witness>,
}

/// Gated positivity classification.
///
/// Vertex, edge and interior conditions are necessary everywhere. When they
/// all hold, the map is positive if `W` is circulant or passes the Hessian
/// gate; otherwise a brute-force search may still exhibit a violation, and
/// failing that the verdict is `unknown`. Every `no` carries a witness.
pub fn classify_positivity(w: &WMatrix, tol: &Tolerance) -> Result<PositivityVerdict> {
    if let Some(k) = w.block_diagonal_index(tol) {
        return Err(Error::BlockDiagonal(k + 1));
    }
    let cp = is_completely_positive(w, tol);
    let hc = hessian_check(w, tol)?;
    let circulant = w.is_circulant(tol);
    let conditions = Conditions {
        vertex: vertex_conditions(w, tol),
        edge: edge_conditions(w, tol),
        interior: interior_condition(w, tol),
        hessian: hc.formula,
        hessian_gate: gate_of(w, &hc, tol),
        circulant,
        hessian_check: hc,
    };

    let (positive, basis, witness) = if cp {
        (Ternary::Yes, PositivityBasis::CompletelyPositive, None)
    } else if !conditions.necessary_hold() {
        match find_violation(w, tol, SearchDepth::Targeted) {
            Some(wit) => (Ternary::No, PositivityBasis::ConditionViolated, Some(wit)),
            None => (Ternary::Unknown, PositivityBasis::Marginal, None),
        }
    } else if conditions.hessian_gate {
        let basis = if circulant {
            PositivityBasis::Circulant
        } else {
            PositivityBasis::HessianGate
        };
        (Ternary::Yes, basis, None)
    } else {
        match find_violation(w, tol, SearchDepth::Thorough) {
            Some(wit) => (Ternary::No, PositivityBasis::OracleWitness, Some(wit)),
            None => (Ternary::Unknown, PositivityBasis::GateFailed, None),
        }
    };

    Ok(PositivityVerdict {
        cp,
        positive,
        basis,
        conditions,
        witness,
    })
}
