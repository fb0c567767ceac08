use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::geometry::{mu, PlanePoint, AXIS_ANGLES};
use crate::numerics::{real_roots, Poly, Tolerance};
use crate::positivity::EDGE_PAIRS;

const SQRT_6: f64 = 2.449_489_742_783_178;

/// Edge equation for the `d` curve in the radial unit `ρ = r/√6`:
/// `√((a-1-ρ cos φ)² - 3ρ² sin² φ) + √(((b+c)/2 + 2ρ cos φ)² - ((b-c)/2)²) - 1`.
/// `None` when a radicand is negative.
pub fn edge_residual(a: f64, b: f64, c: f64, phi: f64, rho: f64) -> Option<f64> {
    let (cs, sn) = (phi.cos(), phi.sin());
    let p = (a - 1.0 - rho * cs).powi(2) - 3.0 * rho * rho * sn * sn;
    let q = ((b + c) / 2.0 + 2.0 * rho * cs).powi(2) - ((b - c) / 2.0).powi(2);
    let slack = 1e-12 * (1.0 + a * a + b * b + c * c + rho * rho);
    if p < -slack || q < -slack {
        return None;
    }
    Some(p.max(0.0).sqrt() + q.max(0.0).sqrt() - 1.0)
}

/// The edge equation squared twice: a quartic in `ρ`.
pub fn edge_quartic(a: f64, b: f64, c: f64, phi: f64) -> Poly {
    let cs = phi.cos();
    let s = a + b + c - 1.0;
    let k = (a - 1.0).powi(2) - b * c - 1.0;
    Poly::new(&[
        k * k / 4.0 - b * c,
        -(s * k + 2.0 * (b + c)) * cs,
        (s * s - 4.0) * cs * cs - 1.5 * k,
        3.0 * s * cs,
        2.25,
    ])
    .expect("fixed degree")
}

fn in_triangle_code_units(a: f64, b: f64, c: f64, phi: f64, rho: f64) -> bool {
    let m = AXIS_ANGLES.iter().map(|t| -(phi - t).cos()).fold(f64::NEG_INFINITY, f64::max);
    rho <= 0.5 * mu(a, b, c) / m + 1e-12
}

/// Smallest admissible saturation radius of the `d` curve along `φ`, in
/// plane units: a positive root of the quartic that satisfies the
/// unsquared equation within `eps_root` and lies in the vertex triangle.
pub fn edge_radius(a: f64, b: f64, c: f64, phi: f64, tol: &Tolerance) -> Option<f64> {
    let roots = real_roots(&edge_quartic(a, b, c, phi), tol).ok()?;
    roots
        .into_iter()
        .filter(|&rho| rho > 0.0)
        .filter(|&rho| edge_residual(a, b, c, phi, rho).is_some_and(|g| g.abs() <= tol.eps_root))
        .filter(|&rho| in_triangle_code_units(a, b, c, phi, rho))
        .min_by(f64::total_cmp)
        .map(|rho| rho * SQRT_6)
}

/// Saturation radius of the edge condition for curve `k` (`0 ↔ d ↔` pair
/// (1,2), `1 ↔ e ↔` (1,3), `2 ↔ f ↔` (2,3)): the `d` curve rotated to the
/// curve's axis.
pub fn curve_radius(k: usize, a: f64, b: f64, c: f64, phi: f64, tol: &Tolerance) -> Option<f64> {
    edge_radius(a, b, c, phi - AXIS_ANGLES[k], tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcPoint {
    pub phi: f64,
    /// Plane units; NaN marks a gap.
    pub r: f64,
    /// Curve supplying the minimum.
    pub source: Option<usize>,
    /// Per-curve saturation radii at this angle (NaN where none).
    pub candidates: [f64; 3],
}

impl ArcPoint {
    pub fn point(&self) -> PlanePoint {
        PlanePoint::from_polar(self.r, self.phi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub curve: usize,
    /// 1-based index pair whose edge condition this arc saturates natively.
    pub pair: (usize, usize),
    pub points: Vec<ArcPoint>,
}

impl Arc {
    pub fn is_empty(&self) -> bool {
        self.points.iter().all(|p| p.r.is_nan())
    }
}

/// Arc of curve `k` over `φ_k + π ± π/3`, sampled at `samples` angles. Each
/// radius is the minimum over all three curves, so the arcs together trace
/// the boundary of the region where every edge condition holds.
pub fn bean_arc(k: usize, a: f64, b: f64, c: f64, samples: usize, tol: &Tolerance) -> Arc {
    let n = samples.max(2);
    let centre = AXIS_ANGLES[k] + PI;
    let points = (0..n)
        .into_par_iter()
        .map(|s| {
            let phi = centre - PI / 3.0 + 2.0 * PI / 3.0 * s as f64 / (n - 1) as f64;
            let candidates = [0, 1, 2].map(|q| curve_radius(q, a, b, c, phi, tol).unwrap_or(f64::NAN));
            let mut best: (f64, Option<usize>) = (f64::NAN, None);
            // prefer the native curve on ties
            for q in std::iter::once(k).chain((0..3).filter(|&q| q != k)) {
                let v = candidates[q];
                if v.is_finite() && (best.1.is_none() || v < best.0) {
                    best = (v, Some(q));
                }
            }
            ArcPoint {
                phi,
                r: best.0,
                source: best.1,
                candidates,
            }
        })
        .collect();
    let (i, j) = EDGE_PAIRS[k];
    Arc {
        curve: k,
        pair: (i + 1, j + 1),
        points,
    }
}

/// The fold over the doubled range: the `d` curve sampled at `samples`
/// (odd) angles on `[π/3, π]`, folded at `2π/3` and minimised pointwise.
/// Returns `(φ, r)` on `[2π/3, π]`.
pub fn fold_half_arc(a: f64, b: f64, c: f64, samples: usize, tol: &Tolerance) -> Vec<(f64, f64)> {
    let n = if samples.is_multiple_of(2) { samples + 1 } else { samples.max(3) };
    let phis: Vec<f64> = (0..n).map(|s| PI / 3.0 + 2.0 * PI / 3.0 * s as f64 / (n - 1) as f64).collect();
    let r: Vec<f64> = phis
        .par_iter()
        .map(|&phi| edge_radius(a, b, c, phi, tol).unwrap_or(f64::NAN))
        .collect();
    let mid = n / 2;
    (0..=mid)
        .map(|k| {
            let (u, v) = (r[mid - k], r[mid + k]);
            let m = match (u.is_nan(), v.is_nan()) {
                (true, true) => f64::NAN,
                (true, false) => v,
                (false, true) => u,
                (false, false) => u.min(v),
            };
            (phis[mid + k], m)
        })
        .collect()
}

/// Whether the origin satisfies every edge condition: `2 - a <= √(bc)`
/// (with `a >= 1`).
pub fn origin_admissible(a: f64, b: f64, c: f64, tol: &Tolerance) -> bool {
    a >= 1.0 - tol.eps_eq && 2.0 - a <= (b * c).max(0.0).sqrt() + tol.eps_eq
}
