use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::geometry::{triangle_bound, PlanePoint};
use crate::numerics::{real_roots, Poly, Tolerance};

/// Saturation of `Σ 1/(a + d_i) = 1` along `φ`:
/// `(2/3)^{3/2} cos φ (cos²φ - ¾) r³ - (a-1)/2 r² + a²(a-3) = 0` in plane units.
pub fn cp_cubic(a: f64, phi: f64) -> Poly {
    let cs = phi.cos();
    Poly::new(&[a * a * (a - 3.0), 0.0, -(a - 1.0) / 2.0, (2.0f64 / 3.0).powf(1.5) * cs * (cs * cs - 0.75)])
        .expect("fixed degree")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpPoint {
    pub phi: f64,
    /// Smallest positive root of the cubic, if any.
    pub saturation: Option<f64>,
    /// Displayed radius: the saturation clamped to the vertex triangle.
    pub r: f64,
}

impl CpPoint {
    pub fn point(&self) -> PlanePoint {
        PlanePoint::from_polar(self.r, self.phi)
    }

    /// The displayed point is a true saturation point.
    pub fn saturated(&self) -> bool {
        self.saturation.is_some_and(|s| s <= self.r)
    }
}

/// Boundary of the completely positive set, empty when `a <= 3`. Where
/// the saturation lies beyond the vertex triangle, or the cubic has no
/// positive root, the triangle boundary is shown instead.
pub fn cp_boundary(a: f64, b: f64, c: f64, samples: usize, tol: &Tolerance) -> Vec<CpPoint> {
    if a <= 3.0 {
        return Vec::new();
    }
    let n = samples.max(2);
    (0..n)
        .into_par_iter()
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / (n - 1) as f64;
            let saturation = real_roots(&cp_cubic(a, phi), tol)
                .ok()
                .and_then(|rs| rs.into_iter().filter(|&r| r > 0.0).min_by(f64::total_cmp));
            let bound = triangle_bound(a, b, c, phi);
            let r = saturation.map_or(bound, |s| s.min(bound));
            CpPoint { phi, saturation, r }
        })
        .collect()
}
