//! Boundary curves of the admissible set in the plane `d + e + f = 0` for
//! fixed `(a, b, c)`: the vertex triangle, the three edge arcs, the Hessian
//! circle and the completely positive boundary.
//!
//! Polar coordinates follow `d = √(2/3) r cos φ` (and cyclic shifts by
//! `2π/3`), so `r` is the Euclidean norm of `(d, e, f)`. The edge quartic is
//! solved in the unit `r/√6`; everything returned is in plane units.

mod arcs;
mod cp;
mod export;
mod geometry;

pub use arcs::{
    bean_arc, curve_radius, edge_quartic, edge_radius, edge_residual, fold_half_arc, origin_admissible, Arc, ArcPoint,
};
pub use cp::{cp_boundary, cp_cubic, CpPoint};
pub use export::{to_csv, to_svg};
pub use geometry::{
    def_to_polar, hessian_circle, hessian_circle_radius, mu, polar_to_def, triangle, triangle_bound, HessianCircle,
    PlanePoint, Triangle, TriangleState, AXIS_ANGLES,
};

use serde::Serialize;

use crate::error::Result;
use crate::model::{w_from_birkhoff, BirkhoffParams};
use crate::numerics::Tolerance;
use crate::positivity::{edge_conditions, hessian_gate, interior_condition, vertex_conditions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplingConfig {
    pub triangle_per_edge: usize,
    pub arc: usize,
    pub circle: usize,
    pub cp: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            triangle_per_edge: 101,
            arc: 201,
            circle: 601,
            cp: 601,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCurves {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub sampling: SamplingConfig,
    pub vertex_triangle: Triangle,
    pub edge_arcs: [Arc; 3],
    pub hessian_circle: HessianCircle,
    /// Empty when `a <= 3`.
    pub cp_boundary: Vec<CpPoint>,
    /// The origin satisfies all edge conditions.
    pub origin_admissible: bool,
    /// Human-readable notes on degenerate or empty subregions.
    pub warnings: Vec<String>,
}

impl RegionCurves {
    pub fn is_degenerate(&self) -> bool {
        self.vertex_triangle.state != TriangleState::Proper
    }
}

pub fn assemble_region(a: f64, b: f64, c: f64, sampling: SamplingConfig, tol: &Tolerance) -> Result<RegionCurves> {
    tol.validate()?;
    if ![a, b, c].iter().all(|v| v.is_finite()) {
        return Err(crate::Error::NonFinite("region parameters"));
    }
    let vertex_triangle = triangle(a, b, c, sampling.triangle_per_edge);
    let edge_arcs = [0, 1, 2].map(|k| bean_arc(k, a, b, c, sampling.arc, tol));
    let circle = hessian_circle(a, b, c, sampling.circle);
    let cp = cp_boundary(a, b, c, sampling.cp, tol);
    let mut warnings = Vec::new();
    match vertex_triangle.state {
        TriangleState::Degenerate => {
            warnings.push("degenerate region: mu = min(a-1, b, c) = 0, triangle collapses to the origin".to_string())
        }
        TriangleState::Empty => warnings.push(format!("empty region: mu = {} < 0", vertex_triangle.mu)),
        TriangleState::Proper => {}
    }
    if edge_arcs.iter().all(Arc::is_empty) {
        warnings.push("no edge-arc point inside the vertex triangle".to_string());
    }
    if circle.empty {
        warnings.push(format!("Hessian circle empty (radius {})", circle.radius));
    }
    if a + b + c < 3.0 - tol.eps_eq {
        warnings.push(format!("interior condition fails everywhere: a + b + c = {} < 3", a + b + c));
    }
    Ok(RegionCurves {
        a,
        b,
        c,
        sampling,
        vertex_triangle,
        edge_arcs,
        hessian_circle: circle,
        cp_boundary: cp,
        origin_admissible: origin_admissible(a, b, c, tol),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// All conditions hold and the Hessian gate is open.
    Inside,
    /// Necessary conditions hold but the point is outside the circle.
    Unknown,
    /// Some necessary condition fails, or `W` has a negative entry.
    Outside,
}

/// Classify the point `(d, e, -d-e)` of the plane for fixed `(a, b, c)`.
pub fn membership(a: f64, b: f64, c: f64, d: f64, e: f64, tol: &Tolerance) -> Membership {
    let Ok(p) = BirkhoffParams::new(a, b, c, d, e, -d - e, tol) else {
        return Membership::Outside;
    };
    let Ok(w) = w_from_birkhoff(&p, tol) else {
        return Membership::Outside;
    };
    let necessary = vertex_conditions(&w, tol).iter().all(|&v| v)
        && edge_conditions(&w, tol).iter().all(|&v| v)
        && interior_condition(&w, tol);
    if !necessary {
        Membership::Outside
    } else if hessian_gate(&w, tol).unwrap_or(false) {
        Membership::Inside
    } else {
        Membership::Unknown
    }
}
