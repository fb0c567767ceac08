use std::f64::consts::PI;

use serde::Serialize;

/// Angular offsets of the `d`, `e`, `f` axes in the polar convention
/// `d = √(2/3) r cos φ`, `e = √(2/3) r cos(φ + 2π/3)`, `f = √(2/3) r cos(φ - 2π/3)`.
pub const AXIS_ANGLES: [f64; 3] = [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0];

const SQRT_2_3: f64 = 0.816_496_580_927_726;

/// `(d, e, f)` on the plane `d + e + f = 0`; `r` is the Euclidean norm.
pub fn polar_to_def(r: f64, phi: f64) -> [f64; 3] {
    AXIS_ANGLES.map(|t| SQRT_2_3 * r * (phi - t).cos())
}

/// Inverse of [`polar_to_def`] for points on the plane.
pub fn def_to_polar(def: [f64; 3]) -> (f64, f64) {
    PlanePoint::from_def(def).polar()
}

/// Display coordinates: the `d` axis points up, so `x = -r sin φ`,
/// `y = r cos φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn from_polar(r: f64, phi: f64) -> Self {
        Self {
            x: -r * phi.sin(),
            y: r * phi.cos(),
        }
    }

    pub fn from_def([d, e, f]: [f64; 3]) -> Self {
        Self {
            x: (e - f) / 2f64.sqrt(),
            y: d * 1.5f64.sqrt(),
        }
    }

    pub fn to_def(self) -> [f64; 3] {
        let d = self.y * SQRT_2_3;
        let s = 2f64.sqrt() * self.x;
        [d, (s - d) / 2.0, (-s - d) / 2.0]
    }

    /// `(r, φ)`.
    pub fn polar(self) -> (f64, f64) {
        (self.x.hypot(self.y), (-self.x).atan2(self.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `μ = min(a - 1, b, c)`.
pub fn mu(a: f64, b: f64, c: f64) -> f64 {
    (a - 1.0).min(b).min(c)
}

/// Distance from the origin to the vertex-triangle boundary along `φ`, in
/// plane units. Negative when `μ < 0`.
pub fn triangle_bound(a: f64, b: f64, c: f64, phi: f64) -> f64 {
    let m = AXIS_ANGLES.iter().map(|t| -(phi - t).cos()).fold(f64::NEG_INFINITY, f64::max);
    1.5f64.sqrt() * mu(a, b, c) / m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleState {
    Proper,
    /// `μ = 0`: the triangle collapses to the origin.
    Degenerate,
    /// `μ < 0`: no point of the plane satisfies the vertex and
    /// nonnegativity constraints.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangle {
    pub mu: f64,
    pub state: TriangleState,
    /// `D`, `E`, `F` as `(d, e, f)`.
    pub vertices: [[f64; 3]; 3],
    /// Closed polyline `D → E → F → D`.
    pub points: Vec<PlanePoint>,
}

/// The triangle `d, e, f >= -μ` cut out by `w_ii >= 1` and `W >= 0`, with
/// vertices `(2μ,-μ,-μ)`, `(-μ,2μ,-μ)`, `(-μ,-μ,2μ)`.
pub fn triangle(a: f64, b: f64, c: f64, samples_per_edge: usize) -> Triangle {
    let m = mu(a, b, c);
    let vertices = [[2.0 * m, -m, -m], [-m, 2.0 * m, -m], [-m, -m, 2.0 * m]];
    let state = if m > 0.0 {
        TriangleState::Proper
    } else if m == 0.0 {
        TriangleState::Degenerate
    } else {
        TriangleState::Empty
    };
    let points = match state {
        TriangleState::Empty => Vec::new(),
        TriangleState::Degenerate => vec![PlanePoint { x: 0.0, y: 0.0 }],
        TriangleState::Proper => {
            let n = samples_per_edge.max(2);
            let corners = vertices.map(PlanePoint::from_def);
            let mut pts = Vec::with_capacity(3 * (n - 1) + 1);
            for k in 0..3 {
                let (p, q) = (corners[k], corners[(k + 1) % 3]);
                for s in 0..n - 1 {
                    let t = s as f64 / (n - 1) as f64;
                    pts.push(PlanePoint {
                        x: p.x + t * (q.x - p.x),
                        y: p.y + t * (q.y - p.y),
                    });
                }
            }
            pts.push(corners[0]);
            pts
        }
    };
    Triangle {
        mu: m,
        state,
        vertices,
        points,
    }
}

/// Radius of the circle `Ŵ >= 0` in plane units; negative means no point
/// of the plane passes the Hessian condition.
pub fn hessian_circle_radius(a: f64, b: f64, c: f64) -> f64 {
    (a + b + c - ((a - 2.0 * b - 2.0 * c).powi(2) + 3.0 * (b - c).powi(2)).sqrt()) / 6f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianCircle {
    pub radius: f64,
    /// The radius is negative.
    pub empty: bool,
    pub points: Vec<PlanePoint>,
}

pub fn hessian_circle(a: f64, b: f64, c: f64, samples: usize) -> HessianCircle {
    let radius = hessian_circle_radius(a, b, c);
    let empty = radius.is_nan() || radius < 0.0;
    let points = if empty {
        Vec::new()
    } else {
        let n = samples.max(2);
        (0..n)
            .map(|k| PlanePoint::from_polar(radius, 2.0 * PI * k as f64 / (n - 1) as f64))
            .collect()
    };
    HessianCircle { radius, empty, points }
}
