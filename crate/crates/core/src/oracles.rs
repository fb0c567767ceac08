//! Brute-force verifiers that share no machinery with the closed-form
//! conditions: simplex maximisation of `f`, random rank-one probes,
//! finite-difference Hessians, and witness search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{w_from_birkhoff, BirkhoffParams, WMatrix};
use crate::numerics::{eig_sym, SymMatrix, Tolerance};
use crate::positivity::z_of;

/// A rank-one input `ψψ†` on which `Φ_W` is not PSD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    /// `x_i = |ψ_i|²`.
    pub x: [f64; 3],
    /// `ψ` as `[re, im]` pairs; phases are zero.
    pub psi: [[f64; 2]; 3],
    pub min_eigenvalue: f64,
}

impl Witness {
    fn new(x: [f64; 3], min_eigenvalue: f64) -> Self {
        Self {
            x,
            psi: x.map(|v| [v.max(0.0).sqrt(), 0.0]),
            min_eigenvalue,
        }
    }
}

/// Smallest eigenvalue of `diag(z) - ψψ†` with `ψ_i = √x_i`.
pub fn rank_one_min_eigenvalue(w: &WMatrix, x: [f64; 3]) -> f64 {
    let z = z_of(w, x);
    let s = x.map(|v| v.max(0.0).sqrt());
    let m = SymMatrix::from_fn(3, |i, j| if i == j { z[i] - x[i] } else { -s[i] * s[j] }).expect("fixed dimension");
    eig_sym(&m).map(|e| e.values[0]).unwrap_or(f64::NAN)
}

fn normalize(x: [f64; 3]) -> [f64; 3] {
    let x = x.map(|v| v.max(0.0));
    let s: f64 = x.iter().sum();
    x.map(|v| v / s)
}

/// Points `(i, j, k) / depth` with `i + j + k = depth`.
fn simplex_grid(depth: usize) -> Vec<[f64; 3]> {
    let n = depth as f64;
    let mut pts = Vec::with_capacity((depth + 1) * (depth + 2) / 2);
    for i in 0..=depth {
        for j in 0..=depth - i {
            let k = depth - i - j;
            pts.push([i as f64 / n, j as f64 / n, k as f64 / n]);
        }
    }
    pts
}

/// Pattern search on the simplex along the six directions `±(e_i - e_j)`,
/// halving the step whenever no move improves `score`. Maximises.
fn pattern_search(x0: [f64; 3], h0: f64, iters: usize, score: impl Fn([f64; 3]) -> f64) -> ([f64; 3], f64) {
    let mut x = x0;
    let mut best = score(x);
    let mut h = h0;
    for _ in 0..iters {
        let mut moved = false;
        for (i, j) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            let mut y = x;
            y[i] += h;
            y[j] -= h;
            if y[j] < 0.0 {
                continue;
            }
            let v = score(y);
            if v > best {
                best = v;
                x = y;
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxFReport {
    /// `+∞` when a singularity was hit.
    pub value: f64,
    pub argmax: [f64; 3],
    /// Best value on the grid before refinement.
    pub grid_value: f64,
    pub depth: usize,
    /// Some `z_i <= 0` at `x_i > 0`: `Φ_W` is not positive there.
    pub singular: bool,
}

// f with singularities mapped to +∞ and 0/0 boundary terms dropped.
fn f_extended(w: &WMatrix, x: [f64; 3]) -> f64 {
    let z = z_of(w, x);
    let mut t = 0.0;
    for i in 0..3 {
        if x[i] > 0.0 {
            if z[i] <= 0.0 {
                return f64::INFINITY;
            }
            t += x[i] / z[i];
        }
    }
    t
}

/// Maximum of `f(x) = Σ x_i / z_i` over the closed simplex: grid search at
/// resolution `1/depth` then 50 rounds of pattern refinement. Ties keep the
/// centre, so constant `f` reports `(1/3, 1/3, 1/3)`.
pub fn max_f_on_simplex(w: &WMatrix, depth: usize, tol: &Tolerance) -> Result<MaxFReport> {
    if let Some(k) = w.block_diagonal_index(tol) {
        return Err(Error::BlockDiagonal(k + 1));
    }
    let depth = depth.max(1);
    let centre = [1.0 / 3.0; 3];
    let mut best = (f_extended(w, centre), centre);
    for x in simplex_grid(depth) {
        let v = f_extended(w, x);
        if v > best.0 + 1e-12 * (1.0 + best.0.abs()) {
            best = (v, x);
        }
    }
    if best.0.is_infinite() {
        return Ok(MaxFReport {
            value: f64::INFINITY,
            argmax: best.1,
            grid_value: f64::INFINITY,
            depth,
            singular: true,
        });
    }
    let grid_value = best.0;
    let (x, v) = pattern_search(best.1, 1.0 / depth as f64, 50, |y| f_extended(w, y));
    let (value, argmax) = if v > grid_value + 1e-12 * (1.0 + grid_value) {
        (v, x)
    } else {
        (grid_value, best.1)
    };
    Ok(MaxFReport {
        value,
        argmax,
        grid_value,
        depth,
        singular: value.is_infinite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    pub min_eigenvalue_found: f64,
    /// Nonnegative amplitudes `√x_i` of the minimising sample.
    pub argmin_psi: [f64; 3],
    pub samples: usize,
    /// Simplex subdivision depth, when the probe used a grid.
    pub grid_resolution: Option<usize>,
}

/// Uniform point on the probability simplex.
pub fn sample_simplex<R: Rng>(rng: &mut R) -> [f64; 3] {
    let e: [f64; 3] = [rng.sample(Exp1), rng.sample(Exp1), rng.sample(Exp1)];
    normalize(e)
}

/// Minimum eigenvalue of `Φ_W(ψψ†)` over `samples` uniform draws of
/// `|ψ_i|²`. Deterministic in `seed`; ties resolve to the lowest index.
pub fn rank_one_probe(w: &WMatrix, samples: usize, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<[f64; 3]> = (0..samples).map(|_| sample_simplex(&mut rng)).collect();
    let best = xs
        .par_iter()
        .enumerate()
        .map(|(k, &x)| (rank_one_min_eigenvalue(w, x), k))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let argmin = if best.1 == usize::MAX { [0.0; 3] } else { xs[best.1] };
    ProbeReport {
        min_eigenvalue_found: best.0,
        argmin_psi: argmin.map(f64::sqrt),
        samples,
        grid_resolution: None,
    }
}

/// Central-difference Hessian of `f(x) = Σ x_i / (W x)_i` on the open
/// positive orthant.
pub fn fd_hessian_f(w: &WMatrix, x: [f64; 3], step: f64) -> Result<SymMatrix> {
    if !(1e-6..=1e-2).contains(&step) {
        return Err(Error::Step(step));
    }
    if x.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::NotInterior(x));
    }
    let f = |y: [f64; 3]| -> Result<f64> {
        let z = z_of(w, y);
        let mut t = 0.0;
        for i in 0..3 {
            if z[i] <= 0.0 {
                return Err(Error::Singular { index: i + 1, x: y[i], z: z[i] });
            }
            t += y[i] / z[i];
        }
        Ok(t)
    };
    let shifted = |i: usize, si: f64, j: usize, sj: f64| {
        let mut y = x;
        y[i] += si * step;
        y[j] += sj * step;
        f(y)
    };
    let mut h = [0.0; 9];
    for i in 0..3 {
        for j in i..3 {
            let v = if i == j {
                let mut yp = x;
                yp[i] += step;
                let mut ym = x;
                ym[i] -= step;
                (f(yp)? - 2.0 * f(x)? + f(ym)?) / (step * step)
            } else {
                (shifted(i, 1.0, j, 1.0)? - shifted(i, 1.0, j, -1.0)? - shifted(i, -1.0, j, 1.0)?
                    + shifted(i, -1.0, j, -1.0)?)
                    / (4.0 * step * step)
            };
            h[3 * i + j] = v;
            h[3 * j + i] = v;
        }
    }
    SymMatrix::from_row_major(3, &h)
}

/// How hard [`find_violation`] looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchDepth {
    /// Vertices, centre and edges: enough when a closed-form condition fails.
    Targeted,
    /// Also a dense interior grid with local refinement.
    Thorough,
}

fn golden_min(lo: f64, hi: f64, iters: usize, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc < gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Search for a rank-one input violating positivity. Returns a witness only
/// if its eigenvalue is below `-eps_psd`.
pub fn find_violation(w: &WMatrix, tol: &Tolerance, depth: SearchDepth) -> Option<Witness> {
    let lam = |x: [f64; 3]| rank_one_min_eigenvalue(w, x);
    let mut cands: Vec<([f64; 3], f64)> = Vec::new();
    let mut push = |x: [f64; 3]| {
        let v = lam(x);
        cands.push((x, v));
    };
    for i in 0..3 {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        push(e);
    }
    push([1.0 / 3.0; 3]);

    // edges: coarse scan then golden refinement around the best sample
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let on_edge = |t: f64| {
            let mut x = [0.0; 3];
            x[i] = t;
            x[j] = 1.0 - t;
            x
        };
        let n = 64;
        let (k, _) = (0..=n)
            .map(|k| (k, lam(on_edge(k as f64 / n as f64))))
            .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
        let lo = (k as f64 - 1.0).max(0.0) / n as f64;
        let hi = (k as f64 + 1.0).min(n as f64) / n as f64;
        let (t, _) = golden_min(lo, hi, 80, |t| lam(on_edge(t)));
        push(on_edge(t));
    }

    if depth == SearchDepth::Thorough {
        let mut grid: Vec<([f64; 3], f64)> = simplex_grid(48).into_iter().map(|x| (x, lam(x))).collect();
        grid.sort_by(|a, b| a.1.total_cmp(&b.1));
        for &(x, _) in grid.iter().take(4) {
            let (y, v) = pattern_search(x, 1.0 / 48.0, 80, |y| -lam(y));
            cands.push((y, -v));
        }
    }

    let (x, v) = cands
        .into_iter()
        .filter(|c| c.1.is_finite())
        .fold(([0.0; 3], f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    (v < -tol.eps_psd).then(|| Witness::new(x, v))
}

/// Random-`W` generators shared by tests, the acceptance suite and `verify`.
pub mod sampling {
    use super::*;

    /// `W = Σ_π λ_π P_π` with independent `λ_π ~ scale·Exp(1)`: covers every
    /// nonnegative matrix with equal row and column sums.
    pub fn random_doubly_stochastic<R: Rng>(rng: &mut R, scale: f64) -> WMatrix {
        let l: [f64; 6] = std::array::from_fn(|_| scale * rng.sample::<f64, _>(Exp1));
        let [a, b, c, d, e, f] = l;
        let entries = [[a + f, b + d, c + e], [c + d, a + e, b + f], [b + e, c + f, a + d]];
        WMatrix::new(entries, &Tolerance::default()).expect("nonnegative by construction")
    }

    /// Gauge-fixed `W` with `a`, `b`, `c` drawn from the given ranges and
    /// `(d, e, f)` uniform in the plane disc of radius `radius`, rejecting
    /// draws with negative entries.
    pub fn random_gauge_w<R: Rng>(rng: &mut R, a: (f64, f64), bc: (f64, f64), radius: f64) -> WMatrix {
        let tol = Tolerance::default();
        loop {
            let (aa, bb, cc) = (
                rng.random_range(a.0..=a.1),
                rng.random_range(bc.0..=bc.1),
                rng.random_range(bc.0..=bc.1),
            );
            let r = radius * rng.random::<f64>().sqrt();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let [d, e, f] = crate::region::polar_to_def(r, phi);
            if let Ok(p) = BirkhoffParams::new(aa, bb, cc, d, e, f, &tol) {
                if let Ok(w) = w_from_birkhoff(&p, &tol) {
                    return w;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::hessian_matrix;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn circ(a: f64, b: f64, c: f64) -> WMatrix {
        WMatrix::circulant(a, b, c, &tol()).unwrap()
    }

    #[test]
    fn max_f_constant() {
        let r = max_f_on_simplex(&circ(1.0, 1.0, 1.0), 200, &tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.argmax, [1.0 / 3.0; 3]);
    }

    #[test]
    fn max_f_choi_map() {
        let r = max_f_on_simplex(&circ(2.0, 1.0, 0.0), 200, &tol()).unwrap();
        assert!(r.value <= 1.0 + 1e-9, "{}", r.value);
        assert!(r.value >= 1.0 - 1e-12);
    }

    #[test]
    fn max_f_non_positive() {
        let r = max_f_on_simplex(&circ(1.0, 1.0, 0.5), 200, &tol()).unwrap();
        assert!(r.value >= 1.2 - 1e-12);
        assert!(!r.singular);
    }

    #[test]
    fn max_f_refuses_block_diagonal() {
        let w = WMatrix::new([[2.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]], &tol()).unwrap();
        assert_eq!(max_f_on_simplex(&w, 20, &tol()), Err(Error::BlockDiagonal(1)));
    }

    #[test]
    fn max_f_reports_singularity() {
        let w = WMatrix::new([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]], &tol()).unwrap();
        let r = max_f_on_simplex(&w, 10, &tol()).unwrap();
        assert!(r.singular && r.value.is_infinite());
    }

    #[test]
    fn max_f_monotone_in_depth() {
        let w = circ(1.3, 0.4, 0.9);
        let mut last = f64::NEG_INFINITY;
        for depth in [10, 20, 40, 80] {
            let r = max_f_on_simplex(&w, depth, &tol()).unwrap();
            assert!(r.grid_value >= last - 1e-15);
            last = r.grid_value;
        }
    }

    #[test]
    fn probe_examples() {
        let r = rank_one_probe(&circ(3.0, 1.0, 1.0), 10_000, 7);
        assert!(r.min_eigenvalue_found >= -1e-9);
        let r = rank_one_probe(&circ(1.0, 1.0, 0.5), 10_000, 7);
        assert!(r.min_eigenvalue_found < -1e-3);
        assert_eq!(r.samples, 10_000);
        let w = WMatrix::new([[2.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]], &tol()).unwrap();
        assert!(rank_one_probe(&w, 100, 1).min_eigenvalue_found.is_finite());
    }

    #[test]
    fn probe_is_deterministic() {
        let w = circ(1.4, 0.7, 0.5);
        assert_eq!(rank_one_probe(&w, 5000, 42), rank_one_probe(&w, 5000, 42));
    }

    #[test]
    fn fd_hessian_examples() {
        let h = fd_hessian_f(&circ(1.0, 1.0, 1.0), [1.0; 3], 1e-3).unwrap();
        assert!(h.max_abs() < 1e-5);
        let w = circ(1.7, 0.9, 0.5);
        let h = fd_hessian_f(&w, [1.0; 3], 1e-3).unwrap();
        let want = hessian_matrix(&w).scale(-1.0 / w.w().powi(3));
        assert!(h.max_abs_diff(&want) <= 1e-4 * want.max_abs());
        assert_eq!(fd_hessian_f(&w, [1.0; 3], 0.1), Err(Error::Step(0.1)));
        assert!(matches!(fd_hessian_f(&w, [1.0, 0.0, 1.0], 1e-3), Err(Error::NotInterior(_))));
    }

    #[test]
    fn witness_for_violations() {
        let v = find_violation(&circ(1.0, 1.0, 0.5), &tol(), SearchDepth::Targeted).unwrap();
        assert!(v.min_eigenvalue < -0.1);
        // edge failure
        let v = find_violation(&circ(1.5, 0.1, 0.1), &tol(), SearchDepth::Targeted).unwrap();
        assert!(v.min_eigenvalue < 0.0);
        assert!((v.psi[0][0].powi(2) - v.x[0]).abs() < 1e-15);
        assert!(find_violation(&circ(3.0, 1.0, 1.0), &tol(), SearchDepth::Thorough).is_none());
        assert!(find_violation(&circ(2.0, 1.0, 0.0), &tol(), SearchDepth::Thorough).is_none());
    }
}
