use super::Tolerance;
use crate::error::{Error, Result};

/// Leading coefficients below this fraction of the largest coefficient are
/// dropped before solving.
const DEGRADE_RATIO: f64 = 1e-14;

/// Real polynomial of degree at most four, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// `coeffs[i]` multiplies `x^i`.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if coeffs.len() > 5 {
            return Err(Error::PolynomialDegree(coeffs.len() - 1));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self {
            coeffs: coeffs.to_vec(),
        })
    }

    /// Highest power first, the order numpy's `roots` takes.
    pub fn from_descending(coeffs: &[f64]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        c.reverse();
        Self::new(&c)
    }

    /// `lead * Π (x - r)`.
    pub fn from_roots(lead: f64, roots: &[f64]) -> Result<Self> {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Self::new(&c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nominal degree (leading coefficient may be zero).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn horner_with_derivative(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &ci in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ci;
    }
    (p, dp)
}

// Bound on the rounding error of Horner evaluation at x.
fn eval_error_bound(c: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    let mag = c.iter().rev().fold(0.0, |acc, &ci| acc * ax + ci.abs());
    16.0 * f64::EPSILON * mag
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

/// Real roots, ascending, each with residual `|p(r)| <= eps_root * (1 + max|c|)`.
///
/// The real critical points (roots of `p'`, found recursively) split the
/// line into monotone pieces; each sign change is solved by safeguarded
/// Newton, and a critical point where `p` vanishes to rounding accuracy is
/// reported as a (multiple) root.
pub fn real_roots(p: &Poly, tol: &Tolerance) -> Result<Vec<f64>> {
    let norm = p.max_abs_coeff();
    if norm == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = p.coeffs.clone();
    while c.len() > 1 && c.last().is_some_and(|l| l.abs() < DEGRADE_RATIO * norm) {
        c.pop();
    }
    if c.len() == 1 {
        return Ok(Vec::new());
    }
    let slack = tol.eps_root * (1.0 + norm);
    Ok(roots_of(&c)
        .into_iter()
        .filter(|&r| p.eval(r).abs() <= slack)
        .collect())
}

// `c` has nonzero leading coefficient and degree >= 1.
fn roots_of(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let bound = 1.0 + c[..n].iter().fold(0.0_f64, |m, ci| m.max((ci / lead).abs()));
    let mut knots = vec![-bound];
    knots.extend(
        roots_of(&derivative(c))
            .into_iter()
            .filter(|x| x.abs() < bound),
    );
    knots.push(bound);

    let mut roots = Vec::with_capacity(n);
    for &x in &knots[1..knots.len() - 1] {
        if horner(c, x).abs() <= eval_error_bound(c, x) {
            roots.push(x);
        }
    }
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(c, lo), horner(c, hi));
        if flo * fhi < 0.0 {
            roots.push(bracketed_root(c, lo, hi, flo));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}

fn bracketed_root(c: &[f64], mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let rising = flo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = horner_with_derivative(c, x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == rising {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roots(desc: &[f64]) -> Vec<f64> {
        real_roots(&Poly::from_descending(desc).unwrap(), &Tolerance::default()).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(roots(&[1.0, 0.0, -1.0]), vec![-1.0, 1.0]);
        assert!(roots(&[1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn planted_quartic() {
        let p = Poly::from_roots(1.0, &[0.5, 2.0, -3.0, 0.0]).unwrap();
        let r = real_roots(&p, &Tolerance::default()).unwrap();
        let want = [-3.0, 0.0, 0.5, 2.0];
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{r:?}");
            assert!(p.eval(*a).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let p = Poly::new(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(real_roots(&p, &Tolerance::default()), Err(Error::ZeroPolynomial));
        assert!(matches!(Poly::new(&[1.0; 6]), Err(Error::PolynomialDegree(5))));
    }

    #[test]
    fn degree_degradation() {
        // negligible cubic term on top of x^2 - 4
        let p = Poly::new(&[-4.0, 0.0, 1.0, 1e-18]).unwrap();
        assert_eq!(real_roots(&p, &Tolerance::default()).unwrap(), vec![-2.0, 2.0]);
        // exact zero leading term: cubic collapses to a line
        let p = Poly::new(&[3.0, -1.5, 0.0, 0.0]).unwrap();
        assert_eq!(real_roots(&p, &Tolerance::default()).unwrap(), vec![2.0]);
        let p = Poly::new(&[5.0, 0.0]).unwrap();
        assert!(real_roots(&p, &Tolerance::default()).unwrap().is_empty());
    }

    #[test]
    fn multiple_roots_collapse() {
        let p = Poly::from_roots(1.0, &[1.0, 1.0, -2.0]).unwrap();
        let r = real_roots(&p, &Tolerance::default()).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] + 2.0).abs() < 1e-12);
        assert!((r[1] - 1.0).abs() < 1e-7);
        let p = Poly::from_roots(2.0, &[0.3, 0.3, 0.3, 0.3]).unwrap();
        let r = real_roots(&p, &Tolerance::default()).unwrap();
        assert!(!r.is_empty());
        assert!(r.iter().all(|x| (x - 0.3).abs() < 1e-3), "{r:?}");
    }

    #[test]
    fn complex_pair_not_reported() {
        // (x^2 + 1e-4)(x - 1): the pair at ±0.01i must be dropped
        let p = Poly::from_descending(&[1.0, -1.0, 1e-4, -1e-4]).unwrap();
        assert_eq!(real_roots(&p, &Tolerance::default()).unwrap(), vec![1.0]);
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(
            lead in prop::sample::select(vec![-3.0, -0.5, 0.25, 1.0, 7.0]),
            raw in prop::collection::vec(-5.0f64..5.0, 1..=4),
        ) {
            let mut planted = raw.clone();
            planted.sort_by(f64::total_cmp);
            prop_assume!(planted.windows(2).all(|w| w[1] - w[0] > 0.05));
            let p = Poly::from_roots(lead, &planted).unwrap();
            let found = real_roots(&p, &Tolerance::default()).unwrap();
            prop_assert_eq!(found.len(), planted.len());
            for (a, b) in found.iter().zip(&planted) {
                prop_assert!((a - b).abs() < 1e-7, "{:?} vs {:?}", found, planted);
            }
        }
    }
}
