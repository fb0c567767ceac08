//! Classification over parameter grids. Points are evaluated in parallel
//! and returned in grid order; per-point failures stay in their row.

use std::fmt::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::classify;
use crate::error::{Error, Result};
use crate::model::{w_from_birkhoff, BirkhoffParams};
use crate::numerics::Tolerance;
use crate::region::{membership, Membership};

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn fixed(v: f64) -> Self {
        Self {
            start: v,
            stop: v,
            count: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::GridSpec(s.to_string());
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
        match parts.as_slice() {
            [v] => Ok(Axis::fixed(num(v)?)),
            [a, b, n] => Ok(Axis {
                start: num(a)?,
                stop: num(b)?,
                count: n.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Grid over `(a, b, c, d, e)` with `f = -d - e`. `c = None` ties `c` to `b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub a: Axis,
    pub b: Axis,
    pub c: Option<Axis>,
    pub d: Axis,
    pub e: Axis,
}

impl SweepGrid {
    /// Parameter tuples `(a, b, c, d, e, f)` in grid order, `a` outermost.
    pub fn points(&self) -> Vec<[f64; 6]> {
        let mut out = Vec::new();
        let cs = self.c.map(|c| c.values());
        for a in self.a.values() {
            for b in self.b.values() {
                let cvals = cs.clone().unwrap_or_else(|| vec![b]);
                for &c in &cvals {
                    for d in self.d.values() {
                        for e in self.e.values() {
                            out.push([a, b, c, d, e, 0.0 - d - e]);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowVerdict {
    pub cp: bool,
    pub positive: crate::Ternary,
    pub decomposable: crate::decomposability::Decomposable,
    pub sufficient_holds: bool,
    pub necessary_holds: bool,
    pub circulant_nondecomposable: bool,
    pub witness_value: f64,
    pub hessian_gate: Option<bool>,
    pub region: Membership,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: [f64; 6],
    pub verdict: std::result::Result<RowVerdict, String>,
}

fn evaluate(p: [f64; 6], tol: &Tolerance) -> Result<RowVerdict> {
    let [a, b, c, d, e, f] = p;
    let bp = BirkhoffParams::new(a, b, c, d, e, f, tol)?;
    let w = w_from_birkhoff(&bp, tol)?;
    let r = classify(&w, tol)?;
    Ok(RowVerdict {
        cp: r.cp,
        positive: r.positive,
        decomposable: r.decomposable,
        sufficient_holds: r.decomposability.sufficient_holds,
        necessary_holds: r.decomposability.necessary_holds,
        circulant_nondecomposable: r.decomposability.circulant_nondecomposable,
        witness_value: r.decomposability.witness_value,
        hessian_gate: r.positivity.as_ref().map(|pv| pv.conditions.hessian_gate),
        region: membership(a, b, c, d, e, tol),
        consistent: r.consistent(),
    })
}

pub fn run_sweep(grid: &SweepGrid, tol: &Tolerance) -> Result<Vec<SweepRow>> {
    tol.validate()?;
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(points
        .into_par_iter()
        .map(|p| SweepRow {
            params: p,
            verdict: evaluate(p, tol).map_err(|e| e.to_string()),
        })
        .collect())
}

pub const CSV_HEADER: &str = "a,b,c,d,e,f,cp,positive,decomposable,sufficient,necessary,circulant_nondecomposable,witness_value,hessian_gate,region,consistent,error";

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let params: Vec<String> = row.params.iter().map(|v| format!("{v}")).collect();
        out.push_str(&params.join(","));
        match &row.verdict {
            Ok(v) => {
                let gate = v.hessian_gate.map_or(String::new(), |g| g.to_string());
                let region = serde_json::to_value(v.region).ok().and_then(|j| j.as_str().map(String::from)).unwrap_or_default();
                let _ = writeln!(
                    out,
                    ",{},{},{},{},{},{},{},{},{},{},",
                    v.cp,
                    v.positive,
                    v.decomposable,
                    v.sufficient_holds,
                    v.necessary_holds,
                    v.circulant_nondecomposable,
                    v.witness_value,
                    gate,
                    region,
                    v.consistent
                );
            }
            Err(e) => {
                let _ = writeln!(out, ",,,,,,,,,,,\"{}\"", e.replace('"', "'"));
            }
        }
    }
    out
}
