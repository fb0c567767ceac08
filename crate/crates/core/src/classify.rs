//! Full classification of one map: positivity, complete positivity and
//! decomposability with their certificates, plus cross-checks between the
//! independent routes.

use serde::Serialize;

use crate::decomposability::{decide, Decomposable, DecomposabilityVerdict};
use crate::error::{Error, Result};
use crate::model::{BirkhoffParams, WMatrix};
use crate::numerics::Tolerance;
use crate::oracles::{find_violation, SearchDepth, Witness};
use crate::positivity::{classify_positivity, is_completely_positive, PositivityBasis, PositivityVerdict};
use crate::Ternary;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapReport {
    pub w: WMatrix,
    pub gauge: BirkhoffParams,
    pub cp: bool,
    pub positive: Ternary,
    pub decomposable: Decomposable,
    /// `W` is block diagonal up to permutation: the singular boundary where
    /// the vertex/edge/interior analysis does not apply.
    pub block_diagonal: bool,
    /// Absent for block-diagonal `W`.
    pub positivity: Option<PositivityVerdict>,
    pub decomposability: DecomposabilityVerdict,
    /// Rank-one witness for a `no` on the singular boundary.
    pub boundary_witness: Option<Witness>,
    /// Disagreements between independent routes; non-empty means a bug.
    pub consistency: Vec<String>,
}

impl MapReport {
    pub fn consistent(&self) -> bool {
        self.consistency.is_empty()
    }

    /// Turn recorded disagreements into an error.
    pub fn check(&self) -> Result<()> {
        if self.consistent() {
            Ok(())
        } else {
            Err(Error::Consistency(self.consistency.join("; ")))
        }
    }
}

pub fn classify(w: &WMatrix, tol: &Tolerance) -> Result<MapReport> {
    tol.validate()?;
    let mut consistency = Vec::new();
    let block = w.block_diagonal_index(tol).is_some();

    let (mut positivity, cp, mut positive, boundary_witness) = if block {
        let cp = is_completely_positive(w, tol);
        let witness = if cp { None } else { find_violation(w, tol, SearchDepth::Thorough) };
        let positive = match (cp, witness) {
            (true, _) => Ternary::Yes,
            (false, Some(_)) => Ternary::No,
            (false, None) => Ternary::Unknown,
        };
        (None, cp, positive, witness)
    } else {
        let pv = classify_positivity(w, tol)?;
        (Some(pv.clone()), pv.cp, pv.positive, None)
    };

    let decomposability = decide(w, cp, positive, tol)?;

    if positive == Ternary::Unknown && decomposability.decomposable == Decomposable::Yes {
        positive = Ternary::Yes;
        if let Some(pv) = positivity.as_mut() {
            pv.positive = Ternary::Yes;
            pv.basis = PositivityBasis::Decomposition;
        }
    }

    if let Some(pv) = &positivity {
        if !pv.conditions.hessian_check.consistent {
            consistency.push(format!(
                "Hessian closed form ({}) disagrees with the restricted eigenvalue {:e}",
                pv.conditions.hessian_check.formula, pv.conditions.hessian_check.restricted_eigenvalues[0]
            ));
        }
    }
    let witness_eig = positivity
        .as_ref()
        .and_then(|pv| pv.witness)
        .or(boundary_witness)
        .map(|wit| wit.min_eigenvalue);
    if let Some(lam) = witness_eig {
        if decomposability.sufficient_holds && lam < -1e-7 * (1.0 + w.w()) {
            consistency.push(format!(
                "decomposition certificate exists but a rank-one witness has eigenvalue {lam:e}"
            ));
        }
    }
    if cp && !decomposability.necessary_holds {
        consistency.push(format!(
            "completely positive but the decomposability witness value is {}",
            decomposability.witness_value
        ));
    }
    if let Some(d) = &decomposability.decomposition {
        if d.residual > 1e-12 * (1.0 + w.w()) {
            consistency.push(format!("decomposition residual {:e}", d.residual));
        }
    }

    Ok(MapReport {
        w: w.clone(),
        gauge: w.gauge(),
        cp,
        positive,
        decomposable: decomposability.decomposable,
        block_diagonal: block,
        positivity,
        decomposability,
        boundary_witness,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn choi_map() {
        let r = classify(&WMatrix::circulant(2.0, 1.0, 0.0, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!((r.positive, r.cp, r.decomposable), (Ternary::Yes, false, Decomposable::No));
        assert_eq!(r.decomposability.witness_value, -3.0);
        assert!(r.consistent());
    }

    #[test]
    fn cp_map() {
        let r = classify(&WMatrix::circulant(3.0, 1.0, 1.0, &tol()).unwrap(), &tol()).unwrap();
        assert!(r.cp);
        assert_eq!(r.decomposable, Decomposable::Yes);
    }

    #[test]
    fn block_diagonal_map() {
        let w = WMatrix::new([[3.0, 0.0, 0.0], [0.0, 1.5, 1.5], [0.0, 1.5, 1.5]], &tol()).unwrap();
        let r = classify(&w, &tol()).unwrap();
        assert!(r.block_diagonal && r.positivity.is_none());
        assert!(r.consistent());
    }

    #[test]
    fn report_serializes() {
        let r = classify(&WMatrix::circulant(1.7, 0.9, 0.5, &tol()).unwrap(), &tol()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["positive"], "yes");
        let back: WMatrix = serde_json::from_value(v["w"].clone()).unwrap();
        assert_eq!(back, r.w);
        let g: BirkhoffParams = serde_json::from_value(v["gauge"].clone()).unwrap();
        assert_eq!(g, r.gauge);
    }
}
