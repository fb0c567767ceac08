use serde::{Serialize, Serializer};

use super::WMatrix;
use crate::numerics::SymMatrix;

/// Slots of the `E_ii ⊗ E_ii` entries in the 9x9 Choi matrix.
pub const DIAGONAL_SLOTS: [usize; 3] = [0, 4, 8];

/// Choi matrix `Σ E_ij ⊗ Φ_W(E_ij)`, a real symmetric 9x9 matrix.
///
/// Row/column `3i + k` carries the product index `(i, k)`. The diagonal is
/// `w_ki - δ_ik` and the only off-diagonal entries are the `-1` couplings
/// among slots 0, 4 and 8.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix(SymMatrix);

impl ChoiMatrix {
    pub fn matrix(&self) -> &SymMatrix {
        &self.0
    }

    pub fn into_inner(self) -> SymMatrix {
        self.0
    }
}

impl Serialize for ChoiMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

pub fn choi_matrix(w: &WMatrix) -> ChoiMatrix {
    let m = SymMatrix::from_fn(9, |r, c| {
        let (i, k) = (r / 3, r % 3);
        let (j, l) = (c / 3, c % 3);
        // block (i, j) is Φ(E_ij) = δ_ij diag(w_·i) - E_ij
        let mut v = 0.0;
        if i == j && k == l {
            v += w.get(k, i);
        }
        if k == i && l == j {
            v -= 1.0;
        }
        v
    })
    .expect("fixed dimension");
    ChoiMatrix(m)
}

/// `(id ⊗ T)`: entry `((i,k),(j,l))` moves to `((i,l),(j,k))`.
pub fn partial_transpose(m: &SymMatrix) -> SymMatrix {
    assert_eq!(m.dim(), 9, "partial transpose is defined on 3⊗3");
    SymMatrix::from_fn(9, |r, c| {
        let (i, k) = (r / 3, r % 3);
        let (j, l) = (c / 3, c % 3);
        m.get(3 * i + l, 3 * j + k)
    })
    .expect("fixed dimension")
}
