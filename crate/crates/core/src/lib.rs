//! Positivity, complete positivity and decomposability of the maps
//!
//! ```text
//! Φ_W(X) = diag(Σ_j w_1j x_jj, Σ_j w_2j x_jj, Σ_j w_3j x_jj) - X
//! ```
//!
//! on 3x3 complex matrices, where `W / w` is doubly stochastic, together
//! with the admissible-region curves in the gauge plane `d + e + f = 0`
//! and brute-force oracles that cross-check every verdict.

pub mod classify;
pub mod decomposability;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracles;
pub mod positivity;
pub mod region;
pub mod sweep;
pub mod verify;

pub use classify::{classify, MapReport};
pub use error::{Error, Result};
pub use model::{BirkhoffParams, WMatrix};
pub use numerics::Tolerance;

use serde::{Deserialize, Serialize};

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

impl Ternary {
    pub fn as_str(self) -> &'static str {
        match self {
            Ternary::Yes => "yes",
            Ternary::No => "no",
            Ternary::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Ternary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
