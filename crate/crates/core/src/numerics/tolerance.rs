use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack values used when comparing floating point quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Eigenvalue slack for PSD checks.
    pub eps_psd: f64,
    /// Slack for equalities and inequalities between matrix entries.
    pub eps_eq: f64,
    /// Residual slack for accepted polynomial roots.
    pub eps_root: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_psd: 1e-9,
            eps_eq: 1e-9,
            eps_root: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(eps_psd: f64, eps_eq: f64, eps_root: f64) -> Result<Self> {
        let tol = Self {
            eps_psd,
            eps_eq,
            eps_root,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_psd", self.eps_psd),
            ("eps_eq", self.eps_eq),
            ("eps_root", self.eps_root),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Tolerance(name));
            }
        }
        Ok(())
    }

    /// Named presets: `strict`, `default` and `loose`.
    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "strict" => Some(Self {
                eps_psd: 1e-12,
                eps_eq: 1e-12,
                eps_root: 1e-9,
            }),
            "loose" => Some(Self {
                eps_psd: 1e-7,
                eps_eq: 1e-7,
                eps_root: 1e-5,
            }),
            _ => None,
        }
    }
}
