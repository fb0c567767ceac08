//! Small dense numerics: a Jacobi eigen solver for symmetric matrices up to
//! 9x9, real roots of polynomials up to degree four, and the tolerance
//! policy shared by the rest of the crate.

mod eigen;
mod poly;
mod sym;
mod tolerance;

pub use eigen::{eig_sym, is_psd, min_eigenvalue, SymEigen};
pub use poly::{real_roots, Poly};
pub use sym::{SymMatrix, MAX_DIM};
pub use tolerance::Tolerance;
