//! The matrix `W`, its gauge-fixed Birkhoff parameters, the map action and
//! the Choi matrix.

mod birkhoff;
mod choi;
mod hermitian;
mod wmatrix;

pub use birkhoff::{
    birkhoff_from_w, circulant_average, delta, w_from_birkhoff, BirkhoffParams, BirkhoffRepr,
};
pub use choi::{choi_matrix, partial_transpose, ChoiMatrix, DIAGONAL_SLOTS};
pub use hermitian::{apply_map, HermitianInput};
pub use wmatrix::{WMatrix, WMatrixRepr};
