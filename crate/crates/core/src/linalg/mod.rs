//! Dense complex Hermitian matrix algebra.

mod eigen;
mod io;
mod kron;
mod matrix;
mod sample;

pub use eigen::{
    certify_psd, eigenvalues, loewner_geq, min_eigenvalue, LoewnerCertificate, Verdict,
};
pub use io::{read_matrix, read_matrix_file, write_matrix, write_matrix_file, MatrixDocument};
pub use kron::{kron, tensor_power, Budget, DEFAULT_MAX_TENSOR_DIM};
pub use matrix::{ComplexMatrix, HermitianMatrix, HERMITICITY_TOL};
pub use sample::{random_pd, PdSampleConfig, SpectrumKind};

/// Default relative tolerance for PSD decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-8;
