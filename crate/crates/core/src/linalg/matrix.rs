use std::ops::{Add, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix with no structural guarantee.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense Hermitian matrix.
///
/// The stored form is exactly Hermitian: construction symmetrizes the input
/// as `(X + X*) / 2`, so diagonal entries are real. Values are immutable;
/// every operation returns a fresh matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Builds from row-major entries, checking finiteness and hermiticity
    /// within `HERMITICITY_TOL * max|entry|`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::try_from_matrix(DMatrix::from_row_slice(dim, dim, &entries))
    }

    pub fn try_from_matrix(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Input(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        let scale = max_abs(&m);
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                if dev > HERMITICITY_TOL * scale {
                    return Err(Error::Input(format!(
                        "matrix is not Hermitian: entry ({i},{j}) deviates by {dev:e}"
                    )));
                }
            }
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without the hermiticity check. For matrices that are
    /// Hermitian by construction up to rounding.
    pub fn symmetrize(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self { inner: out }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { inner: m }
    }

    /// Real symmetric matrix from row-major values.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::from_entries(
            dim,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * t),
        }
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.inner)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.inner)
    }

    /// Lexicographic order on row-major `(re, im)` bit patterns under
    /// `f64::total_cmp`; used to canonicalize the order of input lists.
    pub fn content_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            let a = self.inner.transpose();
            let b = other.inner.transpose();
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &Self, t: f64) {
        self.inner.zip_apply(&other.inner, |a, b| *a += b * t);
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in matrix sum");
        HermitianMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix difference"
        );
        HermitianMatrix::symmetrize(&self.inner - &rhs.inner)
    }
}

pub(crate) fn norm_inf(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
