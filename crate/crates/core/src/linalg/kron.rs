use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_TENSOR_DIM: usize = 4096;

/// Upper bound on the side length of any matrix built by tensor operations.
/// Operations refuse larger requests instead of truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_tensor_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_tensor_dim: DEFAULT_MAX_TENSOR_DIM,
        }
    }
}

impl Budget {
    pub fn new(max_tensor_dim: usize) -> Self {
        Self { max_tensor_dim }
    }

    pub fn check(&self, requested: u128) -> Result<usize> {
        if requested > self.max_tensor_dim as u128 {
            return Err(Error::Budget {
                requested,
                limit: self.max_tensor_dim,
            });
        }
        Ok(requested as usize)
    }

    /// Checks `dim^p` without overflow.
    pub fn check_power(&self, dim: usize, p: u32) -> Result<usize> {
        let requested = (dim as u128).checked_pow(p).unwrap_or(u128::MAX);
        self.check(requested)
    }
}

/// Kronecker product: entry `(i*q + k, j*q + l)` is `a[i][j] * b[k][l]`
/// where `q = dim(b)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix, budget: &Budget) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Input("kron expects square matrices".into()));
    }
    let (na, nb) = (a.nrows(), b.nrows());
    let n = budget.check(na as u128 * nb as u128)?;
    let mut out = DMatrix::zeros(n, n);
    for j in 0..na {
        for i in 0..na {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for l in 0..nb {
                for k in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

impl HermitianMatrix {
    pub fn kron(&self, other: &HermitianMatrix, budget: &Budget) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::symmetrize(kron(
            self.as_matrix(),
            other.as_matrix(),
            budget,
        )?))
    }
}

/// `p`-fold left-associated Kronecker power `((A ⊗ A) ⊗ A) ⊗ ...`.
pub fn tensor_power(a: &HermitianMatrix, p: u32, budget: &Budget) -> Result<HermitianMatrix> {
    if p == 0 {
        return Err(Error::Parameter("tensor power must be at least 1".into()));
    }
    budget.check_power(a.dim(), p)?;
    let base = a.as_matrix();
    let mut acc = base.clone();
    for _ in 1..p {
        acc = kron(&acc, base, budget)?;
    }
    Ok(HermitianMatrix::symmetrize(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(v)
    }

    #[test]
    fn identity_factor_gives_block_diagonal() {
        let a = HermitianMatrix::from_entries(
            2,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, -1.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        let k = HermitianMatrix::identity(2)
            .kron(&a, &Budget::default())
            .unwrap();
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let expect = if bi == bj {
                            a.get(i, j)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        assert_eq!(k.get(2 * bi + i, 2 * bj + j), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn dimensions_multiply() {
        let k = kron(
            HermitianMatrix::identity(2).as_matrix(),
            HermitianMatrix::identity(3).as_matrix(),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(k.shape(), (6, 6));
    }

    #[test]
    fn diagonal_kron() {
        let k = diag(&[1.0, 2.0])
            .kron(&diag(&[3.0, 5.0]), &Budget::default())
            .unwrap();
        assert_eq!(k, diag(&[3.0, 5.0, 6.0, 10.0]));
    }

    #[test]
    fn tensor_power_small_cases() {
        let b = Budget::default();
        let a = diag(&[1.0, 2.0]);
        assert_eq!(tensor_power(&a, 1, &b).unwrap(), a);
        assert_eq!(
            tensor_power(&a, 2, &b).unwrap(),
            diag(&[1.0, 2.0, 2.0, 4.0])
        );
        let h = HermitianMatrix::from_real(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let k3 = h.kron(&h, &b).unwrap().kron(&h, &b).unwrap();
        assert_eq!(tensor_power(&h, 3, &b).unwrap(), k3);
    }

    #[test]
    fn budget_boundary() {
        let b = Budget::default();
        assert_eq!(b.check_power(2, 12).unwrap(), 4096);
        assert!(b.check_power(2, 13).unwrap_err().is_budget());
        assert!(b.check_power(3, 200).unwrap_err().is_budget());
        let small = Budget::new(8);
        assert!(tensor_power(&diag(&[1.0, 1.0]), 4, &small)
            .unwrap_err()
            .is_budget());
        assert!(kron(
            HermitianMatrix::identity(3).as_matrix(),
            HermitianMatrix::identity(3).as_matrix(),
            &small
        )
        .unwrap_err()
        .is_budget());
    }

    #[test]
    fn zero_power_rejected() {
        assert!(matches!(
            tensor_power(&diag(&[1.0]), 0, &Budget::default()),
            Err(Error::Parameter(_))
        ));
    }
}
