use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const MAX_PERMANENT_DIM: usize = 12;

/// Permanent by Ryser's inclusion–exclusion formula, visiting column
/// subsets in Gray-code order:
/// `perm(X) = (-1)^m Σ_{S ⊆ [m]} (-1)^{|S|} Π_i Σ_{j∈S} X[i][j]`.
pub fn permanent_oracle(x: &ComplexMatrix) -> Result<Complex64> {
    if !x.is_square() {
        return Err(Error::Input("permanent of a non-square matrix".into()));
    }
    let m = x.nrows();
    if m > MAX_PERMANENT_DIM {
        return Err(Error::Budget {
            requested: m as u128,
            limit: MAX_PERMANENT_DIM,
        });
    }
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); m];
    let mut in_set = vec![false; m];
    let mut total = Complex64::new(0.0, 0.0);
    let mut size = 0usize;
    for g in 1u64..(1u64 << m) {
        let j = g.trailing_zeros() as usize;
        if in_set[j] {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r -= x[(i, j)];
            }
            size -= 1;
        } else {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r += x[(i, j)];
            }
            size += 1;
        }
        in_set[j] = !in_set[j];
        let prod: Complex64 = row_sums.iter().product();
        if size % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if m % 2 == 0 { total } else { -total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn identity_and_ones() {
        for m in 1..=7 {
            let id: ComplexMatrix = DMatrix::identity(m, m);
            assert!((permanent_oracle(&id).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let ones = DMatrix::from_element(m, m, Complex64::new(1.0, 0.0));
            let fact: f64 = (1..=m).map(|v| v as f64).product();
            assert!((permanent_oracle(&ones).unwrap().re - fact).abs() < 1e-9 * fact);
        }
    }

    #[test]
    fn two_by_two() {
        let x = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 1.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(0.0, -1.0),
            ],
        );
        // ad + bc = (1+i)(-i) + 6 = 7 - i
        assert!((permanent_oracle(&x).unwrap() - Complex64::new(7.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn size_guard() {
        let big: ComplexMatrix = DMatrix::identity(13, 13);
        assert!(permanent_oracle(&big).unwrap_err().is_budget());
    }
}
