//! Matrix text format.
//!
//! ```json
//! {"dim": 2, "entries": [[1.0e0, 0.0e0], [0.5e0, -0.25e0], ...]}
//! ```
//!
//! `entries` is row-major, one `[re, im]` pair per entry. Values are written
//! with 17 significant digits, which round-trips every finite `f64`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
pub struct MatrixDocument {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::Parse(format!(
                "dim {} requires {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        if self.entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse("entries must be finite".into()));
        }
        let values: Vec<Complex64> = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Ok(DMatrix::from_row_slice(self.dim, self.dim, &values))
    }
}

pub fn read_matrix(text: &str) -> Result<ComplexMatrix> {
    let doc: MatrixDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_matrix()
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    read_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(m: &ComplexMatrix) -> Result<String> {
    if !m.is_square() {
        return Err(Error::Input("only square matrices can be written".into()));
    }
    let n = m.nrows();
    let mut out = String::new();
    write!(out, "{{\"dim\": {n}, \"entries\": [").unwrap();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Input("cannot write non-finite entries".into()));
            }
            let sep = if i == 0 && j == 0 { "" } else { ", " };
            write!(out, "{sep}[{:.16e}, {:.16e}]", z.re, z.im).unwrap();
        }
    }
    out.push_str("]}\n");
    Ok(out)
}

pub fn write_matrix_file(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, write_matrix(m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_document() {
        let m = read_matrix(r#"{"dim": 2, "entries": [[1, 0], [0, 2], [0, -2], [3, 0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 2.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, -2.0));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(read_matrix(r#"{"dim": 2, "entries": [[1, 0]]}"#).is_err());
        assert!(read_matrix(r#"{"dim": 0, "entries": []}"#).is_err());
        assert!(read_matrix("not json").is_err());
        assert!(read_matrix(r#"{"entries": []}"#).is_err());
    }

    #[test]
    fn seventeen_significant_digits() {
        let m = DMatrix::from_element(1, 1, Complex64::new(0.1, -1.0 / 3.0));
        let text = write_matrix(&m).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
    }

    proptest! {
        #[test]
        fn bit_exact_round_trip(
            dim in 1usize..4,
            bits in proptest::collection::vec(any::<u64>(), 32),
        ) {
            let vals: Vec<Complex64> = (0..dim * dim)
                .map(|k| {
                    let re = f64::from_bits(bits[2 * k]);
                    let im = f64::from_bits(bits[2 * k + 1]);
                    let fix = |v: f64| if v.is_finite() { v } else { 1.5 };
                    Complex64::new(fix(re), fix(im))
                })
                .collect();
            let m = DMatrix::from_row_slice(dim, dim, &vals);
            let back = read_matrix(&write_matrix(&m).unwrap()).unwrap();
            for (a, b) in m.iter().zip(back.iter()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
