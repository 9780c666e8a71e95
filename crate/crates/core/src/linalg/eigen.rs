use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// `H = X + iY` is embedded as the real symmetric `[[X, -Y], [Y, X]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled; every second
/// sorted value is kept.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let m = h.as_matrix();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            real[(i, j)] = z.re;
            real[(i + n, j + n)] = z.re;
            real[(i, j + n)] = -z.im;
            real[(i + n, j)] = z.im;
        }
    }
    let mut values: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    // Pairs are equal up to rounding; averaging keeps the result symmetric.
    Ok(values
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

pub fn min_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(h)?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Equality,
}

/// Outcome of deciding `A ≽ B` from the spectrum of `D = A - B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LoewnerCertificate {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Infinity norm of the difference.
    pub scale: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl LoewnerCertificate {
    /// True for both `Holds` and `Equality`.
    pub fn holds(&self) -> bool {
        !matches!(self.verdict, Verdict::Fails)
    }

    pub fn threshold(&self) -> f64 {
        self.tolerance * self.scale.max(1.0)
    }

    /// Minimum eigenvalue divided by `max(1, scale)`.
    pub fn relative_margin(&self) -> f64 {
        self.min_eigenvalue / self.scale.max(1.0)
    }
}

/// Certifies `d ≽ 0` with relative tolerance `tol`.
pub fn certify_psd(d: &HermitianMatrix, tol: f64) -> Result<LoewnerCertificate> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::Parameter(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    let eig = eigenvalues(d)?;
    let min = eig[0];
    let max = *eig.last().unwrap();
    let scale = d.norm_inf();
    let threshold = tol * scale.max(1.0);
    let verdict = if min >= -threshold && max <= threshold {
        Verdict::Equality
    } else if min >= -threshold {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(LoewnerCertificate {
        min_eigenvalue: min,
        max_eigenvalue: max,
        scale,
        tolerance: tol,
        verdict,
    })
}

/// Decides `a ≽ b` in the Loewner order.
pub fn loewner_geq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<LoewnerCertificate> {
    if a.dim() != b.dim() {
        return Err(Error::Input(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    certify_psd(&(a - b), tol)
}
