//! Scalar images of the operator inequalities under `d_χ^G`.
//!
//! Each operator term `(Σ_{i∈I} A_i)^{⊗p}` of a family is replaced by
//! `d_χ^G(Σ_{i∈I} A_i)`; subset sizes and coefficients are unchanged. The
//! tensor power is implicit: `d_χ^G` is a compression of the `m`-th tensor
//! power, `m` being the matrix dimension, so `params.p` is ignored here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::character::CharacterSpec;
use super::function::{GroupSpec, PreparedFunction};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::sums::{
    canonical_order, classify_inputs, plan, subset_sum, FamilyId, InputKind, TensorSumParams,
};

/// Relative tolerance: `holds` iff `margin ≥ -SCALAR_TOL * scale`.
pub const SCALAR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Sum of absolute values of all weighted terms (after the common
    /// denominator).
    pub scale: f64,
    /// Largest imaginary part among the evaluated terms; zero in exact
    /// arithmetic for Hermitian PSD inputs and real characters.
    pub imag_residual: f64,
    pub input_kind: InputKind,
    pub holds: bool,
}

/// Evaluates the `d_χ^G` image of `family` on `mats`.
pub fn scalar_inequality_check(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
    group: &GroupSpec,
    chi: &CharacterSpec,
) -> Result<ScalarInequality> {
    let prepared = PreparedFunction::new(group, chi)?;
    scalar_inequality_check_prepared(family, mats, params, &prepared)
}

pub fn scalar_inequality_check_prepared(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
    function: &PreparedFunction,
) -> Result<ScalarInequality> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Input("empty matrix list".into()))?;
    if mats.iter().any(|m| m.dim() != first.dim()) {
        return Err(Error::Input(
            "all matrices must have the same dimension".into(),
        ));
    }
    if first.dim() != function.degree() {
        return Err(Error::Unsupported(format!(
            "{family} on {}x{} matrices with a character of degree {}",
            first.dim(),
            first.dim(),
            function.degree()
        )));
    }
    let input_kind = classify_inputs(mats)?;
    let plan = plan(family, mats.len(), params)?;
    let ordered: Vec<HermitianMatrix> = canonical_order(family, mats, params)
        .into_iter()
        .map(|i| mats[i].clone())
        .collect();

    let (mut lhs, mut rhs, mut scale, mut imag) = (0.0, 0.0, 0.0, 0.0f64);
    for level in &plan.levels {
        let mut level_sum = Complex64::new(0.0, 0.0);
        let mut level_abs = 0.0;
        for s in &level.subsets {
            let v = function.eval(subset_sum(&ordered, s).as_matrix())?;
            imag = imag.max(v.im.abs());
            level_sum += v;
            level_abs += v.norm();
        }
        let w = level.weight as f64;
        scale += w.abs() * level_abs;
        if level.weight > 0 {
            lhs += w * level_sum.re;
        } else {
            rhs += -w * level_sum.re;
        }
    }
    let den = plan.denominator as f64;
    let (lhs, rhs, scale) = (lhs / den, rhs / den, scale / den);
    let margin = lhs - rhs;
    Ok(ScalarInequality {
        lhs,
        rhs,
        margin,
        scale,
        imag_residual: imag,
        input_kind,
        holds: margin >= -SCALAR_TOL * scale,
    })
}
