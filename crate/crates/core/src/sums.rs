//! Difference builders for the operator inequalities.
//!
//! Every family is reduced to a [`TermPlan`]: a list of levels, each an
//! integer weight times a sum over index subsets of `(Σ_{i∈I} A_i)^{⊗p}`,
//! plus a common positive denominator. Positive weights form the left-hand
//! side, negative weights the right-hand side, and the difference is
//! `(LHS - RHS) / denominator`. The same plan drives the scalar images in
//! [`crate::gmf::scalar`].
//!
//! Inputs are put in a canonical order before evaluation (by content, see
//! [`HermitianMatrix::content_cmp`]); subsets are enumerated
//! lexicographically and summed pairwise, so results do not depend on the
//! order in which the caller lists interchangeable matrices.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, tensor_power, Budget, HermitianMatrix};

/// Hard cap on the number of subset terms in one plan.
pub const MAX_PLAN_TERMS: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// `(A+B+C)^p + A^p + B^p + C^p ≽ (A+B)^p + (A+C)^p + (B+C)^p`
    Hlawka3,
    /// `(A+B+C)^p + A^p ≽ (A+B)^p + (A+C)^p`
    Supermod,
    /// `S_n + S_{n-2} + ... ≽ S_{n-1} + S_{n-3} + ...`
    Alternating,
    /// `(Σ A_i)^p ≽ Σ A_i^p`
    Superadd,
    /// `(n-2) Σ A_i^p + (Σ A_i)^p ≽ Σ_{i<j} (A_i+A_j)^p`
    PopPairs,
    /// Subset-size `m` generalization of `PopPairs`.
    PopSubsets,
    /// Three-level `(k, ell, m)` inequality between normalized `S_j`.
    PopLevels,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::Hlawka3,
        FamilyId::Supermod,
        FamilyId::Alternating,
        FamilyId::Superadd,
        FamilyId::PopPairs,
        FamilyId::PopSubsets,
        FamilyId::PopLevels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Hlawka3 => "hlawka3",
            FamilyId::Supermod => "supermod",
            FamilyId::Alternating => "alternating",
            FamilyId::Superadd => "superadd",
            FamilyId::PopPairs => "pop-pairs",
            FamilyId::PopSubsets => "pop-subsets",
            FamilyId::PopLevels => "pop-levels",
        }
    }

    /// Families whose operator inequality comes with a proof. The remaining
    /// ones are stated without proof and are only measured.
    pub fn is_proven(self) -> bool {
        !matches!(self, FamilyId::PopSubsets | FamilyId::PopLevels)
    }

    /// Number of input matrices when fixed by the family.
    pub fn fixed_arity(self) -> Option<usize> {
        match self {
            FamilyId::Hlawka3 | FamilyId::Supermod => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == norm || (norm == "supermodularity" && *f == FamilyId::Supermod))
            .ok_or_else(|| Error::Parameter(format!("unknown operator family `{s}`")))
    }
}

/// Family parameters. `k`, `ell`, `m` are subset sizes; `anchor` restricts
/// `PopPairs` to the pairs containing one index (the corollary of the
/// pairwise inequality that singles out `A_anchor`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSumParams {
    pub p: u32,
    pub k: Option<usize>,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub anchor: Option<usize>,
}

impl TensorSumParams {
    pub fn with_p(p: u32) -> Self {
        Self {
            p,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub weight: i64,
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermPlan {
    pub levels: Vec<Level>,
    pub denominator: u64,
}

impl TermPlan {
    pub fn term_count(&self) -> usize {
        self.levels.iter().map(|l| l.subsets.len()).sum()
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 || k > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn level_of_size(weight: i64, n: usize, k: usize) -> Result<Level> {
    if binomial(n, k) > MAX_PLAN_TERMS {
        return Err(Error::Parameter(format!(
            "C({n},{k}) subsets exceed the plan limit"
        )));
    }
    Ok(Level {
        weight,
        subsets: subsets(n, k),
    })
}

fn alternating_levels(n: usize) -> Result<Vec<Level>> {
    (1..=n)
        .rev()
        .map(|size| {
            let weight = if (n - size) % 2 == 0 { 1 } else { -1 };
            level_of_size(weight, n, size)
        })
        .collect()
}

fn as_weight(v: u128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Parameter("coefficient overflow".into()))
}

/// Common-denominator integer form of the three-level coefficients
/// `(m-ell)/(k C(n,k))`, `(ell-k)/(m C(n,m))`, `(m-k)/(ell C(n,ell))`.
/// Returns `(num_k, num_m, num_ell, denominator)` in lowest terms.
pub fn levels_coefficients(
    n: usize,
    k: usize,
    ell: usize,
    m: usize,
) -> Result<(u128, u128, u128, u128)> {
    if !(1 <= k && k < ell && ell < m && m <= n) {
        return Err(Error::Parameter(format!(
            "need 1 <= k < ell < m <= n, got k={k}, ell={ell}, m={m}, n={n}"
        )));
    }
    let dk = k as u128 * binomial(n, k);
    let dm = m as u128 * binomial(n, m);
    let dl = ell as u128 * binomial(n, ell);
    let den = dk.lcm(&dm).lcm(&dl);
    let nk = (m - ell) as u128 * (den / dk);
    let nm = (ell - k) as u128 * (den / dm);
    let nl = (m - k) as u128 * (den / dl);
    let g = nk.gcd(&nm).gcd(&nl).gcd(&den);
    Ok((nk / g, nm / g, nl / g, den / g))
}

/// Term plan for `family` over `n` inputs (already in canonical order).
pub fn plan(family: FamilyId, n: usize, params: &TensorSumParams) -> Result<TermPlan> {
    if let Some(arity) = family.fixed_arity() {
        if n != arity {
            return Err(Error::Parameter(format!(
                "{family} takes exactly {arity} matrices, got {n}"
            )));
        }
    }
    if params.anchor.is_some() && family != FamilyId::PopPairs {
        return Err(Error::Parameter(format!(
            "anchor is only meaningful for pop-pairs, not {family}"
        )));
    }
    let mut denominator = 1u64;
    let levels = match family {
        FamilyId::Hlawka3 | FamilyId::Alternating => {
            if n < 3 {
                return Err(Error::Parameter(format!(
                    "alternating sums need n >= 3, got {n}"
                )));
            }
            alternating_levels(n)?
        }
        FamilyId::Supermod => vec![
            Level {
                weight: 1,
                subsets: vec![vec![0, 1, 2]],
            },
            Level {
                weight: 1,
                subsets: vec![vec![0]],
            },
            Level {
                weight: -1,
                subsets: vec![vec![0, 1], vec![0, 2]],
            },
        ],
        FamilyId::Superadd => {
            if n < 2 {
                return Err(Error::Parameter(format!(
                    "superadditivity needs n >= 2, got {n}"
                )));
            }
            vec![level_of_size(1, n, n)?, level_of_size(-1, n, 1)?]
        }
        FamilyId::PopPairs => {
            if n < 3 {
                return Err(Error::Parameter(format!("pop-pairs needs n >= 3, got {n}")));
            }
            let w = n as i64 - 2;
            match params.anchor {
                None => vec![
                    level_of_size(1, n, n)?,
                    level_of_size(w, n, 1)?,
                    level_of_size(-1, n, 2)?,
                ],
                Some(a) if a < n => vec![
                    level_of_size(1, n, n)?,
                    Level {
                        weight: w,
                        subsets: vec![vec![0]],
                    },
                    Level {
                        weight: -1,
                        subsets: (1..n).map(|j| vec![0, j]).collect(),
                    },
                ],
                Some(a) => {
                    return Err(Error::Parameter(format!(
                        "anchor {a} out of range for n={n}"
                    )))
                }
            }
        }
        FamilyId::PopSubsets => {
            let m = params
                .m
                .ok_or_else(|| Error::Parameter("pop-subsets requires m".into()))?;
            if !(2 <= m && m < n) {
                return Err(Error::Parameter(format!(
                    "pop-subsets needs 2 <= m < n, got m={m}, n={n}"
                )));
            }
            vec![
                level_of_size(as_weight(binomial(n - 2, m - 2))?, n, n)?,
                level_of_size(as_weight(binomial(n - 2, m - 1))?, n, 1)?,
                level_of_size(-1, n, m)?,
            ]
        }
        FamilyId::PopLevels => {
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| Error::Parameter(format!("pop-levels requires {name}")))
            };
            let (k, ell, m) = (
                need(params.k, "k")?,
                need(params.ell, "ell")?,
                need(params.m, "m")?,
            );
            let (nk, nm, nl, den) = levels_coefficients(n, k, ell, m)?;
            denominator =
                u64::try_from(den).map_err(|_| Error::Parameter("coefficient overflow".into()))?;
            vec![
                level_of_size(as_weight(nm)?, n, m)?,
                level_of_size(as_weight(nk)?, n, k)?,
                level_of_size(-as_weight(nl)?, n, ell)?,
            ]
        }
    };
    let plan = TermPlan {
        levels,
        denominator,
    };
    if plan.term_count() as u128 > MAX_PLAN_TERMS {
        return Err(Error::Parameter("too many subset terms".into()));
    }
    Ok(plan)
}

/// Canonical evaluation order of the inputs for `family`. Interchangeable
/// inputs are sorted by content; distinguished ones keep their role.
pub fn canonical_order(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
) -> Vec<usize> {
    let sort_tail = |head: usize, mut rest: Vec<usize>| {
        rest.sort_by(|&a, &b| mats[a].content_cmp(&mats[b]));
        let mut order = vec![head];
        order.extend(rest);
        order
    };
    match (family, params.anchor) {
        (FamilyId::Supermod, _) if !mats.is_empty() => sort_tail(0, (1..mats.len()).collect()),
        (FamilyId::PopPairs, Some(a)) if a < mats.len() => {
            sort_tail(a, (0..mats.len()).filter(|&i| i != a).collect())
        }
        _ => {
            let mut order: Vec<usize> = (0..mats.len()).collect();
            order.sort_by(|&a, &b| mats[a].content_cmp(&mats[b]));
            order
        }
    }
}

/// Pairwise (cascade) summation of a stream of matrices; deterministic in
/// the stream order.
fn pairwise_sum<I>(terms: I) -> Result<Option<HermitianMatrix>>
where
    I: IntoIterator<Item = Result<HermitianMatrix>>,
{
    let mut stack: Vec<(HermitianMatrix, usize)> = Vec::new();
    for term in terms {
        let mut cur = (term?, 1usize);
        while let Some((top, count)) = stack.pop() {
            if count == cur.1 {
                cur = (&top + &cur.0, count + cur.1);
            } else {
                stack.push((top, count));
                break;
            }
        }
        stack.push(cur);
    }
    let mut acc: Option<HermitianMatrix> = None;
    while let Some((m, _)) = stack.pop() {
        acc = Some(match acc {
            None => m,
            Some(a) => &m + &a,
        });
    }
    Ok(acc)
}

pub(crate) fn subset_sum(mats: &[HermitianMatrix], subset: &[usize]) -> HermitianMatrix {
    let mut acc = mats[subset[0]].clone();
    for &i in &subset[1..] {
        acc = &acc + &mats[i];
    }
    acc
}

fn check_same_dims(mats: &[HermitianMatrix]) -> Result<usize> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Input("empty matrix list".into()))?;
    let dim = first.dim();
    if mats.iter().any(|m| m.dim() != dim) {
        return Err(Error::Input(
            "all matrices must have the same dimension".into(),
        ));
    }
    Ok(dim)
}

/// Both sides of a plan evaluated on tensor powers, already divided by the
/// plan denominator.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: HermitianMatrix,
    pub rhs: HermitianMatrix,
}

impl Sides {
    pub fn difference(&self) -> HermitianMatrix {
        &self.lhs - &self.rhs
    }
}

/// Evaluates `plan` on `mats` (taken in the given order) at power `p`.
pub fn evaluate_plan(
    plan: &TermPlan,
    mats: &[HermitianMatrix],
    p: u32,
    budget: &Budget,
) -> Result<Sides> {
    let dim = check_same_dims(mats)?;
    let out_dim = budget.check_power(dim, p)?;
    if p == 0 {
        return Err(Error::Parameter("tensor power must be at least 1".into()));
    }
    let mut lhs = HermitianMatrix::zeros(out_dim);
    let mut rhs = HermitianMatrix::zeros(out_dim);
    for level in &plan.levels {
        if level.weight == 0 {
            continue;
        }
        let terms = level
            .subsets
            .iter()
            .map(|s| tensor_power(&subset_sum(mats, s), p, budget));
        let Some(level_sum) = pairwise_sum(terms)? else {
            continue;
        };
        if level.weight > 0 {
            lhs.add_assign_scaled(&level_sum, level.weight as f64);
        } else {
            rhs.add_assign_scaled(&level_sum, level.weight.unsigned_abs() as f64);
        }
    }
    if plan.denominator != 1 {
        let inv = 1.0 / plan.denominator as f64;
        lhs = lhs.scale(inv);
        rhs = rhs.scale(inv);
    }
    Ok(Sides { lhs, rhs })
}

fn reorder(mats: &[HermitianMatrix], order: &[usize]) -> Vec<HermitianMatrix> {
    order.iter().map(|&i| mats[i].clone()).collect()
}

/// Canonicalizes, plans and evaluates `family` on `mats`.
pub fn family_sides(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
    budget: &Budget,
) -> Result<Sides> {
    check_same_dims(mats)?;
    let plan = plan(family, mats.len(), params)?;
    let ordered = reorder(mats, &canonical_order(family, mats, params));
    evaluate_plan(&plan, &ordered, params.p, budget)
}

fn family_difference(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: TensorSumParams,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    Ok(family_sides(family, mats, &params, budget)?.difference())
}

/// `S_{k,[n]}^p`: sum over all `k`-subsets of `(Σ_{i∈I} A_i)^{⊗p}`.
pub fn symmetric_tensor_sum(
    mats: &[HermitianMatrix],
    k: usize,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    check_same_dims(mats)?;
    let n = mats.len();
    if !(1 <= k && k <= n) {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let plan = TermPlan {
        levels: vec![level_of_size(1, n, k)?],
        denominator: 1,
    };
    let ordered = reorder(
        mats,
        &canonical_order(FamilyId::Alternating, mats, &TensorSumParams::default()),
    );
    Ok(evaluate_plan(&plan, &ordered, p, budget)?.lhs)
}

pub fn hlawka3_difference(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: &HermitianMatrix,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    family_difference(
        FamilyId::Hlawka3,
        &[a.clone(), b.clone(), c.clone()],
        TensorSumParams::with_p(p),
        budget,
    )
}

pub fn supermodularity_difference(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: &HermitianMatrix,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    family_difference(
        FamilyId::Supermod,
        &[a.clone(), b.clone(), c.clone()],
        TensorSumParams::with_p(p),
        budget,
    )
}

pub fn alternating_difference(
    mats: &[HermitianMatrix],
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    family_difference(
        FamilyId::Alternating,
        mats,
        TensorSumParams::with_p(p),
        budget,
    )
}

pub fn superadditivity_difference(
    mats: &[HermitianMatrix],
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    family_difference(FamilyId::Superadd, mats, TensorSumParams::with_p(p), budget)
}

pub fn pop_pairs_difference(
    mats: &[HermitianMatrix],
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    family_difference(FamilyId::PopPairs, mats, TensorSumParams::with_p(p), budget)
}

/// `(Σ A_i)^p + (n-2) A_a^p - Σ_{j≠a} (A_a + A_j)^p`.
pub fn pop_pairs_anchored_difference(
    mats: &[HermitianMatrix],
    anchor: usize,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    let params = TensorSumParams {
        anchor: Some(anchor),
        ..TensorSumParams::with_p(p)
    };
    family_difference(FamilyId::PopPairs, mats, params, budget)
}

pub fn pop_subsets_difference(
    mats: &[HermitianMatrix],
    m: usize,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    let params = TensorSumParams {
        m: Some(m),
        ..TensorSumParams::with_p(p)
    };
    family_difference(FamilyId::PopSubsets, mats, params, budget)
}

pub fn pop_levels_difference(
    mats: &[HermitianMatrix],
    k: usize,
    ell: usize,
    m: usize,
    p: u32,
    budget: &Budget,
) -> Result<HermitianMatrix> {
    let params = TensorSumParams {
        k: Some(k),
        ell: Some(ell),
        m: Some(m),
        ..TensorSumParams::with_p(p)
    };
    family_difference(FamilyId::PopLevels, mats, params, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InputKind {
    PositiveDefinite,
    /// At least one input is singular (but still PSD).
    SemiDefinite,
}

/// Relative tolerance used when classifying inputs.
pub const INPUT_PSD_TOL: f64 = 1e-12;

/// Rejects inputs that are not PSD and reports whether all are strictly PD.
pub fn classify_inputs(mats: &[HermitianMatrix]) -> Result<InputKind> {
    let mut kind = InputKind::PositiveDefinite;
    for (i, m) in mats.iter().enumerate() {
        let lo = min_eigenvalue(m)?;
        let tol = INPUT_PSD_TOL * m.norm_inf().max(1.0);
        if lo < -tol {
            return Err(Error::Input(format!(
                "input {i} is not positive semidefinite (min eigenvalue {lo:e})"
            )));
        }
        if lo <= tol {
            kind = InputKind::SemiDefinite;
        }
    }
    Ok(kind)
}

/// Difference matrix together with the facts needed to audit it.
#[derive(Clone, Debug)]
pub struct Difference {
    pub matrix: HermitianMatrix,
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    pub input_kind: InputKind,
}

/// Validated entry point used by the harness: checks that inputs are PSD,
/// then builds the family's difference.
pub fn build_difference(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
    budget: &Budget,
) -> Result<Difference> {
    check_same_dims(mats)?;
    let input_kind = classify_inputs(mats)?;
    let sides = family_sides(family, mats, params, budget)?;
    Ok(Difference {
        matrix: sides.difference(),
        lhs_norm: sides.lhs.norm_inf(),
        rhs_norm: sides.rhs.norm_inf(),
        input_kind,
    })
}
