use std::collections::{HashMap, HashSet};

use num_complex::Complex64;

use super::character::{mn_character, CharacterSpec};
use super::partition::CycleType;
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::sums::{binomial, subsets};

/// `8!`; the defining sum costs `O(|G| m)`.
pub const MAX_GROUP_ORDER: usize = 40320;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    FullSymmetric(usize),
    /// Explicit subgroup of `S_m`; must be closed under composition and
    /// inverses.
    Explicit(Vec<Permutation>),
}

impl GroupSpec {
    pub fn degree(&self) -> Option<usize> {
        match self {
            GroupSpec::FullSymmetric(m) => Some(*m),
            GroupSpec::Explicit(elems) => elems.first().map(Permutation::degree),
        }
    }
}

/// Elements of `G` in lexicographic order of their image sequences.
pub fn enumerate_group(spec: &GroupSpec) -> Result<Vec<Permutation>> {
    match spec {
        GroupSpec::FullSymmetric(m) => {
            if *m == 0 {
                return Err(Error::Parameter(
                    "symmetric group degree must be positive".into(),
                ));
            }
            if *m > 8 {
                let order = (1..=*m as u128).product::<u128>();
                return Err(Error::Budget {
                    requested: order,
                    limit: MAX_GROUP_ORDER,
                });
            }
            let mut p = Permutation::identity(*m);
            let mut out = vec![p.clone()];
            while p.next_lex() {
                out.push(p.clone());
            }
            Ok(out)
        }
        GroupSpec::Explicit(elems) => {
            let Some(first) = elems.first() else {
                return Err(Error::Input("explicit group is empty".into()));
            };
            let m = first.degree();
            if elems.iter().any(|p| p.degree() != m) {
                return Err(Error::Input(
                    "explicit group mixes permutation degrees".into(),
                ));
            }
            let mut sorted = elems.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() > MAX_GROUP_ORDER {
                return Err(Error::Budget {
                    requested: sorted.len() as u128,
                    limit: MAX_GROUP_ORDER,
                });
            }
            let set: HashSet<&Permutation> = sorted.iter().collect();
            if !set.contains(&Permutation::identity(m)) {
                return Err(Error::Input(
                    "explicit group does not contain the identity".into(),
                ));
            }
            for a in &sorted {
                if !set.contains(&a.inverse()) {
                    return Err(Error::Input(format!(
                        "explicit group not closed under inverse: {a}"
                    )));
                }
                for b in &sorted {
                    if !set.contains(&a.compose(b)) {
                        return Err(Error::Input(format!(
                            "explicit group not closed under composition: {a} ∘ {b}"
                        )));
                    }
                }
            }
            Ok(sorted)
        }
    }
}

/// Group elements paired with their character values, ready for repeated
/// evaluation of `d_χ^G`.
#[derive(Clone, Debug)]
pub struct PreparedFunction {
    degree: usize,
    terms: Vec<(Permutation, Complex64)>,
}

/// Slack for the `|χ(σ)| ≤ χ(id)` check on user tables.
const TABLE_TOL: f64 = 1e-12;

impl PreparedFunction {
    /// Validates `(group, chi)`: partition characters need the full
    /// symmetric group of matching degree; tables must cover every element,
    /// have `χ(id) > 0` real and `|χ(σ)| ≤ χ(id)`.
    pub fn new(group: &GroupSpec, chi: &CharacterSpec) -> Result<Self> {
        let elems = enumerate_group(group)?;
        let degree = elems[0].degree();
        let terms = match chi {
            CharacterSpec::Sign => elems
                .into_iter()
                .map(|s| {
                    let v = s.sign() as f64;
                    (s, Complex64::new(v, 0.0))
                })
                .collect(),
            CharacterSpec::Trivial => elems
                .into_iter()
                .map(|s| (s, Complex64::new(1.0, 0.0)))
                .collect(),
            CharacterSpec::Partition(lambda) => {
                if !matches!(group, GroupSpec::FullSymmetric(_)) {
                    return Err(Error::Unsupported(
                        "partition characters require the full symmetric group; supply a table instead".into(),
                    ));
                }
                if lambda.size() != degree {
                    return Err(Error::Input(format!(
                        "partition {lambda} has size {}, group degree is {degree}",
                        lambda.size()
                    )));
                }
                let mut cache: HashMap<CycleType, f64> = HashMap::new();
                let mut out = Vec::with_capacity(elems.len());
                for s in elems {
                    let ct = s.cycle_type();
                    let v = match cache.get(&ct) {
                        Some(&v) => v,
                        None => {
                            let v = mn_character(lambda, &ct)? as f64;
                            cache.insert(ct, v);
                            v
                        }
                    };
                    out.push((s, Complex64::new(v, 0.0)));
                }
                out
            }
            CharacterSpec::Table(table) => {
                let id = Permutation::identity(degree);
                let chi_id = *table.get(&id).ok_or_else(|| {
                    Error::Input("character table has no value for the identity".into())
                })?;
                if !(chi_id.re > 0.0 && chi_id.im.abs() <= TABLE_TOL * chi_id.re) {
                    return Err(Error::Input(format!(
                        "character value at identity must be positive, got {chi_id}"
                    )));
                }
                let mut out = Vec::with_capacity(elems.len());
                for s in elems {
                    let v = *table.get(&s).ok_or_else(|| {
                        Error::Input(format!("character table misses group element {s}"))
                    })?;
                    if v.norm() > chi_id.re * (1.0 + TABLE_TOL) {
                        return Err(Error::Input(format!(
                            "|χ({s})| = {} exceeds χ(id) = {}",
                            v.norm(),
                            chi_id.re
                        )));
                    }
                    out.push((s, v));
                }
                if table.len() != out.len() {
                    return Err(Error::Input(
                        "character table lists elements outside the group".into(),
                    ));
                }
                out
            }
        };
        Ok(Self { degree, terms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, x: &ComplexMatrix) -> Result<Complex64> {
        if !x.is_square() || x.nrows() != self.degree {
            return Err(Error::Unsupported(format!(
                "{}x{} matrix against a group of degree {}",
                x.nrows(),
                x.ncols(),
                self.degree
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (sigma, chi) in &self.terms {
            if chi.re == 0.0 && chi.im == 0.0 {
                continue;
            }
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, &j) in sigma.images().iter().enumerate() {
                prod *= x[(i, j)];
            }
            total += chi * prod;
        }
        Ok(total)
    }
}

/// `d_χ^G(X) = Σ_{σ∈G} χ(σ) Π_i X[i][σ(i)]`.
pub fn generalized_matrix_function(
    x: &ComplexMatrix,
    group: &GroupSpec,
    chi: &CharacterSpec,
) -> Result<Complex64> {
    if let Some(m) = group.degree() {
        if m != x.nrows() || !x.is_square() {
            return Err(Error::Unsupported(format!(
                "{}x{} matrix against a group of degree {m}",
                x.nrows(),
                x.ncols()
            )));
        }
    }
    PreparedFunction::new(group, chi)?.eval(x)
}

/// Determinant by LU elimination with partial pivoting.
pub fn determinant(x: &ComplexMatrix) -> Result<Complex64> {
    if !x.is_square() {
        return Err(Error::Input("determinant of a non-square matrix".into()));
    }
    Ok(x.clone().lu().determinant())
}

/// `s_k = Σ_{|I|=k} det(Σ_{i∈I} A_i)`.
pub fn elementary_symmetric_det(mats: &[HermitianMatrix], k: usize) -> Result<f64> {
    let n = mats.len();
    if !(1 <= k && k <= n) {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let dim = mats[0].dim();
    if mats.iter().any(|m| m.dim() != dim) {
        return Err(Error::Input(
            "all matrices must have the same dimension".into(),
        ));
    }
    if binomial(n, k) > crate::sums::MAX_PLAN_TERMS {
        return Err(Error::Parameter("too many subsets".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mats[a].content_cmp(&mats[b]));
    let ordered: Vec<HermitianMatrix> = order.iter().map(|&i| mats[i].clone()).collect();
    let mut total = 0.0;
    for s in subsets(n, k) {
        total += determinant(crate::sums::subset_sum(&ordered, &s).as_matrix())?.re;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmf::partition::Partition;
    use nalgebra::DMatrix;
    use std::collections::BTreeMap;

    fn real(n: usize, v: &[f64]) -> ComplexMatrix {
        DMatrix::from_row_slice(
            n,
            n,
            &v.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn symmetric_group_sizes() {
        assert_eq!(
            enumerate_group(&GroupSpec::FullSymmetric(3)).unwrap().len(),
            6
        );
        assert_eq!(
            enumerate_group(&GroupSpec::FullSymmetric(8)).unwrap().len(),
            40320
        );
        assert!(enumerate_group(&GroupSpec::FullSymmetric(9))
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn explicit_group_validation() {
        let id = Permutation::identity(3);
        let t = Permutation::new(vec![1, 0, 2]).unwrap();
        let g = enumerate_group(&GroupSpec::Explicit(vec![t.clone(), id.clone()])).unwrap();
        assert_eq!(g, vec![id.clone(), t.clone()]);
        let c = Permutation::new(vec![1, 2, 0]).unwrap();
        assert!(enumerate_group(&GroupSpec::Explicit(vec![id.clone(), c])).is_err());
        assert!(enumerate_group(&GroupSpec::Explicit(vec![t])).is_err());
        assert!(enumerate_group(&GroupSpec::Explicit(vec![])).is_err());
    }

    #[test]
    fn permanent_of_all_ones() {
        let ones = real(3, &[1.0; 9]);
        let v = generalized_matrix_function(
            &ones,
            &GroupSpec::FullSymmetric(3),
            &CharacterSpec::Trivial,
        )
        .unwrap();
        assert_eq!(v, Complex64::new(6.0, 0.0));
    }

    #[test]
    fn immanant_of_identity_is_character_degree() {
        let id = real(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let chi = CharacterSpec::Partition(Partition::new(vec![2, 1]).unwrap());
        let v = generalized_matrix_function(&id, &GroupSpec::FullSymmetric(3), &chi).unwrap();
        assert_eq!(v, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn sign_character_is_determinant() {
        let x = real(3, &[2.0, -1.0, 0.5, 1.0, 3.0, -2.0, 0.0, 1.0, 4.0]);
        let d = generalized_matrix_function(&x, &GroupSpec::FullSymmetric(3), &CharacterSpec::Sign)
            .unwrap();
        let e = determinant(&x).unwrap();
        assert!((d - e).norm() < 1e-12 * e.norm());
    }

    #[test]
    fn degree_mismatch() {
        let x = real(2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            generalized_matrix_function(&x, &GroupSpec::FullSymmetric(3), &CharacterSpec::Sign),
            Err(Error::Unsupported(_))
        ));
        let chi = CharacterSpec::Partition(Partition::new(vec![2, 1]).unwrap());
        assert!(generalized_matrix_function(&x, &GroupSpec::FullSymmetric(2), &chi).is_err());
    }

    #[test]
    fn table_characters_are_checked() {
        let id = Permutation::identity(2);
        let t = Permutation::new(vec![1, 0]).unwrap();
        let group = GroupSpec::Explicit(vec![id.clone(), t.clone()]);
        let x = real(2, &[2.0, 1.0, 1.0, 3.0]);
        let sign: BTreeMap<_, _> = [
            (id.clone(), Complex64::new(1.0, 0.0)),
            (t.clone(), Complex64::new(-1.0, 0.0)),
        ]
        .into_iter()
        .collect();
        let v = generalized_matrix_function(&x, &group, &CharacterSpec::Table(sign)).unwrap();
        assert!((v.re - 5.0).abs() < 1e-15);
        let missing: BTreeMap<_, _> = [(id.clone(), Complex64::new(1.0, 0.0))]
            .into_iter()
            .collect();
        assert!(generalized_matrix_function(&x, &group, &CharacterSpec::Table(missing)).is_err());
        let too_big: BTreeMap<_, _> = [
            (id.clone(), Complex64::new(1.0, 0.0)),
            (t.clone(), Complex64::new(2.0, 0.0)),
        ]
        .into_iter()
        .collect();
        assert!(generalized_matrix_function(&x, &group, &CharacterSpec::Table(too_big)).is_err());
        let neg_id: BTreeMap<_, _> = [
            (id, Complex64::new(-1.0, 0.0)),
            (t, Complex64::new(1.0, 0.0)),
        ]
        .into_iter()
        .collect();
        assert!(generalized_matrix_function(&x, &group, &CharacterSpec::Table(neg_id)).is_err());
    }

    #[test]
    fn partition_character_needs_full_group() {
        let id = Permutation::identity(2);
        let chi = CharacterSpec::Partition(Partition::new(vec![2]).unwrap());
        let x = real(2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            generalized_matrix_function(&x, &GroupSpec::Explicit(vec![id]), &chi),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn elementary_symmetric_det_small_cases() {
        let one = HermitianMatrix::from_real(1, &[1.0]).unwrap();
        let mats = vec![one.clone(), one.clone(), one];
        let s: Vec<f64> = (1..=3)
            .map(|k| elementary_symmetric_det(&mats, k).unwrap())
            .collect();
        assert_eq!(s, vec![3.0, 6.0, 3.0]);
        assert_eq!(s[2] + s[0] - s[1], 0.0);
        assert!(elementary_symmetric_det(&mats, 0).is_err());
        assert!(elementary_symmetric_det(&mats, 4).is_err());

        let a = HermitianMatrix::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let b = HermitianMatrix::diagonal(&[1.0, 4.0]);
        let two = vec![a.clone(), b.clone()];
        assert!((elementary_symmetric_det(&two, 1).unwrap() - 7.0).abs() < 1e-12);
        assert!((elementary_symmetric_det(&two, 2).unwrap() - 17.0).abs() < 1e-12);
    }
}
