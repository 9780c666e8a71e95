use std::collections::BTreeMap;

use num_complex::Complex64;

use super::partition::{CycleType, Partition};
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// Which character `χ` enters `d_χ^G`.
#[derive(Clone, Debug, PartialEq)]
pub enum CharacterSpec {
    /// Irreducible character `χ_λ` of the full symmetric group.
    Partition(Partition),
    Sign,
    Trivial,
    /// Explicit values keyed by group element. Irreducibility is not
    /// verified; see [`super::function::PreparedFunction::new`] for the
    /// checks that are made.
    Table(BTreeMap<Permutation, Complex64>),
}

impl CharacterSpec {
    pub fn label(&self) -> String {
        match self {
            CharacterSpec::Partition(p) => format!(
                "partition={}",
                p.parts()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            CharacterSpec::Sign => "det".into(),
            CharacterSpec::Trivial => "perm".into(),
            CharacterSpec::Table(t) => format!("table[{}]", t.len()),
        }
    }
}

/// Beta-set (first-column hook lengths) of a partition with `len` beads.
fn beta_set(lambda: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|i| lambda.get(i).copied().unwrap_or(0) + (len - 1 - i))
        .collect()
}

fn mn_recursive(beta: &mut Vec<usize>, mu: &[usize]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let mut total = 0;
    for idx in 0..beta.len() {
        let b = beta[idx];
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        // Each bead jumped over is one row of the removed rim hook beyond
        // the first, so the hook height is the count of beads in between.
        let height = beta.iter().filter(|&&c| target < c && c < b).count();
        beta[idx] = target;
        let value = mn_recursive(beta, rest);
        beta[idx] = b;
        total += if height % 2 == 0 { value } else { -value };
    }
    total
}

/// Irreducible character `χ_λ` of `S_m` on the class with cycle type `mu`,
/// by the Murnaghan–Nakayama rule (rim hooks removed on the abacus).
pub fn mn_character(lambda: &Partition, mu: &CycleType) -> Result<i64> {
    if lambda.size() != mu.0.size() {
        return Err(Error::Input(format!(
            "size mismatch: |lambda| = {}, |mu| = {}",
            lambda.size(),
            mu.0.size()
        )));
    }
    let mut beta = beta_set(lambda.parts(), lambda.len());
    Ok(mn_recursive(&mut beta, mu.0.parts()))
}

/// Size of the conjugacy class of `S_m` with cycle type `mu`:
/// `m! / Π_k (k^{a_k} a_k!)`.
pub fn class_size(mu: &CycleType) -> u128 {
    let parts = mu.0.parts();
    let m = mu.0.size();
    let mut denom: u128 = 1;
    let mut i = 0;
    while i < parts.len() {
        let k = parts[i];
        let mut a = 0u128;
        while i < parts.len() && parts[i] == k {
            a += 1;
            i += 1;
        }
        denom *= (k as u128).pow(a as u32) * (1..=a).product::<u128>();
    }
    (1..=m as u128).product::<u128>() / denom
}
