//! Character-table file.
//!
//! ```json
//! {"degree": 2, "elements": [
//!   {"perm": [0, 1], "value": [1.0, 0.0]},
//!   {"perm": [1, 0], "value": [-1.0, 0.0]}
//! ]}
//! ```
//!
//! The listed permutations form the group `G`; `value` is `χ(σ)` as
//! `[re, im]`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::character::CharacterSpec;
use super::function::{enumerate_group, GroupSpec};
use super::permutation::Permutation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntry {
    pub perm: Permutation,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTable {
    pub degree: usize,
    pub elements: Vec<TableEntry>,
}

impl CharacterTable {
    /// Validated group and character described by the table.
    pub fn into_specs(self) -> Result<(GroupSpec, CharacterSpec)> {
        let mut values = BTreeMap::new();
        for e in &self.elements {
            if e.perm.degree() != self.degree {
                return Err(Error::Parse(format!(
                    "permutation {} does not have degree {}",
                    e.perm, self.degree
                )));
            }
            if !e.value.iter().all(|v| v.is_finite()) {
                return Err(Error::Parse(format!(
                    "non-finite character value for {}",
                    e.perm
                )));
            }
            if values
                .insert(e.perm.clone(), Complex64::new(e.value[0], e.value[1]))
                .is_some()
            {
                return Err(Error::Parse(format!("permutation {} listed twice", e.perm)));
            }
        }
        let group = GroupSpec::Explicit(self.elements.into_iter().map(|e| e.perm).collect());
        enumerate_group(&group)?;
        Ok((group, CharacterSpec::Table(values)))
    }
}

pub fn read_character_table(text: &str) -> Result<(GroupSpec, CharacterSpec)> {
    let table: CharacterTable =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    table.into_specs()
}

pub fn read_character_table_file(path: impl AsRef<Path>) -> Result<(GroupSpec, CharacterSpec)> {
    read_character_table(&std::fs::read_to_string(path)?)
}
