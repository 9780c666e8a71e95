use std::fmt;

use serde::{Deserialize, Serialize};

use super::partition::{CycleType, Partition};
use crate::error::{Error, Result};

/// Bijection of `{0, …, m-1}` stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in &images {
            if v >= m || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Input(format!(
                    "{images:?} is not a permutation of 0..{m}"
                )));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// Permutation of `0..m` given by disjoint cycles, e.g. `[[0, 1, 2], [3, 4]]`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        for cycle in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                if from >= m || to >= m {
                    return Err(Error::Input(format!(
                        "cycle entry out of range for degree {m}"
                    )));
                }
                images[from] = to;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch in composition"
        );
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Self(inv)
    }

    /// Cycle lengths, including fixed points, in descending order.
    pub fn cycle_type(&self) -> CycleType {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut lengths = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lengths.push(len);
        }
        CycleType(Partition::from_unsorted(lengths))
    }

    pub fn sign(&self) -> i64 {
        let ct = self.cycle_type();
        if (self.degree() - ct.0.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Advances to the next permutation in lexicographic order of images.
    pub(crate) fn next_lex(&mut self) -> bool {
        let a = &mut self.0;
        let n = a.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
