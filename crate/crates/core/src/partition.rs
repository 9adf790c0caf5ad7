//! Partitions of length at most `n`: weakly decreasing tuples of naturals,
//! trailing zeros kept so that the length is the particle number.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing tuple `λ₁ ≥ … ≥ λ_n ≥ 0`. Serializes as a JSON array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// The zero partition `(0, …, 0)` of length `n`.
    pub fn zero(n: usize) -> Self {
        Partition(vec![0; n])
    }

    /// Accepts only already weakly decreasing input.
    pub fn from_ordered(parts: Vec<u32>) -> Option<Self> {
        parts
            .windows(2)
            .all(|w| w[0] >= w[1])
            .then_some(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_part(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// `m_l(λ)`: number of parts equal to `l`.
    pub fn multiplicity(&self, l: u32) -> usize {
        self.0.iter().filter(|&&p| p == l).count()
    }

    /// `β*_l λ`: insert one part of size `l`.
    pub fn insert_part(&self, l: u32) -> Partition {
        let pos = self.0.iter().position(|&p| p < l).unwrap_or(self.0.len());
        let mut parts = self.0.clone();
        parts.insert(pos, l);
        Partition(parts)
    }

    /// `β_l λ`: delete one part of size `l`.
    pub fn delete_part(&self, l: u32) -> Result<Partition> {
        match self.0.iter().position(|&p| p == l) {
            Some(pos) => {
                let mut parts = self.0.clone();
                parts.remove(pos);
                Ok(Partition(parts))
            }
            None => Err(Error::PartAbsent {
                part: l,
                partition: self.0.clone(),
            }),
        }
    }

    /// True when `λ + e_j` is again weakly decreasing (`j` is 0-based).
    pub fn can_raise(&self, j: usize) -> bool {
        j < self.0.len() && (j == 0 || self.0[j - 1] > self.0[j])
    }

    /// True when `λ − e_j` is again a partition (`j` is 0-based).
    pub fn can_lower(&self, j: usize) -> bool {
        j < self.0.len() && self.0[j] > 0 && (j + 1 == self.0.len() || self.0[j] > self.0[j + 1])
    }

    /// `λ + e_j`, unchecked beyond `j < n`.
    pub fn raised(&self, j: usize) -> Partition {
        let mut parts = self.0.clone();
        parts[j] += 1;
        Partition(parts)
    }

    /// `λ − e_j`, unchecked beyond `λ_j > 0`.
    pub fn lowered(&self, j: usize) -> Partition {
        let mut parts = self.0.clone();
        parts[j] -= 1;
        Partition(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;

    fn try_from(parts: Vec<u32>) -> std::result::Result<Self, Self::Error> {
        Partition::from_ordered(parts).ok_or_else(|| "parts must be weakly decreasing".to_string())
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All partitions of length `n` with largest part at most `max_part`.
///
/// Ordered lexicographically on the part tuples, e.g. for `n = 2`, bound 2:
/// `(0,0), (1,0), (1,1), (2,0), (2,1), (2,2)`. The count is `C(max_part + n, n)`.
pub fn enumerate(n: usize, max_part: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fill(n, max_part, &mut current, &mut out);
    out
}

fn fill(n: usize, bound: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if current.len() == n {
        out.push(Partition(current.clone()));
        return;
    }
    for p in 0..=bound {
        current.push(p);
        fill(n, p, current, out);
        current.pop();
    }
}
