//! Integer partitions and Frobenius coordinates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SymfunError {
    #[error("parts must be weakly decreasing: part {1} follows {0}")]
    IncreasingParts(u32, u32),
    #[error("frobenius arms/legs must be strictly decreasing and equal length")]
    BadFrobenius,
    #[error("series order {have} too small, need {need}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("series inverse needs nonzero constant term")]
    ZeroConstantTerm,
    #[error("series exp needs zero constant term")]
    NonzeroConstantTerm,
    #[error("repeated variable in exact bialternant (alternant vanishes)")]
    RepeatedVariable,
    #[error("indeterminate table entry ({0},{1}) is not forced and not set")]
    MissingTableEntry(i64, u32),
}

/// Partition: weakly decreasing positive parts. Trailing zeros are stripped
/// on construction; the empty partition is allowed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = SymfunError;
    fn try_from(v: Vec<u32>) -> Result<Self, SymfunError> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, SymfunError> {
        for w in parts.windows(2) {
            if w[1] > w[0] {
                return Err(SymfunError::IncreasingParts(w[0], w[1]));
            }
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    /// Hook partition (p|q) in Frobenius notation: one row of length p+1 and
    /// q extra rows of length 1.
    pub fn hook(p: u32, q: u32) -> Self {
        let mut parts = vec![p + 1];
        parts.extend(std::iter::repeat(1).take(q as usize));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Part i (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Conjugate partition (transpose of the Young diagram).
    pub fn transpose(&self) -> Self {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for j in 0..cols {
            t.push(self.parts.iter().filter(|&&p| p as usize > j).count() as u32);
        }
        Partition { parts: t }
    }

    /// Frobenius coordinates: d = #{i : λ_i ≥ i+1} diagonal boxes,
    /// arms p_i = λ_i − i − 1... in 1-based terms p_i = λ_i − i, legs from
    /// the conjugate.
    pub fn to_frobenius(&self) -> FrobeniusCoords {
        let tr = self.transpose();
        let mut arms = Vec::new();
        let mut legs = Vec::new();
        for i in 0.. {
            if self.part(i) as usize > i {
                arms.push(self.part(i) - i as u32 - 1);
                legs.push(tr.part(i) - i as u32 - 1);
            } else {
                break;
            }
        }
        FrobeniusCoords { arms, legs }
    }

    /// Enumerate every partition of weight ≤ `max_weight` (including the
    /// empty one), in a deterministic order.
    pub fn all_up_to_weight(max_weight: u32) -> Vec<Partition> {
        let mut out = vec![Partition::empty()];
        for w in 1..=max_weight {
            let mut acc = Vec::new();
            gen_rec(w, w, &mut Vec::new(), &mut acc);
            out.extend(acc);
        }
        out
    }
}

fn gen_rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: prefix.clone() });
        return;
    }
    let hi = remaining.min(max_part);
    for p in (1..=hi).rev() {
        prefix.push(p);
        gen_rec(remaining - p, p, prefix, out);
        prefix.pop();
    }
}

/// Frobenius coordinates (p_1 > … > p_d ≥ 0 | q_1 > … > q_d ≥ 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrobeniusCoords {
    pub arms: Vec<u32>,
    pub legs: Vec<u32>,
}

impl FrobeniusCoords {
    pub fn new(arms: Vec<u32>, legs: Vec<u32>) -> Result<Self, SymfunError> {
        if arms.len() != legs.len()
            || arms.windows(2).any(|w| w[1] >= w[0])
            || legs.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(SymfunError::BadFrobenius);
        }
        Ok(FrobeniusCoords { arms, legs })
    }

    pub fn depth(&self) -> usize {
        self.arms.len()
    }

    pub fn to_partition(&self) -> Partition {
        let d = self.depth();
        let mut parts = Vec::new();
        for i in 0..d {
            parts.push(self.arms[i] + i as u32 + 1);
        }
        // rows below the diagonal block come from the legs: row i (1-based,
        // i > d) has length #{j ≤ d : λ'_j ≥ i} with λ'_j = q_j + j.
        let max_row = self.legs.first().map(|&q| q as usize + 1).unwrap_or(0);
        for i in (d + 1)..=max_row {
            let len = (0..d)
                .filter(|&j| self.legs[j] as usize + j + 1 >= i)
                .count() as u32;
            if len == 0 {
                break;
            }
            parts.push(len);
        }
        Partition { parts }
    }
}
