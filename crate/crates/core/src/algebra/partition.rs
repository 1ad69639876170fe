//! Integer partitions under the dominance order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DsError, Result};

/// A partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(DsError::invalid("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(DsError::invalid("partition parts must be weakly decreasing"));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `(1^m)`.
    pub fn column(m: usize) -> Self {
        Partition(vec![1; m])
    }

    /// `(m)`, or the empty partition for `m = 0`.
    pub fn row(m: usize) -> Self {
        if m == 0 {
            Partition(Vec::new())
        } else {
            Partition(vec![m])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.0.len()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Transposed Young diagram.
    pub fn dual(&self) -> Partition {
        let parts = (0..self.largest())
            .map(|i| self.0.iter().filter(|&&p| p > i).count())
            .collect();
        Partition(parts)
    }

    fn prefix_sums(&self, len: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..len)
            .map(|i| {
                acc += self.0.get(i).copied().unwrap_or(0);
                acc
            })
            .collect()
    }

    /// `self ⪯ other` in dominance order. Errors on unequal weights.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.weight() != other.weight() {
            return Err(DsError::WeightMismatch(self.weight(), other.weight()));
        }
        let len = self.num_parts().max(other.num_parts());
        Ok(self
            .prefix_sums(len)
            .iter()
            .zip(other.prefix_sums(len))
            .all(|(a, b)| *a <= b))
    }

    /// Dominance comparison; `None` when incomparable.
    pub fn dominance_cmp(&self, other: &Partition) -> Result<Option<Ordering>> {
        let le = self.dominance_leq(other)?;
        let ge = other.dominance_leq(self)?;
        Ok(match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        })
    }

    /// The dominance-smallest partition of `m` with at most `r` parts:
    /// `((k+1)^{r'}, k^{r-r'})` where `m = kr + r'`.
    pub fn min_with_at_most_parts(r: usize, m: usize) -> Result<Partition> {
        if r == 0 {
            return Err(DsError::invalid("r must be at least 1"));
        }
        let (k, rem) = (m / r, m % r);
        let mut parts = vec![k + 1; rem];
        parts.extend(std::iter::repeat_n(k, r - rem));
        Ok(Partition::from_unsorted(parts))
    }

    /// Sum of squares of the dual parts, i.e. the centraliser dimension of a
    /// nilpotent matrix with this Jordan type.
    pub fn centralizer_dim(&self) -> usize {
        self.dual().0.iter().map(|p| p * p).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `m`, in reverse lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}
