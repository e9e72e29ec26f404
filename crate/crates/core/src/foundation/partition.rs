//! Integer partitions indexing ramification types.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A weakly decreasing sequence of positive integers. Indexes the
/// ramification types `alpha`, `theta`, `nu` throughout the crate.
///
/// The canonical order (used by every map and serialized table) is by
/// weight first, then reverse-lexicographic within equal weight, so `(4)`
/// precedes `(3,1)` precedes `(2,2)` precedes `(2,1,1)` precedes `(1^4)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

/// Restrictions understood by [`Partition::enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionConstraint {
    /// Every partition of `n`.
    All,
    /// Partitions of `n` with no part equal to one.
    NoPartOne,
    /// Partitions of `n` with no part equal to one and exactly `L` parts.
    NoPartOneWithLength(u32),
}

impl Partition {
    /// Builds a partition from parts in any order; sorts them decreasing.
    /// Panics if any part is zero.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "partition parts must be >= 1");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Weight `n`: the sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Length `m = l(alpha)`: the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Multiplicity map part -> number of occurrences.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Number of parts equal to `k`.
    pub fn count_part(&self, k: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == k).count() as u32
    }

    /// New partition with one extra part `k`.
    pub fn with_part(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut parts = self.parts.clone();
        let pos = parts.partition_point(|&p| p >= k);
        parts.insert(pos, k);
        Partition { parts }
    }

    /// New partition with one occurrence of `k` removed; `None` if absent.
    pub fn without_part(&self, k: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    /// Multiset union of two partitions.
    pub fn union(&self, other: &Partition) -> Self {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() || j < other.parts.len() {
            let take_left = match (self.parts.get(i), other.parts.get(j)) {
                (Some(a), Some(b)) => a >= b,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        Partition { parts }
    }

    /// All partitions of `n` satisfying `constraint`, in canonical
    /// (reverse-lexicographic) order. `n = 0` yields the empty partition
    /// (or nothing under a length constraint with `L > 0`).
    pub fn enumerate(n: u32, constraint: PartitionConstraint) -> Vec<Partition> {
        let min_part = match constraint {
            PartitionConstraint::All => 1,
            _ => 2,
        };
        let mut out = Vec::new();
        let mut acc = Vec::new();
        enumerate_rec(n, n, min_part, &mut acc, &mut out);
        if let PartitionConstraint::NoPartOneWithLength(l) = constraint {
            out.retain(|p| p.len() as u32 == l);
        }
        out
    }
}

fn enumerate_rec(remaining: u32, max_part: u32, min_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: acc.clone() });
        return;
    }
    let hi = remaining.min(max_part);
    if hi < min_part {
        return;
    }
    for k in (min_part..=hi).rev() {
        acc.push(k);
        enumerate_rec(remaining - k, k, min_part, acc, out);
        acc.pop();
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            // Within a weight, reverse-lexicographic: lexicographically
            // larger part vectors come first.
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;

    fn try_from(mut parts: Vec<u32>) -> Result<Self, Self::Error> {
        if parts.iter().any(|&p| p == 0) {
            return Err("partition parts must be positive".into());
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(Partition::enumerate(4, PartitionConstraint::All).len(), 5);
        let counts = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &c) in counts.iter().enumerate() {
            assert_eq!(
                Partition::enumerate(n as u32, PartitionConstraint::All).len(),
                c
            );
        }
    }

    #[test]
    fn enumerate_order_is_reverse_lexicographic() {
        let got = Partition::enumerate(4, PartitionConstraint::All);
        let want = vec![
            p(&[4]),
            p(&[3, 1]),
            p(&[2, 2]),
            p(&[2, 1, 1]),
            p(&[1, 1, 1, 1]),
        ];
        assert_eq!(got, want);
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, got, "canonical Ord must match enumeration order");
    }

    #[test]
    fn enumerate_no_part_one() {
        let got = Partition::enumerate(5, PartitionConstraint::NoPartOne);
        assert_eq!(got, vec![p(&[5]), p(&[3, 2])]);
    }

    #[test]
    fn conjecture_index_set_slice() {
        // genus 2, d = 4: length d-2(g-1) = 2, weights d-1 .. d+g-1 = 3..5.
        let mut found = Vec::new();
        for n in 3..=5 {
            found.extend(Partition::enumerate(n, PartitionConstraint::NoPartOneWithLength(2)));
        }
        assert_eq!(found, vec![p(&[2, 2]), p(&[3, 2])]);
    }

    #[test]
    fn union_and_part_edits() {
        let a = p(&[3, 1]);
        assert_eq!(a.union(&p(&[2, 1])), p(&[3, 2, 1, 1]));
        assert_eq!(a.with_part(2), p(&[3, 2, 1]));
        assert_eq!(a.without_part(3), Some(p(&[1])));
        assert_eq!(a.without_part(2), None);
    }

    #[test]
    fn serde_round_trip() {
        let a = p(&[4, 2, 1]);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, "[4,2,1]");
        let back: Partition = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Partition>("[0]").is_err());
    }
}
