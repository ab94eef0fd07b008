//! Integer partitions and the dominance order.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A weakly decreasing list of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from arbitrary parts: zeros are dropped and the rest sorted.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `[1^n]`.
    pub fn ones(n: u32) -> Self {
        Partition(vec![1; n as usize])
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

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part at index `i`, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let first = self.part(0);
        let cols = (1..=first)
            .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition(cols)
    }

    /// `(part, multiplicity)` pairs in decreasing order of part.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    /// Coordinatewise sum, padding the shorter list with zeros.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition((0..n).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Dominance: `self <= other` iff every partial sum of `self` is at most the
    /// corresponding partial sum of `other`. Sizes must agree.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Sum over the transpose of its squared parts.
    pub fn sum_sq_transpose(&self) -> u64 {
        self.transpose().0.iter().map(|&c| (c as u64) * (c as u64)).sum()
    }

    pub fn count_odd_parts(&self) -> u32 {
        self.0.iter().filter(|&&p| p % 2 == 1).count() as u32
    }

    pub(crate) fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<u32>> for Partition {
    fn from(v: Vec<u32>) -> Self {
        Partition::new(v)
    }
}

/// All partitions of `n` in reverse lexicographic order (largest first).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_counts() {
        let p = Partition::new(vec![3, 1, 2]);
        assert_eq!(p.parts(), &[3, 2, 1]);
        assert_eq!(p.transpose().parts(), &[3, 2, 1]);
        assert_eq!(Partition::new(vec![4, 4]).transpose().parts(), &[2, 2, 2, 2]);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(partitions_of(0).len(), 1);
    }

    #[test]
    fn dominance() {
        let a = Partition::new(vec![2, 1, 1]);
        let b = Partition::new(vec![2, 2]);
        assert!(a.dominated_by(&b));
        assert!(!b.dominated_by(&a));
        assert!(a.dominated_by(&a));
    }
}
