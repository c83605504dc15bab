//! Permutations of `0..n`, used for relabelings and automorphisms.

use std::fmt;

/// A bijection on `0..n`, stored as the image table: `apply(v) = table[v]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    table: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from an image table. Panics if the table is not a
    /// bijection on `0..table.len()`.
    pub fn from_table(table: Vec<usize>) -> Self {
        let n = table.len();
        let mut seen = vec![false; n];
        for &img in &table {
            assert!(img < n && !seen[img], "not a bijection on 0..{n}");
            seen[img] = true;
        }
        Permutation { table }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            table: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.table[v]
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.table.len()];
        for (v, &img) in self.table.iter().enumerate() {
            inv[img] = v;
        }
        Permutation { table: inv }
    }

    /// Composition `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len());
        Permutation {
            table: (0..self.len()).map(|v| self.apply(other.apply(v))).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.table
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_table(vec![1, 2, 0]);
        let q = p.inverse();
        assert!(p.compose(&q).is_identity());
        assert!(q.compose(&p).is_identity());
        assert_eq!(p.apply(0), 1);
        assert_eq!(q.apply(1), 0);
    }

    #[test]
    #[should_panic(expected = "bijection")]
    fn rejects_non_bijection() {
        Permutation::from_table(vec![0, 0, 1]);
    }
}
