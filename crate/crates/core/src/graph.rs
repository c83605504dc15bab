//! Undirected simple graphs over vertex indices `0..n`, adjacency kept as row
//! bitsets, plus vertex subsets and the seeded G(n, 1/2) generator.
//!
//! Rows are `u64` words, one word per row up to 64 vertices. Larger orders are
//! supported by widening each row to several words; the algorithmic kernels in
//! the sibling modules stay on the one-word fast path and assert `n <= 64`.

use std::fmt;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop edge at vertex {vertex} not allowed")]
    LoopEdge { vertex: usize },
}

/// A subset of the vertices of some host graph, stored as a bitset.
///
/// The set does not remember its host; operations that pair a set with a
/// graph validate membership against the graph's order. Word storage is
/// trimmed so that equality and ordering behave like big-integer comparison
/// of the underlying bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: SmallVec<[u64; 1]>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet::default()
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = VertexSet::new();
        s.insert(v);
        s
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut words = SmallVec::new();
        let mut left = n;
        while left >= 64 {
            words.push(u64::MAX);
            left -= 64;
        }
        if left > 0 {
            words.push((1u64 << left) - 1);
        }
        VertexSet { words }
    }

    /// Builds a set from raw bitset words (least significant word first).
    pub fn from_words(words: &[u64]) -> Self {
        let mut s = VertexSet {
            words: SmallVec::from_slice(words),
        };
        s.trim();
        s
    }

    /// Single-word view for sets confined to `0..64`; `None` otherwise.
    pub fn as_mask64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while let Some(&last) = self.words.last() {
            if last == 0 {
                self.words.pop();
            } else {
                break;
            }
        }
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        let w = v / 64;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (v % 64));
            self.trim();
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        let w = v / 64;
        w < self.words.len() && self.words[w] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_member(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn max_member(&self) -> Option<usize> {
        let (i, &w) = self.words.iter().enumerate().rev().find(|(_, &w)| w != 0)?;
        Some(i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut words: SmallVec<[u64; 1]> = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a & b)
            .collect();
        while matches!(words.last(), Some(0)) {
            words.pop();
        }
        VertexSet { words }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (&self.words, &other.words)
        } else {
            (&other.words, &self.words)
        };
        let mut words = long.clone();
        for (i, &w) in short.iter().enumerate() {
            words[i] |= w;
        }
        VertexSet { words }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut words = self.words.clone();
        for (i, w) in words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = VertexSet { words };
        s.trim();
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let base = i * 64;
            std::iter::successors(
                if word == 0 { None } else { Some(word) },
                |&w| {
                    let w = w & (w - 1);
                    if w == 0 {
                        None
                    } else {
                        Some(w)
                    }
                },
            )
            .map(move |w| base + w.trailing_zeros() as usize)
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Trimmed words compare like big-endian integers.
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An undirected simple graph: symmetric adjacency, no loops.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let w = n.div_ceil(64);
        Graph {
            n,
            words_per_row: w,
            rows: vec![0; n * w],
        }
    }

    /// The complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from an explicit edge list. Rejects loops and
    /// out-of-range endpoints; duplicate edges are harmless.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::LoopEdge { vertex: u });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        order: n,
                    });
                }
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph on `n <= 11` vertices from packed upper-triangle bits,
    /// pair order row-major over `u < v`: (0,1), (0,2), .., (0,n-1), (1,2), ..
    pub fn from_upper_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 11, "upper-triangle bits exceed one word");
        let mut g = Graph::empty(n);
        let mut p = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if bits >> p & 1 == 1 {
                    g.set_edge(u, v);
                }
                p += 1;
            }
        }
        g
    }

    /// Samples G(n, 1/2): every unordered pair is an edge with probability
    /// exactly one half, decided by successive bits of a ChaCha8 stream seeded
    /// from `seed`. Pair enumeration is row-major over `u < v`, so a fixed
    /// seed always yields the same graph.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::empty(n);
        let mut buf = 0u64;
        let mut left = 0u32;
        for u in 0..n {
            for v in (u + 1)..n {
                if left == 0 {
                    buf = rng.next_u64();
                    left = 64;
                }
                if buf & 1 == 1 {
                    g.set_edge(u, v);
                }
                buf >>= 1;
                left -= 1;
            }
        }
        g
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let w = self.words_per_row;
        self.rows[u * w + v / 64] |= 1u64 << (v % 64);
        self.rows[v * w + u / 64] |= 1u64 << (u % 64);
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        let w = self.words_per_row;
        self.rows[u * w + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex out of range");
        self.row_words(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The neighbor set of `v`; never contains `v` itself.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        assert!(v < self.n, "vertex out of range");
        VertexSet::from_words(self.row_words(v))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub(crate) fn row_words(&self, v: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.rows[v * w..(v + 1) * w]
    }

    /// One-word neighbor mask; callers on the fast path guarantee `n <= 64`.
    #[inline]
    pub(crate) fn row_mask(&self, v: usize) -> u64 {
        debug_assert!(self.words_per_row <= 1);
        if self.words_per_row == 0 {
            0
        } else {
            self.rows[v]
        }
    }

    /// The induced subgraph on `s`. Vertices are relabeled to `0..|s|` in
    /// ascending order of their original index. Panics if `s` contains a
    /// vertex outside the graph.
    pub fn induced(&self, s: &VertexSet) -> Graph {
        if let Some(v) = s.max_member() {
            assert!(v < self.n, "subset member {v} out of range");
        }
        let members = s.to_vec();
        let m = members.len();
        let mut g = Graph::empty(m);
        for i in 0..m {
            for j in (i + 1)..m {
                if self.has_edge(members[i], members[j]) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels vertices: `v` becomes `p.apply(v)`.
    pub fn relabel(&self, p: &Permutation) -> Graph {
        assert_eq!(p.len(), self.n, "permutation length mismatch");
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in self.neighbors_above(u) {
                g.set_edge(p.apply(u), p.apply(v));
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    /// Neighbors of `u` with index greater than `u` (edge iteration helper).
    fn neighbors_above(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (u + 1..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors_above(u) {
                out.push((u, v));
            }
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Small named graphs used in tests, experiments and documentation.
pub mod constructions {
    use super::Graph;

    /// Path on `n` vertices: 0-1-2-..-(n-1).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Cycle C_n (requires `n >= 3`).
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Star K_{1,n-1} with center 0.
    pub fn star(n: usize) -> Graph {
        assert!(n >= 1);
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::with_capacity(a * b);
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).unwrap()
    }

    /// Disjoint union; vertices of `h` are shifted past those of `g`.
    pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
        let off = g.order();
        let mut edges = g.edges();
        edges.extend(h.edges().into_iter().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + h.order(), &edges).unwrap()
    }
}
