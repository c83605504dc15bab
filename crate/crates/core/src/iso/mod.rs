//! Isomorphism machinery: canonical forms, automorphisms, induced-embedding
//! search and induced-copy counting.

mod canon;
mod embed;
mod refine;

pub use embed::find_induced_embeddings;

use std::fmt;

use thiserror::Error;

use crate::combin::{binomial, subsets_of_size};
use crate::graph::{Graph, VertexSet};
use crate::perm::Permutation;

pub(crate) use embed::{count_embeddings, find_copy_sets};

/// Number of isomorphism classes of graphs on 0..=7 vertices.
const CLASS_COUNTS: [u64; 8] = [1, 1, 2, 4, 11, 34, 156, 1044];

/// Largest order accepted by [`enumerate_classes`]; 8 vertices would already
/// mean 2^28 labeled graphs.
pub const MAX_CLASS_ORDER: usize = 7;

/// Copy counting switches from subset enumeration to embedding search once
/// the number of subsets passes this bound.
const SUBSET_ROUTE_LIMIT: u128 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsoError {
    #[error("class enumeration supports at most {MAX_CLASS_ORDER} vertices, got {order}")]
    ClassOrderTooLarge { order: usize },
}

/// Bit-exact fingerprint of an isomorphism class: the order together with
/// the upper triangle of the canonically relabeled graph, packed column-major
/// with earlier pairs in more significant bits. Keys compare equal exactly
/// for isomorphic graphs and sort in canonical-string order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: u32,
    words: Vec<u64>,
}

impl CanonicalKey {
    fn from_cols(n: usize, cols: &[u64]) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut words = vec![0u64; pairs.div_ceil(64)];
        let mut p = 0usize;
        for (j, &col) in cols.iter().enumerate() {
            for i in 0..j {
                let bit = col >> (j - 1 - i) & 1;
                if bit == 1 {
                    words[p / 64] |= 1u64 << (63 - p % 64);
                }
                p += 1;
            }
        }
        CanonicalKey {
            n: n as u32,
            words,
        }
    }

    pub fn order(&self) -> usize {
        self.n as usize
    }

    /// Rebuilds the canonical representative graph encoded by this key.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut edges = Vec::new();
        let mut p = 0usize;
        for j in 0..n {
            for i in 0..j {
                if self.words[p / 64] >> (63 - p % 64) & 1 == 1 {
                    edges.push((i, j));
                }
                p += 1;
            }
        }
        Graph::from_edges(n, &edges).expect("canonical key bits are a valid graph")
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(n={}", self.n)?;
        for w in &self.words {
            write!(f, ", {w:016x}")?;
        }
        write!(f, ")")
    }
}

/// The canonical key of `g`. Equal keys mean isomorphic graphs.
///
/// Supports orders up to 64. Intended for the asymmetric-heavy graphs this
/// crate works on; highly symmetric graphs are handled exactly but only make
/// sense at small orders.
pub fn canonical_key(g: &Graph) -> CanonicalKey {
    let res = canon::canonize(g);
    CanonicalKey::from_cols(g.order(), &res.cols)
}

/// The canonically relabeled graph together with the permutation that maps
/// each original vertex to its canonical position.
pub fn canonical_form(g: &Graph) -> (Graph, Permutation) {
    let res = canon::canonize(g);
    let mut table = vec![0usize; g.order()];
    for (pos, &v) in res.prefix.iter().enumerate() {
        table[v] = pos;
    }
    let perm = Permutation::from_table(table);
    (g.relabel(&perm), perm)
}

/// Canonical representative and key from a single search; cheaper than
/// calling [`canonical_form`] and [`canonical_key`] separately.
pub fn canonical_pair(g: &Graph) -> (Graph, CanonicalKey) {
    let res = canon::canonize(g);
    let key = CanonicalKey::from_cols(g.order(), &res.cols);
    let mut table = vec![0usize; g.order()];
    for (pos, &v) in res.prefix.iter().enumerate() {
        table[v] = pos;
    }
    let canon = g.relabel(&Permutation::from_table(table));
    (canon, key)
}

/// True when an edge-preserving bijection between the two graphs exists,
/// decided by canonical-key equality.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.order()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.order()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_key(a) == canonical_key(b)
}

/// A generating set of the automorphism group, empty exactly when the graph
/// is asymmetric.
pub fn automorphism_generators(g: &Graph) -> Vec<Permutation> {
    // A discrete stable coloring already certifies asymmetry.
    if refine::is_discrete(&refine::stable_coloring(g)) {
        return Vec::new();
    }
    canon::canonize(g)
        .generators
        .into_iter()
        .map(Permutation::from_table)
        .collect()
}

/// True when the identity is the only automorphism.
pub fn is_asymmetric(g: &Graph) -> bool {
    automorphism_generators(g).is_empty()
}

/// |Aut(g)|, counted as the number of induced self-embeddings.
pub fn automorphism_count(g: &Graph) -> u64 {
    count_embeddings(g, g)
}

/// Number of vertex subsets of `g` inducing a graph isomorphic to `pattern`.
///
/// Small subset spaces are enumerated directly; otherwise ordered embeddings
/// are counted and divided by |Aut(pattern)|. Both routes agree (see tests).
pub fn count_induced_copies(g: &Graph, pattern: &Graph) -> u64 {
    let n = g.order();
    let k = pattern.order();
    if k > n {
        return 0;
    }
    if k == 0 {
        return 1;
    }
    if n <= 64 && binomial(n, k) <= SUBSET_ROUTE_LIMIT {
        count_copies_by_subsets(g, pattern)
    } else {
        count_copies_by_embeddings(g, pattern)
    }
}

pub(crate) fn count_copies_by_subsets(g: &Graph, pattern: &Graph) -> u64 {
    let key = canonical_key(pattern);
    let mut count = 0u64;
    for mask in subsets_of_size(g.order(), pattern.order()) {
        let s = VertexSet::from_words(&[mask]);
        if canonical_key(&g.induced(&s)) == key {
            count += 1;
        }
    }
    count
}

pub(crate) fn count_copies_by_embeddings(g: &Graph, pattern: &Graph) -> u64 {
    let total = count_embeddings(pattern, g);
    let aut = automorphism_count(pattern);
    debug_assert_eq!(total % aut, 0);
    total / aut
}

/// One canonical key per isomorphism class of graphs on `m` vertices,
/// sorted. Enumerates all 2^C(m,2) labeled graphs, so `m <= 7`.
pub fn enumerate_classes(m: usize) -> Result<Vec<CanonicalKey>, IsoError> {
    if m > MAX_CLASS_ORDER {
        return Err(IsoError::ClassOrderTooLarge { order: m });
    }
    let pairs = m * (m - 1) / 2;
    let total: u64 = 1 << pairs;

    #[cfg(feature = "parallel")]
    let keys = {
        use rayon::prelude::*;
        use std::collections::HashSet;
        let chunk = 1u64 << pairs.saturating_sub(6).min(15);
        (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut set = HashSet::new();
                for bits in c * chunk..((c + 1) * chunk).min(total) {
                    set.insert(canonical_key(&Graph::from_upper_bits(m, bits)));
                }
                set
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            })
    };
    #[cfg(not(feature = "parallel"))]
    let keys = {
        let mut set = std::collections::HashSet::new();
        for bits in 0..total {
            set.insert(canonical_key(&Graph::from_upper_bits(m, bits)));
        }
        set
    };

    let mut out: Vec<CanonicalKey> = keys.into_iter().collect();
    out.sort();
    debug_assert_eq!(out.len() as u64, CLASS_COUNTS[m]);
    Ok(out)
}
