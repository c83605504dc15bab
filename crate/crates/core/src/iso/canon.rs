//! Canonical labeling by branch-and-bound over vertex orderings.
//!
//! The canonical form of a graph is the labeling that minimizes the packed
//! upper-triangle adjacency string read in column-major order: column `j`
//! holds the adjacency bits of position `j` against positions `0..j`, most
//! significant first. Minimizing column by column lets the search prune any
//! branch whose next column exceeds the best known one, and every leaf that
//! ties the minimum exhibits an automorphism.
//!
//! Candidates inside a level are additionally pruned by the orbits of the
//! automorphisms discovered so far, restricted to those fixing the current
//! prefix pointwise; such an automorphism maps the pruned subtree onto an
//! explored one leaf-for-leaf with identical strings.

use crate::graph::Graph;

pub(crate) struct CanonResult {
    /// Minimal column values; `cols[j]` has `j` significant bits.
    pub cols: Vec<u64>,
    /// position -> original vertex for the minimal labeling.
    pub prefix: Vec<usize>,
    /// Automorphism generators as vertex -> vertex image tables.
    pub generators: Vec<Vec<usize>>,
}

pub(crate) fn canonize(g: &Graph) -> CanonResult {
    let n = g.order();
    assert!(n <= 64, "canonical engine supports at most 64 vertices");
    let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let mut search = Search {
        n,
        rows,
        prefix: Vec::with_capacity(n),
        assigned: 0,
        cols: vec![0; n],
        best_cols: vec![0; n],
        best_prefix: Vec::new(),
        have_best: false,
        generators: Vec::new(),
    };
    search.descend();
    debug_assert!(search.have_best || n == 0);
    CanonResult {
        cols: search.best_cols,
        prefix: search.best_prefix,
        generators: search.generators,
    }
}

struct Search {
    n: usize,
    rows: Vec<u64>,
    prefix: Vec<usize>,
    assigned: u64,
    cols: Vec<u64>,
    best_cols: Vec<u64>,
    best_prefix: Vec<usize>,
    have_best: bool,
    generators: Vec<Vec<usize>>,
}

impl Search {
    fn descend(&mut self) {
        let depth = self.prefix.len();
        if depth == self.n {
            self.record_leaf();
            return;
        }

        let mut cands: Vec<(u64, usize)> = (0..self.n)
            .filter(|&v| self.assigned >> v & 1 == 0)
            .map(|v| (self.column_bits(v), v))
            .collect();
        cands.sort_unstable();

        let mut tried: Vec<usize> = Vec::new();
        let mut orbits = Orbits::new(self.n);
        let mut orbit_gens = 0usize;

        for (col, v) in cands {
            if self.have_best && self.cols[..depth] == self.best_cols[..depth] {
                // Candidates are sorted, so everything from here on is worse.
                if col > self.best_cols[depth] {
                    break;
                }
            }
            if !tried.is_empty() {
                if orbit_gens != self.generators.len() {
                    orbits = self.prefix_fixing_orbits();
                    orbit_gens = self.generators.len();
                }
                if tried.iter().any(|&u| orbits.same(u, v)) {
                    continue;
                }
            }
            tried.push(v);
            self.cols[depth] = col;
            self.prefix.push(v);
            self.assigned |= 1 << v;
            self.descend();
            self.prefix.pop();
            self.assigned &= !(1 << v);
        }
    }

    /// Adjacency of `v` against the prefix, earliest position most significant.
    fn column_bits(&self, v: usize) -> u64 {
        let depth = self.prefix.len();
        let mut col = 0u64;
        for (t, &p) in self.prefix.iter().enumerate() {
            col |= (self.rows[p] >> v & 1) << (depth - 1 - t);
        }
        col
    }

    fn record_leaf(&mut self) {
        if !self.have_best || self.cols < self.best_cols {
            self.best_cols.copy_from_slice(&self.cols);
            self.best_prefix = self.prefix.clone();
            self.have_best = true;
        } else if self.cols == self.best_cols {
            // Two labelings with identical strings differ by an automorphism.
            let mut sigma = vec![0usize; self.n];
            for t in 0..self.n {
                sigma[self.prefix[t]] = self.best_prefix[t];
            }
            if sigma.iter().enumerate().any(|(i, &x)| i != x)
                && !self.generators.contains(&sigma)
            {
                debug_assert!(self.is_automorphism(&sigma));
                self.generators.push(sigma);
            }
        }
    }

    fn is_automorphism(&self, sigma: &[usize]) -> bool {
        (0..self.n).all(|u| {
            (0..self.n).all(|v| {
                (self.rows[u] >> v & 1) == (self.rows[sigma[u]] >> sigma[v] & 1)
            })
        })
    }

    fn prefix_fixing_orbits(&self) -> Orbits {
        let mut orbits = Orbits::new(self.n);
        for gen in &self.generators {
            if self.prefix.iter().all(|&p| gen[p] == p) {
                for (v, &img) in gen.iter().enumerate() {
                    orbits.merge(v, img);
                }
            }
        }
        orbits
    }
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::constructions::{cycle, path, star};

    fn brute_min_cols(g: &Graph) -> Vec<u64> {
        use itertools::Itertools;
        let n = g.order();
        let mut best: Option<Vec<u64>> = None;
        for perm in (0..n).permutations(n) {
            let mut cols = vec![0u64; n];
            for j in 0..n {
                for (t, &p) in perm[..j].iter().enumerate() {
                    if g.has_edge(p, perm[j]) {
                        cols[j] |= 1 << (j - 1 - t);
                    }
                }
            }
            if best.as_ref().is_none_or(|b| cols < *b) {
                best = Some(cols);
            }
        }
        best.unwrap_or_default()
    }

    #[test]
    fn matches_brute_force_on_all_graphs_up_to_5() {
        for n in 0..=5usize {
            let pairs = n * n.saturating_sub(1) / 2;
            for bits in 0u64..1 << pairs {
                let g = Graph::from_upper_bits(n, bits);
                assert_eq!(
                    canonize(&g).cols,
                    brute_min_cols(&g),
                    "n={n} bits={bits:b}"
                );
            }
        }
    }

    #[test]
    fn matches_brute_force_on_named_graphs() {
        for g in [
            cycle(6),
            path(6),
            star(6),
            crate::graph::constructions::disjoint_union(&cycle(4), &Graph::complete(2)),
        ] {
            assert_eq!(canonize(&g).cols, brute_min_cols(&g));
        }
    }

    #[test]
    fn symmetric_graphs_finish_and_find_generators() {
        for n in [8, 12, 16] {
            let res = canonize(&Graph::complete(n));
            assert!(!res.generators.is_empty());
            assert!(res.cols.iter().enumerate().all(|(j, &c)| {
                c == if j == 0 { 0 } else { (1 << j) - 1 }
            }));
            let res = canonize(&Graph::empty(n));
            assert!(res.cols.iter().all(|&c| c == 0));
        }
    }
}
