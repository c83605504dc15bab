//! Backtracking search for induced embeddings of one graph into another.
//!
//! Vertices of the pattern are assigned in a static connectivity-first order.
//! Every future pattern vertex keeps a candidate bitmask that shrinks as the
//! partial map grows; a branch dies as soon as some unassigned vertex runs
//! out of candidates.

use crate::graph::{Graph, VertexSet};

/// Runs the search, calling `on_leaf` with each complete injective map
/// (indexed by pattern vertex). Return `false` from the callback to stop.
pub(crate) fn drive(pattern: &Graph, host: &Graph, on_leaf: &mut dyn FnMut(&[usize]) -> bool) {
    let h = pattern.order();
    let n = host.order();
    assert!(n <= 64, "embedding search supports hosts up to 64 vertices");
    if h > n {
        return;
    }
    let phi = vec![usize::MAX; h];
    if h == 0 {
        on_leaf(&phi);
        return;
    }

    let order = assignment_order(pattern);
    let host_rows: Vec<u64> = (0..n).map(|v| host.row_mask(v)).collect();
    let pat_rows: Vec<u64> = (0..h).map(|v| pattern.row_mask(v)).collect();
    let full_host: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };

    // Initial candidates: degree and co-degree lower bounds must hold.
    let mut masks = vec![0u64; h * h];
    for (slot, &u) in order.iter().enumerate() {
        let du = pattern.degree(u);
        let anti_u = h - 1 - du;
        let mut mask = 0u64;
        for w in 0..n {
            let dw = host_rows[w].count_ones() as usize;
            if dw >= du && n - 1 - dw >= anti_u {
                mask |= 1 << w;
            }
        }
        masks[slot] = mask & full_host;
    }

    let mut search = Embed {
        h,
        order,
        pat_rows,
        host_rows,
        masks,
        phi,
    };
    search.descend(0, on_leaf);
}

struct Embed {
    h: usize,
    order: Vec<usize>,
    pat_rows: Vec<u64>,
    host_rows: Vec<u64>,
    /// `masks[depth * h + slot]` is the candidate set of `order[slot]`
    /// after the first `depth` assignments, kept for `slot >= depth`.
    masks: Vec<u64>,
    phi: Vec<usize>,
}

impl Embed {
    fn descend(&mut self, depth: usize, on_leaf: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.h {
            return on_leaf(&self.phi);
        }
        let u = self.order[depth];
        let mut cand = self.masks[depth * self.h + depth];
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if self.try_assign(depth, u, w) {
                self.phi[u] = w;
                if !self.descend(depth + 1, on_leaf) {
                    return false;
                }
                self.phi[u] = usize::MAX;
            }
        }
        true
    }

    /// Propagates the assignment `order[depth] -> w` into the candidate
    /// masks of later slots; false if some slot would be left empty.
    fn try_assign(&mut self, depth: usize, u: usize, w: usize) -> bool {
        let h = self.h;
        let w_bit = 1u64 << w;
        let w_row = self.host_rows[w];
        for slot in depth + 1..h {
            let v = self.order[slot];
            let mut m = self.masks[depth * h + slot];
            if self.pat_rows[u] >> v & 1 == 1 {
                m &= w_row;
            } else {
                m &= !w_row;
            }
            m &= !w_bit;
            if m == 0 {
                return false;
            }
            self.masks[(depth + 1) * h + slot] = m;
        }
        true
    }
}

/// Pattern vertices ordered connectivity-first: start at a maximum-degree
/// vertex, then repeatedly take the vertex with the most already-ordered
/// neighbors (degree, then index, break ties).
fn assignment_order(pattern: &Graph) -> Vec<usize> {
    let h = pattern.order();
    let mut order = Vec::with_capacity(h);
    let mut chosen = 0u64;
    for _ in 0..h {
        let best_v = (0..h)
            .filter(|&v| chosen >> v & 1 == 0)
            .max_by_key(|&v| {
                let among = (pattern.row_mask(v) & chosen).count_ones() as usize;
                (among, pattern.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        order.push(best_v);
        chosen |= 1 << best_v;
    }
    order
}

/// All induced embeddings of `pattern` into `host`, up to `limit` maps.
/// Each map sends pattern vertex `i` to host vertex `map[i]`.
pub fn find_induced_embeddings(pattern: &Graph, host: &Graph, limit: usize) -> Vec<Vec<usize>> {
    assert!(limit >= 1, "limit must be positive");
    let mut out = Vec::new();
    drive(pattern, host, &mut |phi| {
        out.push(phi.to_vec());
        out.len() < limit
    });
    out
}

/// Distinct vertex sets of `host` that induce a copy of `pattern`, in
/// discovery order, stopping after `limit` sets.
pub(crate) fn find_copy_sets(host: &Graph, pattern: &Graph, limit: usize) -> Vec<VertexSet> {
    let mut seen: Vec<u64> = Vec::new();
    drive(pattern, host, &mut |phi| {
        let mask = phi.iter().fold(0u64, |m, &w| m | 1 << w);
        if !seen.contains(&mask) {
            seen.push(mask);
        }
        seen.len() < limit
    });
    seen.iter().map(|&m| VertexSet::from_words(&[m])).collect()
}

/// Number of induced embeddings of `pattern` into `host`.
pub(crate) fn count_embeddings(pattern: &Graph, host: &Graph) -> u64 {
    let mut count = 0u64;
    drive(pattern, host, &mut |_| {
        count += 1;
        true
    });
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::constructions::{cycle, path};

    #[test]
    fn k2_into_k3_has_six_ordered_embeddings() {
        let maps = find_induced_embeddings(&Graph::complete(2), &Graph::complete(3), 100);
        assert_eq!(maps.len(), 6);
    }

    #[test]
    fn triangle_does_not_embed_into_c5() {
        assert!(find_induced_embeddings(&Graph::complete(3), &cycle(5), 10).is_empty());
    }

    #[test]
    fn p3_into_c5_has_ten_ordered_embeddings() {
        let maps = find_induced_embeddings(&path(3), &cycle(5), 100);
        assert_eq!(maps.len(), 10);
        for phi in &maps {
            let g = cycle(5);
            let p = path(3);
            for u in 0..3 {
                for v in (u + 1)..3 {
                    assert_eq!(p.has_edge(u, v), g.has_edge(phi[u], phi[v]));
                }
            }
        }
    }

    #[test]
    fn limit_stops_early() {
        let maps = find_induced_embeddings(&Graph::complete(2), &Graph::complete(5), 3);
        assert_eq!(maps.len(), 3);
    }

    #[test]
    fn empty_pattern_has_one_embedding() {
        let maps = find_induced_embeddings(&Graph::empty(0), &cycle(4), 10);
        assert_eq!(maps, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn copy_sets_dedup_images() {
        // K_2 in K_3: three edges, each hit by two ordered maps.
        let sets = find_copy_sets(&Graph::complete(3), &Graph::complete(2), 10);
        assert_eq!(sets.len(), 3);
        let sets = find_copy_sets(&Graph::complete(3), &Graph::complete(2), 2);
        assert_eq!(sets.len(), 2);
    }
}
