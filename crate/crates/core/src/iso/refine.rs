//! Iterative neighborhood color refinement (vertex partition stabilization).

use crate::graph::Graph;

/// Refines `colors` until stable. Colors come out normalized to ranks
/// `0..k`; the ranking depends only on color values and adjacency, so equal
/// inputs refine identically under any vertex relabeling that respects them.
pub(crate) fn refine(g: &Graph, colors: &mut [u32]) {
    let n = g.order();
    assert!(n <= 64, "refinement supports at most 64 vertices");
    if n == 0 {
        return;
    }
    normalize(colors);
    loop {
        let k = colors.iter().max().map_or(0, |&c| c as usize + 1);
        if k == n {
            return;
        }
        let mut masks = vec![0u64; k];
        for (v, &c) in colors.iter().enumerate() {
            masks[c as usize] |= 1u64 << v;
        }
        // Signature: old color plus the neighbor count in every class.
        let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let row = g.row_mask(v);
            let counts = masks.iter().map(|&m| (row & m).count_ones()).collect();
            sigs.push((colors[v], counts));
        }
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut next = vec![0u32; n];
        let mut rank = 0u32;
        for (i, &v) in ranked.iter().enumerate() {
            if i > 0 && sigs[v] != sigs[ranked[i - 1]] {
                rank += 1;
            }
            next[v] = rank;
        }
        let new_k = rank as usize + 1;
        colors.copy_from_slice(&next);
        if new_k == k {
            return;
        }
    }
}

fn normalize(colors: &mut [u32]) {
    let mut values: Vec<u32> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    for c in colors.iter_mut() {
        *c = values.binary_search(c).unwrap() as u32;
    }
}

/// The stable coloring reached from the uniform initial coloring.
pub(crate) fn stable_coloring(g: &Graph) -> Vec<u32> {
    let mut colors = vec![0u32; g.order()];
    refine(g, &mut colors);
    colors
}

/// True when every vertex has its own color.
pub(crate) fn is_discrete(colors: &[u32]) -> bool {
    let n = colors.len();
    n == 0 || colors.iter().max().map_or(0, |&c| c as usize + 1) == n
}
