//! Small combinatorial helpers shared by the counting modules.

/// Exact binomial coefficient in u128 (no overflow for n <= 64).
pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// All `k`-subsets of `0..n` as bitmasks, in ascending numeric order
/// (Gosper's hack). Requires `n <= 64`.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 64);
    let first = if k == 0 {
        Some(0u64)
    } else if k <= n {
        Some(if k == 64 { u64::MAX } else { (1u64 << k) - 1 })
    } else {
        None
    };
    std::iter::successors(first, move |&mask| {
        if mask == 0 {
            return None;
        }
        let c = mask & mask.wrapping_neg();
        let r = mask.checked_add(c)?;
        let next = r | (((mask ^ r) / c) >> 2);
        // Stop once the subset would need a vertex >= n.
        if n < 64 && next >> n != 0 {
            None
        } else {
            Some(next)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts_match_binomial() {
        for n in 0..=12 {
            for k in 0..=n {
                let count = subsets_of_size(n, k).count() as u128;
                assert_eq!(count, binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn subsets_have_right_popcount_and_order() {
        let masks: Vec<u64> = subsets_of_size(6, 3).collect();
        assert!(masks.iter().all(|m| m.count_ones() == 3));
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(masks.first(), Some(&0b000111));
        assert_eq!(masks.last(), Some(&0b111000));
    }

    #[test]
    fn full_word_subsets_terminate() {
        assert_eq!(subsets_of_size(64, 63).count(), 64);
        assert_eq!(subsets_of_size(64, 64).count(), 1);
        assert_eq!(subsets_of_size(64, 0).count(), 1);
    }
}
