//! 2-adjacent bundles and unique reconstruction, subgraph decks, generalized
//! Kelly counting, and deck-based isomorphism decisions.
//!
//! A bundle records, for an anchor subgraph H of G, the multiset of induced
//! subgraphs on V(H) plus every pair of outside vertices. All pair graphs are
//! stored unlabeled (canonical representative plus multiplicity): the
//! reconstruction below never sees the host's vertex labels, only abstract
//! graphs, which is exactly the information a deck provides.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::combin::{binomial, subsets_of_size};
use crate::graph::{Graph, VertexSet};
use crate::iso::{canonical_pair, find_copy_sets, find_induced_embeddings, CanonicalKey};
use crate::seeding::{derive_seed, rng_from_seed, sample_subset};

/// Largest number of subsets a full deck enumeration will touch by default.
pub const DEFAULT_DECK_BUDGET: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconError {
    #[error("need at least two vertices outside the anchor, found {outside}")]
    TooFewOutsideVertices { outside: usize },
    #[error("deck order {m} exceeds host order {n}")]
    DeckOrderTooLarge { m: usize, n: usize },
    #[error("full deck needs {required} subsets, over the budget of {budget}; use sampled_deck")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("deck is not complete: multiplicities sum to {found}, expected {expected}")]
    IncompleteDeck { expected: u128, found: u64 },
    #[error("pattern order {k} exceeds deck subgraph order {m}")]
    KellyOrderMismatch { k: usize, m: usize },
    #[error("Kelly division is not exact: {numerator} / {denominator}; deck is inconsistent")]
    NonExactDivision { numerator: u128, denominator: u128 },
    #[error("graphs have different orders {left} and {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("bundle multiplicities sum to {found}, expected C({outside},2) = {expected}")]
    BundleSizeMismatch {
        outside: usize,
        expected: u128,
        found: u64,
    },
    #[error("pair graph has order {found}, expected anchor order plus two = {expected}")]
    PairGraphOrderMismatch { expected: usize, found: usize },
    #[error("a pair-graph class repeats {multiplicity} times; its occurrences cannot be told apart")]
    PairGraphCollision { multiplicity: u64 },
    #[error("corrupt bundle: a pair graph contains no copy of the anchor")]
    MissingAnchorCopy,
    #[error("anchor property violated: a pair graph holds anchor copies on {images} vertex sets")]
    AnchorCopyAmbiguous { images: usize },
    #[error("shadow pullbacks through different embeddings disagree; stability condition broken")]
    ShadowPullbackDisagrees,
    #[error("both leftover vertices of a pair graph cast the same shadow")]
    DuplicateShadowsInPair,
    #[error("a shadow pair was recorded twice with conflicting adjacency")]
    ConflictingAdjacency,
    #[error("a shadow pair was recorded twice")]
    DuplicatePairRecord,
    #[error("found {found} distinct shadows, expected {expected}")]
    ShadowCountMismatch { expected: usize, found: usize },
    #[error("a shadow appears in {found} recorded pairs, expected {expected}")]
    ShadowDegreeMismatch { expected: usize, found: usize },
}

/// The multiset A_H: an anchor subgraph H together with every induced
/// subgraph on V(H) plus two outside vertices, stored unlabeled.
#[derive(Debug, Clone)]
pub struct AdjacentBundle {
    anchor: Graph,
    total_order: usize,
    pair_graphs: BTreeMap<CanonicalKey, (Graph, u64)>,
}

impl AdjacentBundle {
    pub fn anchor(&self) -> &Graph {
        &self.anchor
    }

    /// Order of the host graph the bundle was built from.
    pub fn total_order(&self) -> usize {
        self.total_order
    }

    pub fn outside_count(&self) -> usize {
        self.total_order - self.anchor.order()
    }

    pub fn pair_multiplicity_total(&self) -> u64 {
        self.pair_graphs.values().map(|(_, c)| *c).sum()
    }

    pub fn pair_graphs(&self) -> impl Iterator<Item = (&CanonicalKey, &Graph, u64)> {
        self.pair_graphs.iter().map(|(k, (g, c))| (k, g, *c))
    }

    pub fn distinct_pair_classes(&self) -> usize {
        self.pair_graphs.len()
    }

    /// Structural invariants: pair-graph orders and the multiplicity total.
    pub fn check_invariants(&self) -> Result<(), ReconError> {
        let q = self.outside_count();
        let expected = binomial(q, 2);
        let found = self.pair_multiplicity_total();
        if u128::from(found) != expected {
            return Err(ReconError::BundleSizeMismatch {
                outside: q,
                expected,
                found,
            });
        }
        let want = self.anchor.order() + 2;
        for (_, g, _) in self.pair_graphs() {
            if g.order() != want {
                return Err(ReconError::PairGraphOrderMismatch {
                    expected: want,
                    found: g.order(),
                });
            }
        }
        Ok(())
    }

    /// Construction helper for tests and deserialization.
    pub fn from_parts(
        anchor: Graph,
        total_order: usize,
        pairs: impl IntoIterator<Item = (Graph, u64)>,
    ) -> Self {
        let mut pair_graphs = BTreeMap::new();
        for (g, count) in pairs {
            let (canon, key) = canonical_pair(&g);
            pair_graphs
                .entry(key)
                .and_modify(|(_, c): &mut (Graph, u64)| *c += count)
                .or_insert((canon, count));
        }
        AdjacentBundle {
            anchor,
            total_order,
            pair_graphs,
        }
    }
}

/// Builds the 2-adjacent bundle of `s` in `g`: one pair graph per unordered
/// pair of outside vertices, keyed by canonical form.
pub fn build_bundle(g: &Graph, s: &VertexSet) -> Result<AdjacentBundle, ReconError> {
    let n = g.order();
    if let Some(v) = s.max_member() {
        assert!(v < n, "subset member {v} out of range");
    }
    let outside: Vec<usize> = (0..n).filter(|&v| !s.contains(v)).collect();
    if outside.len() < 2 {
        return Err(ReconError::TooFewOutsideVertices {
            outside: outside.len(),
        });
    }

    let mut pairs = Vec::with_capacity(outside.len() * (outside.len() - 1) / 2);
    for (i, &v) in outside.iter().enumerate() {
        for &w in &outside[i + 1..] {
            pairs.push((v, w));
        }
    }

    let keyed = map_pairs(g, s, &pairs);

    let mut pair_graphs: BTreeMap<CanonicalKey, (Graph, u64)> = BTreeMap::new();
    for (key, canon) in keyed {
        pair_graphs
            .entry(key)
            .and_modify(|(_, c)| *c += 1)
            .or_insert((canon, 1));
    }
    Ok(AdjacentBundle {
        anchor: g.induced(s),
        total_order: n,
        pair_graphs,
    })
}

fn map_pairs(g: &Graph, s: &VertexSet, pairs: &[(usize, usize)]) -> Vec<(CanonicalKey, Graph)> {
    let key_one = |&(v, w): &(usize, usize)| {
        let mut sub = s.clone();
        sub.insert(v);
        sub.insert(w);
        let (canon, key) = canonical_pair(&g.induced(&sub));
        (key, canon)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.par_iter().map(key_one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pairs.iter().map(key_one).collect()
    }
}

/// Rebuilds the host graph, up to isomorphism, from a bundle built over a
/// stable anchor.
///
/// The procedure: fix the canonical labeling of the anchor H; inside every
/// pair graph locate the unique copy of H, pull the two leftover vertices'
/// shadows back onto H (consistency across all embeddings certifies
/// stability condition (i)), and record the unordered shadow pair plus the
/// leftover adjacency bit. Distinct shadows then name the outside vertices:
/// condition (ii) makes the naming injective, so the records assemble into a
/// single graph. Every deviation from that picture surfaces as a
/// [`ReconError`] naming the violated assumption.
pub fn reconstruct(bundle: &AdjacentBundle) -> Result<Graph, ReconError> {
    bundle.check_invariants()?;
    let m = bundle.anchor.order();
    let q = bundle.outside_count();
    let (h_canon, _) = canonical_pair(&bundle.anchor);

    // Shadow-pair records: (low shadow, high shadow) -> leftover adjacency.
    let mut records: BTreeMap<(VertexSet, VertexSet), bool> = BTreeMap::new();

    for (_, pair_graph, mult) in bundle.pair_graphs() {
        if mult > 1 {
            return Err(ReconError::PairGraphCollision { multiplicity: mult });
        }
        let images = find_copy_sets(pair_graph, &h_canon, 2);
        match images.len() {
            0 => return Err(ReconError::MissingAnchorCopy),
            1 => {}
            k => return Err(ReconError::AnchorCopyAmbiguous { images: k }),
        }
        let image = &images[0];
        let leftover: Vec<usize> = (0..pair_graph.order())
            .filter(|&v| !image.contains(v))
            .collect();
        debug_assert_eq!(leftover.len(), 2);
        let (x, y) = (leftover[0], leftover[1]);

        let embeddings = find_induced_embeddings(&h_canon, pair_graph, usize::MAX);
        debug_assert!(!embeddings.is_empty());
        let mut agreed: Option<(VertexSet, VertexSet)> = None;
        for phi in &embeddings {
            let pull = |outside: usize| -> VertexSet {
                (0..m)
                    .filter(|&h| pair_graph.has_edge(phi[h], outside))
                    .collect()
            };
            let (sx, sy) = (pull(x), pull(y));
            match &agreed {
                None => agreed = Some((sx, sy)),
                Some(prev) => {
                    if prev != &(sx, sy) {
                        return Err(ReconError::ShadowPullbackDisagrees);
                    }
                }
            }
        }
        let (sx, sy) = agreed.expect("at least one embedding exists");
        if sx == sy {
            return Err(ReconError::DuplicateShadowsInPair);
        }
        let bit = pair_graph.has_edge(x, y);
        let slot = if sx <= sy { (sx, sy) } else { (sy, sx) };
        match records.get(&slot) {
            None => {
                records.insert(slot, bit);
            }
            Some(&prev) if prev != bit => return Err(ReconError::ConflictingAdjacency),
            Some(_) => return Err(ReconError::DuplicatePairRecord),
        }
    }

    // Collect distinct shadows; each must appear in exactly q-1 pairs.
    let mut appearances: BTreeMap<VertexSet, usize> = BTreeMap::new();
    for (a, b) in records.keys() {
        *appearances.entry(a.clone()).or_insert(0) += 1;
        *appearances.entry(b.clone()).or_insert(0) += 1;
    }
    if appearances.len() != q {
        return Err(ReconError::ShadowCountMismatch {
            expected: q,
            found: appearances.len(),
        });
    }
    for count in appearances.values() {
        if *count != q - 1 {
            return Err(ReconError::ShadowDegreeMismatch {
                expected: q - 1,
                found: *count,
            });
        }
    }

    // Assemble: anchor vertices 0..m, one vertex per shadow after that.
    let shadows: Vec<VertexSet> = appearances.into_keys().collect();
    let index_of = |s: &VertexSet| -> usize {
        m + shadows.binary_search(s).expect("shadow collected above")
    };
    let mut edges = h_canon.edges();
    for (i, sh) in shadows.iter().enumerate() {
        for h in sh.iter() {
            edges.push((h, m + i));
        }
    }
    for ((a, b), bit) in &records {
        if *bit {
            edges.push((index_of(a), index_of(b)));
        }
    }
    Ok(Graph::from_edges(m + q, &edges).expect("assembled edges are in range"))
}

/// Whether a deck is the exhaustive multiset or a with-replacement sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeckMode {
    Full,
    Sampled,
}

/// A multiset of induced `m`-vertex subgraphs of an `n`-vertex host, keyed
/// by canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deck {
    m: usize,
    n: usize,
    mode: DeckMode,
    entries: BTreeMap<CanonicalKey, u64>,
}

impl Deck {
    pub fn subgraph_order(&self) -> usize {
        self.m
    }

    pub fn host_order(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> DeckMode {
        self.mode
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CanonicalKey, u64)> {
        self.entries.iter().map(|(k, &c)| (k, c))
    }

    pub fn multiplicity(&self, key: &CanonicalKey) -> u64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn distinct_keys(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity_total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn from_parts(
        m: usize,
        n: usize,
        mode: DeckMode,
        entries: BTreeMap<CanonicalKey, u64>,
    ) -> Self {
        Deck {
            m,
            n,
            mode,
            entries,
        }
    }
}

fn deck_from_masks(g: &Graph, m: usize, mode: DeckMode, masks: &[u64]) -> Deck {
    let key_one = |&mask: &u64| canonical_pair(&g.induced(&VertexSet::from_words(&[mask]))).1;

    #[cfg(feature = "parallel")]
    let counts: BTreeMap<CanonicalKey, u64> = {
        use rayon::prelude::*;
        masks
            .par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<CanonicalKey, u64>, mask| {
                *acc.entry(key_one(mask)).or_insert(0) += 1;
                acc
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, c) in b {
                    *a.entry(k).or_insert(0) += c;
                }
                a
            })
    };
    #[cfg(not(feature = "parallel"))]
    let counts: BTreeMap<CanonicalKey, u64> = {
        let mut acc = BTreeMap::new();
        for mask in masks {
            *acc.entry(key_one(mask)).or_insert(0) += 1;
        }
        acc
    };

    Deck {
        m,
        n: g.order(),
        mode,
        entries: counts,
    }
}

/// The exact multiset of all C(n,m) induced `m`-vertex subgraphs.
pub fn full_deck(g: &Graph, m: usize) -> Result<Deck, ReconError> {
    full_deck_with_budget(g, m, DEFAULT_DECK_BUDGET)
}

/// [`full_deck`] with an explicit enumeration budget.
pub fn full_deck_with_budget(g: &Graph, m: usize, budget: u64) -> Result<Deck, ReconError> {
    let n = g.order();
    assert!(n <= 64, "deck enumeration supports hosts up to 64 vertices");
    if m > n {
        return Err(ReconError::DeckOrderTooLarge { m, n });
    }
    let required = binomial(n, m);
    if required > u128::from(budget) {
        return Err(ReconError::BudgetExceeded { required, budget });
    }
    let masks: Vec<u64> = subsets_of_size(n, m).collect();
    Ok(deck_from_masks(g, m, DeckMode::Full, &masks))
}

/// Sequential twin of [`full_deck`], used by the benchmark suite.
pub fn full_deck_seq(g: &Graph, m: usize) -> Result<Deck, ReconError> {
    let n = g.order();
    assert!(n <= 64);
    if m > n {
        return Err(ReconError::DeckOrderTooLarge { m, n });
    }
    let required = binomial(n, m);
    if required > u128::from(DEFAULT_DECK_BUDGET) {
        return Err(ReconError::BudgetExceeded {
            required,
            budget: DEFAULT_DECK_BUDGET,
        });
    }
    let mut entries: BTreeMap<CanonicalKey, u64> = BTreeMap::new();
    for mask in subsets_of_size(n, m) {
        let key = canonical_pair(&g.induced(&VertexSet::from_words(&[mask]))).1;
        *entries.entry(key).or_insert(0) += 1;
    }
    Ok(Deck {
        m,
        n,
        mode: DeckMode::Full,
        entries,
    })
}

/// A deck of `samples` uniform `m`-subsets drawn with replacement.
pub fn sampled_deck(g: &Graph, m: usize, samples: u64, seed: u64) -> Deck {
    let n = g.order();
    assert!(n <= 64, "deck sampling supports hosts up to 64 vertices");
    assert!(m <= n, "subgraph order {m} exceeds host order {n}");
    assert!(samples >= 1, "need at least one sample");
    let masks: Vec<u64> = (0..samples)
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            sample_subset(&mut rng, n, m)
                .as_mask64()
                .expect("n <= 64 fits one word")
        })
        .collect();
    deck_from_masks(g, m, DeckMode::Sampled, &masks)
}

/// Counts induced copies of `pattern` (order k) in the host from its
/// `m`-deck alone: sum C_F(pattern) over deck entries, divided by
/// C(n-k, m-k). The division is exact for every complete deck; a remainder
/// means the deck is inconsistent.
pub fn kelly_count(deck: &Deck, pattern: &Graph) -> Result<u64, ReconError> {
    let (m, n, k) = (deck.m, deck.n, pattern.order());
    if k > m {
        return Err(ReconError::KellyOrderMismatch { k, m });
    }
    let expected = binomial(n, m);
    let found = deck.multiplicity_total();
    if u128::from(found) != expected {
        return Err(ReconError::IncompleteDeck { expected, found });
    }
    let mut numerator: u128 = 0;
    for (key, mult) in deck.entries() {
        let copies = crate::iso::count_induced_copies(&key.to_graph(), pattern);
        numerator += u128::from(copies) * u128::from(mult);
    }
    let denominator = binomial(n - k, m - k);
    if numerator % denominator != 0 {
        return Err(ReconError::NonExactDivision {
            numerator,
            denominator,
        });
    }
    Ok(u64::try_from(numerator / denominator).expect("counts fit in u64 within the deck budget"))
}

/// Verdict of the deck comparison. Equal decks certify isomorphism only in
/// the almost-sure sense; different decks are a proof of non-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeckVerdict {
    EqualDecks,
    DifferentDecks {
        witness: CanonicalKey,
        left: u64,
        right: u64,
    },
}

impl DeckVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, DeckVerdict::EqualDecks)
    }
}

/// Compares the full `m`-decks of two graphs of equal order.
pub fn decide_iso_by_deck(g1: &Graph, g2: &Graph, m: usize) -> Result<DeckVerdict, ReconError> {
    if g1.order() != g2.order() {
        return Err(ReconError::OrderMismatch {
            left: g1.order(),
            right: g2.order(),
        });
    }
    let d1 = full_deck(g1, m)?;
    let d2 = full_deck(g2, m)?;
    let keys: std::collections::BTreeSet<&CanonicalKey> =
        d1.entries.keys().chain(d2.entries.keys()).collect();
    for key in keys {
        let left = d1.multiplicity(key);
        let right = d2.multiplicity(key);
        if left != right {
            return Ok(DeckVerdict::DifferentDecks {
                witness: key.clone(),
                left,
                right,
            });
        }
    }
    Ok(DeckVerdict::EqualDecks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchor::{find_stable_anchor, is_stable_anchor, SearchOutcome};
    use crate::graph::constructions::{cycle, path, star};
    use crate::iso::{are_isomorphic, canonical_key, count_induced_copies, enumerate_classes};

    #[test]
    fn bundle_sizes_match_outside_pairs() {
        // n - m = 2 gives a single pair graph, n - m = 5 gives ten.
        let g = Graph::random(8, 11);
        let s: VertexSet = (0..6).collect();
        let b = build_bundle(&g, &s).unwrap();
        assert_eq!(b.pair_multiplicity_total(), 1);

        let g = Graph::random(9, 12);
        let s: VertexSet = (0..4).collect();
        let b = build_bundle(&g, &s).unwrap();
        assert_eq!(b.pair_multiplicity_total(), 10);
        b.check_invariants().unwrap();
    }

    #[test]
    fn bundle_pair_graphs_contain_the_anchor() {
        let g = Graph::random(20, 77);
        let s: VertexSet = (0..10).collect();
        let b = build_bundle(&g, &s).unwrap();
        assert_eq!(b.pair_multiplicity_total(), 45);
        let (h_canon, _) = canonical_pair(&b.anchor().clone());
        for (_, pair_graph, _) in b.pair_graphs() {
            assert_eq!(pair_graph.order(), 12);
            assert!(
                !find_copy_sets(pair_graph, &h_canon, 1).is_empty(),
                "pair graph misses the anchor"
            );
        }
    }

    #[test]
    fn too_few_outside_vertices_is_an_error() {
        let g = Graph::random(6, 3);
        let s: VertexSet = (0..5).collect();
        assert_eq!(
            build_bundle(&g, &s).unwrap_err(),
            ReconError::TooFewOutsideVertices { outside: 1 }
        );
    }

    #[test]
    fn round_trip_on_random_hosts() {
        for (n, m, seed) in [(12, 9, 1u64), (16, 10, 2), (20, 11, 3), (24, 12, 4)] {
            let g = Graph::random(n, seed);
            let outcome = find_stable_anchor(&g, m, 32, seed ^ 0xabcd);
            let cert = match &outcome {
                SearchOutcome::Found { certificate, .. } => certificate,
                SearchOutcome::NotFound { failures, .. } => {
                    panic!("no stable anchor at n={n}, m={m}: {failures:?}")
                }
            };
            let bundle = build_bundle(&g, cert.anchor_set()).unwrap();
            let rebuilt = reconstruct(&bundle).unwrap();
            assert!(are_isomorphic(&g, &rebuilt), "n={n} seed={seed}");
        }
    }

    #[test]
    fn round_trip_exhaustive_on_small_hosts() {
        // Every graph on 6 vertices (up to iso), every stable anchor with at
        // least two outside vertices.
        for key in enumerate_classes(6).unwrap() {
            let g = key.to_graph();
            for mask in 1u64..(1 << 6) - 1 {
                let s = VertexSet::from_words(&[mask]);
                if s.len() > 4 {
                    continue;
                }
                let cert = is_stable_anchor(&g, &s).unwrap();
                if !cert.is_stable() {
                    continue;
                }
                let bundle = build_bundle(&g, &s).unwrap();
                let rebuilt = reconstruct(&bundle).unwrap();
                assert!(are_isomorphic(&g, &rebuilt));
            }
        }
    }

    #[test]
    fn corrupt_bundle_without_anchor_copy_is_rejected() {
        let g = Graph::random(14, 5);
        let cert = find_stable_anchor(&g, 10, 32, 9)
            .certificate()
            .cloned()
            .expect("stable anchor exists");
        let bundle = build_bundle(&g, cert.anchor_set()).unwrap();
        // Replace one pair class with an edgeless graph: the anchor (being a
        // subgraph of a random host) is essentially never edgeless.
        let mut pairs: Vec<(Graph, u64)> = bundle
            .pair_graphs()
            .map(|(_, g, c)| (g.clone(), c))
            .collect();
        pairs[0].0 = Graph::empty(12);
        let corrupt = AdjacentBundle::from_parts(
            bundle.anchor().clone(),
            bundle.total_order(),
            pairs,
        );
        match reconstruct(&corrupt) {
            Err(
                ReconError::MissingAnchorCopy
                | ReconError::ShadowCountMismatch { .. }
                | ReconError::ShadowDegreeMismatch { .. },
            ) => {}
            other => panic!("expected corruption error, got {other:?}"),
        }
    }

    #[test]
    fn dropped_pair_graph_is_detected() {
        let g = Graph::random(14, 6);
        let cert = find_stable_anchor(&g, 10, 32, 10)
            .certificate()
            .cloned()
            .expect("stable anchor exists");
        let bundle = build_bundle(&g, cert.anchor_set()).unwrap();
        let pairs: Vec<(Graph, u64)> = bundle
            .pair_graphs()
            .skip(1)
            .map(|(_, g, c)| (g.clone(), c))
            .collect();
        let corrupt =
            AdjacentBundle::from_parts(bundle.anchor().clone(), bundle.total_order(), pairs);
        assert!(matches!(
            reconstruct(&corrupt),
            Err(ReconError::BundleSizeMismatch { .. })
        ));
    }

    #[test]
    fn full_deck_examples() {
        let deck = full_deck(&Graph::complete(3), 2).unwrap();
        assert_eq!(deck.multiplicity_total(), 3);
        assert_eq!(deck.distinct_keys(), 1);
        assert_eq!(deck.multiplicity(&canonical_key(&Graph::complete(2))), 3);

        let deck = full_deck(&path(3), 2).unwrap();
        assert_eq!(deck.multiplicity(&canonical_key(&Graph::complete(2))), 2);
        assert_eq!(deck.multiplicity(&canonical_key(&Graph::empty(2))), 1);

        let deck = full_deck(&cycle(4), 3).unwrap();
        assert_eq!(deck.distinct_keys(), 1);
        assert_eq!(deck.multiplicity(&canonical_key(&path(3))), 4);
    }

    #[test]
    fn deck_budget_is_enforced() {
        let g = Graph::random(30, 1);
        assert!(matches!(
            full_deck_with_budget(&g, 15, 1000),
            Err(ReconError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn deck_completeness_and_invariance() {
        use crate::perm::Permutation;
        for seed in 0..5 {
            let g = Graph::random(10, seed);
            for m in 1..=4 {
                let deck = full_deck(&g, m).unwrap();
                assert_eq!(u128::from(deck.multiplicity_total()), binomial(10, m));
                let p = Permutation::from_table((0..10).map(|v| (v + 7) % 10).collect());
                let deck_p = full_deck(&g.relabel(&p), m).unwrap();
                assert_eq!(deck, deck_p);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_decks_agree() {
        let g = Graph::random(14, 9);
        assert_eq!(full_deck(&g, 4).unwrap(), full_deck_seq(&g, 4).unwrap());
    }

    #[test]
    fn sampled_deck_basics() {
        let g = Graph::complete(10);
        let deck = sampled_deck(&g, 4, 25, 3);
        assert_eq!(deck.mode(), DeckMode::Sampled);
        assert_eq!(deck.multiplicity_total(), 25);
        assert_eq!(deck.distinct_keys(), 1, "every 4-subset of K_10 is K_4");

        let one = sampled_deck(&Graph::random(12, 4), 5, 1, 9);
        assert_eq!(one.multiplicity_total(), 1);
        assert_eq!(one.distinct_keys(), 1);
    }

    #[test]
    fn sampled_subsets_of_random_hosts_rarely_collide() {
        // At n=40, m=16 nearly every sampled subset lands in its own class.
        let g = Graph::random(40, 17);
        let samples = 2000;
        let deck = sampled_deck(&g, 16, samples, 23);
        assert_eq!(deck.multiplicity_total(), samples);
        assert!(
            deck.distinct_keys() as u64 >= samples - 2,
            "{} distinct classes from {samples} samples",
            deck.distinct_keys()
        );
    }

    #[test]
    fn kelly_count_examples() {
        let k2 = Graph::complete(2);
        // C_4: deck {P_3: 4}, edges (2*4)/C(2,1) = 4.
        let deck = full_deck(&cycle(4), 3).unwrap();
        assert_eq!(kelly_count(&deck, &k2).unwrap(), 4);
        // K_4: deck {K_3: 4}, edges (3*4)/2 = 6.
        let deck = full_deck(&Graph::complete(4), 3).unwrap();
        assert_eq!(kelly_count(&deck, &k2).unwrap(), 6);
        // Edgeless host: zero edges.
        let deck = full_deck(&Graph::empty(4), 3).unwrap();
        assert_eq!(kelly_count(&deck, &k2).unwrap(), 0);
    }

    #[test]
    fn kelly_rejects_bad_inputs() {
        let deck = full_deck(&cycle(4), 3).unwrap();
        assert_eq!(
            kelly_count(&deck, &Graph::complete(4)).unwrap_err(),
            ReconError::KellyOrderMismatch { k: 4, m: 3 }
        );
        let partial = Deck::from_parts(
            3,
            4,
            DeckMode::Full,
            [(canonical_key(&path(3)), 3u64)].into_iter().collect(),
        );
        assert!(matches!(
            kelly_count(&partial, &Graph::complete(2)),
            Err(ReconError::IncompleteDeck { .. })
        ));
    }

    #[test]
    fn kelly_matches_direct_counts_on_random_hosts() {
        for seed in 0..4 {
            let g = Graph::random(8, seed);
            for m in 2..=5usize {
                let deck = full_deck(&g, m).unwrap();
                for k in 1..m {
                    for key in enumerate_classes(k).unwrap() {
                        let h = key.to_graph();
                        assert_eq!(
                            kelly_count(&deck, &h).unwrap(),
                            count_induced_copies(&g, &h),
                            "seed={seed} m={m} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn deck_decision_examples() {
        use crate::perm::Permutation;
        let g = Graph::random(10, 8);
        let p = Permutation::from_table((0..10).map(|v| (v * 3) % 10).collect());
        assert!(decide_iso_by_deck(&g, &g.relabel(&p), 4).unwrap().is_equal());

        match decide_iso_by_deck(&path(4), &star(4), 3).unwrap() {
            DeckVerdict::DifferentDecks { witness, left, right } => {
                // P_4 deck: {P_3: 2, K_2+K_1: 2}; claw deck: {P_3: 3, E_3: 1}.
                assert_ne!(left, right);
                let w = witness.to_graph();
                assert_eq!(w.order(), 3);
            }
            DeckVerdict::EqualDecks => panic!("P_4 and the claw differ"),
        }

        assert_eq!(
            decide_iso_by_deck(&path(4), &path(5), 3).unwrap_err(),
            ReconError::OrderMismatch { left: 4, right: 5 }
        );
    }
}
