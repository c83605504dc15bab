//! Anchors and shadows: testing whether a vertex subset induces a subgraph
//! that occurs exactly once, certifying stability, and probing random
//! subsets for stable anchors.
//!
//! An anchor is a proper induced subgraph occurring exactly once in the host.
//! It is stable when (i) the shadow of every outside vertex is fixed setwise
//! by every automorphism of the anchor and (ii) no two outside vertices cast
//! the same shadow. A stable anchor identifies every outside vertex by its
//! shadow, which is what makes reconstruction from 2-adjacent bundles work.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::iso::{automorphism_generators, find_copy_sets};
use crate::seeding::{derive_seed, rng_from_seed, sample_subset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnchorError {
    #[error("anchor set must be a nonempty proper subset: |S| = {size}, host order {order}")]
    NotProperSubset { size: usize, order: usize },
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("vertex {vertex} lies inside the anchor set")]
    VertexInsideAnchor { vertex: usize },
}

/// Outcome of the occurs-exactly-once check, with the second occurrence as
/// evidence when the check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorCheck {
    pub is_anchor: bool,
    /// A vertex set other than the queried one inducing an isomorphic copy.
    pub second_copy: Option<VertexSet>,
}

/// Why a certificate came out unstable; the first violated condition wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstabilityReason {
    NotAnchor { second_copy: VertexSet },
    ShadowNotInvariant { vertex: usize },
    DuplicateShadows { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable(InstabilityReason),
}

/// Evidence gathered while testing a vertex subset for stable anchorhood.
#[derive(Debug, Clone)]
pub struct AnchorCertificate {
    host_order: usize,
    anchor: VertexSet,
    /// Induced copies of the anchor subgraph found in the host, capped at 2.
    copies_found: u32,
    second_copy: Option<VertexSet>,
    anchor_asymmetric: bool,
    /// Shadow of each outside vertex, ascending by vertex.
    shadows: Vec<(usize, VertexSet)>,
    verdict: Stability,
}

impl AnchorCertificate {
    pub fn is_stable(&self) -> bool {
        matches!(self.verdict, Stability::Stable)
    }

    pub fn verdict(&self) -> &Stability {
        &self.verdict
    }

    pub fn anchor_set(&self) -> &VertexSet {
        &self.anchor
    }

    pub fn host_order(&self) -> usize {
        self.host_order
    }

    pub fn copies_found(&self) -> u32 {
        self.copies_found
    }

    pub fn second_copy(&self) -> Option<&VertexSet> {
        self.second_copy.as_ref()
    }

    pub fn anchor_asymmetric(&self) -> bool {
        self.anchor_asymmetric
    }

    pub fn shadows(&self) -> &[(usize, VertexSet)] {
        &self.shadows
    }

    /// Whether a 2-adjacent bundle can reconstruct the host: it takes at
    /// least two outside vertices to record any pair information.
    pub fn bundle_feasible(&self) -> bool {
        self.host_order - self.anchor.len() >= 2
    }
}

fn validate_subset(g: &Graph, s: &VertexSet) -> Result<(), AnchorError> {
    let n = g.order();
    if let Some(v) = s.max_member() {
        if v >= n {
            return Err(AnchorError::VertexOutOfRange { vertex: v, order: n });
        }
    }
    let size = s.len();
    if size == 0 || size >= n {
        return Err(AnchorError::NotProperSubset { size, order: n });
    }
    Ok(())
}

/// The shadow of `v` on the subset `s`: neighbors of `v` inside `s`.
pub fn shadow(g: &Graph, s: &VertexSet, v: usize) -> Result<VertexSet, AnchorError> {
    let n = g.order();
    if v >= n {
        return Err(AnchorError::VertexOutOfRange { vertex: v, order: n });
    }
    if let Some(m) = s.max_member() {
        if m >= n {
            return Err(AnchorError::VertexOutOfRange { vertex: m, order: n });
        }
    }
    if s.contains(v) {
        return Err(AnchorError::VertexInsideAnchor { vertex: v });
    }
    Ok(g.neighbors(v).intersection(s))
}

/// Does `s` induce an anchor, i.e. does G[s] occur exactly once in `g`?
/// The search stops as soon as a second occurrence turns up.
pub fn is_anchor(g: &Graph, s: &VertexSet) -> Result<AnchorCheck, AnchorError> {
    validate_subset(g, s)?;
    let h = g.induced(s);
    // The queried set is always one of the copies, so a single image means
    // it is the only one; with the early stop at two images the queried set
    // itself may not be among the two returned.
    let copies = find_copy_sets(g, &h, 2);
    let second_copy = copies.into_iter().find(|c| c != s);
    Ok(AnchorCheck {
        is_anchor: second_copy.is_none(),
        second_copy,
    })
}

/// Full stable-anchor certification: anchor property, automorphism
/// invariance of every shadow, pairwise-distinct shadows, in that order.
pub fn is_stable_anchor(g: &Graph, s: &VertexSet) -> Result<AnchorCertificate, AnchorError> {
    validate_subset(g, s)?;
    let n = g.order();
    let h = g.induced(s);
    let members = s.to_vec();

    let copies = find_copy_sets(g, &h, 2);
    let second_copy = copies.iter().find(|&c| c != s).cloned();
    let copies_found = copies.len() as u32;

    let generators = automorphism_generators(&h);
    let anchor_asymmetric = generators.is_empty();

    let mut shadows = Vec::with_capacity(n - members.len());
    for v in 0..n {
        if !s.contains(v) {
            shadows.push((v, g.neighbors(v).intersection(s)));
        }
    }

    let mut verdict = match &second_copy {
        Some(copy) => Stability::Unstable(InstabilityReason::NotAnchor {
            second_copy: copy.clone(),
        }),
        None => Stability::Stable,
    };

    // Condition (i): every shadow fixed setwise by every generator. Checking
    // generators suffices: setwise invariance is closed under products and
    // inverses. Vacuous for asymmetric anchors.
    if verdict == Stability::Stable {
        'outer: for (v, sh) in &shadows {
            let local = local_mask(sh, &members);
            for gen in &generators {
                let mapped = (0..members.len())
                    .filter(|&i| local >> i & 1 == 1)
                    .fold(0u64, |m, i| m | 1 << gen.apply(i));
                if mapped != local {
                    verdict =
                        Stability::Unstable(InstabilityReason::ShadowNotInvariant { vertex: *v });
                    break 'outer;
                }
            }
        }
    }

    // Condition (ii): shadows pairwise distinct.
    if verdict == Stability::Stable {
        let mut seen: BTreeMap<VertexSet, usize> = BTreeMap::new();
        for (v, sh) in &shadows {
            if let Some(&first) = seen.get(sh) {
                verdict = Stability::Unstable(InstabilityReason::DuplicateShadows {
                    first,
                    second: *v,
                });
                break;
            }
            seen.insert(sh.clone(), *v);
        }
    }

    Ok(AnchorCertificate {
        host_order: n,
        anchor: s.clone(),
        copies_found,
        second_copy,
        anchor_asymmetric,
        shadows,
        verdict,
    })
}

/// Shadow translated to positions within the sorted anchor members.
fn local_mask(shadow: &VertexSet, members: &[usize]) -> u64 {
    members
        .iter()
        .enumerate()
        .filter(|(_, &v)| shadow.contains(v))
        .fold(0u64, |m, (i, _)| m | 1 << i)
}

/// Coarse classification of why a trial subset failed, for frequency tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureKind {
    NotAnchor,
    ShadowNotInvariant,
    DuplicateShadows,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureKind::NotAnchor => "not-anchor",
            FailureKind::ShadowNotInvariant => "shadow-not-invariant",
            FailureKind::DuplicateShadows => "duplicate-shadows",
        };
        f.write_str(s)
    }
}

impl From<&InstabilityReason> for FailureKind {
    fn from(r: &InstabilityReason) -> Self {
        match r {
            InstabilityReason::NotAnchor { .. } => FailureKind::NotAnchor,
            InstabilityReason::ShadowNotInvariant { .. } => FailureKind::ShadowNotInvariant,
            InstabilityReason::DuplicateShadows { .. } => FailureKind::DuplicateShadows,
        }
    }
}

/// Result of the randomized stable-anchor search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        trial: usize,
        certificate: AnchorCertificate,
    },
    NotFound {
        trials: usize,
        failures: BTreeMap<FailureKind, usize>,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&AnchorCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Samples uniformly random `m`-subsets and returns the first stable
/// certificate. Trials run concurrently under the `parallel` feature; the
/// winner is always the success with the lowest trial index, so the outcome
/// does not depend on scheduling.
pub fn find_stable_anchor(g: &Graph, m: usize, max_trials: usize, seed: u64) -> SearchOutcome {
    assert!(
        m >= 1 && m < g.order(),
        "anchor order {m} must satisfy 1 <= m < {}",
        g.order()
    );

    let run_trial = |trial: usize| -> Result<AnchorCertificate, FailureKind> {
        let mut rng = rng_from_seed(derive_seed(seed, trial as u64));
        let s = sample_subset(&mut rng, g.order(), m);
        let cert = is_stable_anchor(g, &s).expect("sampled subset is a proper subset");
        match cert.verdict() {
            Stability::Stable => Ok(cert),
            Stability::Unstable(reason) => Err(FailureKind::from(reason)),
        }
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let found = (0..max_trials)
            .into_par_iter()
            .filter_map(|t| run_trial(t).ok().map(|c| (t, c)))
            .find_first(|_| true);
        if let Some((trial, certificate)) = found {
            return SearchOutcome::Found { trial, certificate };
        }
        let mut failures = BTreeMap::new();
        let kinds: Vec<FailureKind> = (0..max_trials)
            .into_par_iter()
            .map(|t| run_trial(t).unwrap_err())
            .collect();
        for k in kinds {
            *failures.entry(k).or_insert(0) += 1;
        }
        SearchOutcome::NotFound {
            trials: max_trials,
            failures,
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut failures = BTreeMap::new();
        for trial in 0..max_trials {
            match run_trial(trial) {
                Ok(certificate) => return SearchOutcome::Found { trial, certificate },
                Err(kind) => *failures.entry(kind).or_insert(0) += 1,
            }
        }
        SearchOutcome::NotFound {
            trials: max_trials,
            failures,
        }
    }
}

/// Sequential variant of [`find_stable_anchor`], kept for benchmarking the
/// parallel path against; identical results by construction.
pub fn find_stable_anchor_seq(g: &Graph, m: usize, max_trials: usize, seed: u64) -> SearchOutcome {
    assert!(m >= 1 && m < g.order());
    let mut failures = BTreeMap::new();
    for trial in 0..max_trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial as u64));
        let s = sample_subset(&mut rng, g.order(), m);
        let cert = is_stable_anchor(g, &s).expect("sampled subset is a proper subset");
        match cert.verdict() {
            Stability::Stable => {
                return SearchOutcome::Found {
                    trial,
                    certificate: cert,
                }
            }
            Stability::Unstable(reason) => {
                *failures.entry(FailureKind::from(&reason.clone())).or_insert(0) += 1;
            }
        }
    }
    SearchOutcome::NotFound {
        trials: max_trials,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::constructions::path;
    use crate::iso::count_induced_copies;

    #[test]
    fn shadow_examples() {
        let g = path(3);
        let s = VertexSet::from_iter([0, 2]);
        assert_eq!(shadow(&g, &s, 1).unwrap(), s);

        let k = Graph::complete(6);
        let s = VertexSet::from_iter([1, 3, 4]);
        assert_eq!(shadow(&k, &s, 0).unwrap(), s);

        let e = Graph::empty(5);
        assert!(shadow(&e, &VertexSet::from_iter([0, 1]), 3).unwrap().is_empty());

        assert_eq!(
            shadow(&g, &s, 4).unwrap_err(),
            AnchorError::VertexOutOfRange { vertex: 4, order: 3 }
        );
    }

    #[test]
    fn shadow_rejects_inside_vertex() {
        let g = path(3);
        let s = VertexSet::from_iter([0, 2]);
        assert_eq!(
            shadow(&g, &s, 2).unwrap_err(),
            AnchorError::VertexInsideAnchor { vertex: 2 }
        );
    }

    #[test]
    fn path_anchor_checks() {
        let g = path(3);
        // {0,2} induces the only non-adjacent pair.
        let check = is_anchor(&g, &VertexSet::from_iter([0, 2])).unwrap();
        assert!(check.is_anchor);
        assert_eq!(check.second_copy, None);
        // {0,1} induces K_2, which occurs twice.
        let check = is_anchor(&g, &VertexSet::from_iter([0, 1])).unwrap();
        assert!(!check.is_anchor);
        assert_eq!(check.second_copy, Some(VertexSet::from_iter([1, 2])));
    }

    #[test]
    fn k4_two_subsets_are_never_anchors() {
        let g = Graph::complete(4);
        for a in 0..4 {
            for b in (a + 1)..4 {
                let check = is_anchor(&g, &VertexSet::from_iter([a, b])).unwrap();
                assert!(!check.is_anchor);
            }
        }
    }

    #[test]
    fn anchor_preconditions() {
        let g = path(3);
        assert!(matches!(
            is_anchor(&g, &VertexSet::new()),
            Err(AnchorError::NotProperSubset { size: 0, .. })
        ));
        assert!(matches!(
            is_anchor(&g, &g.vertices()),
            Err(AnchorError::NotProperSubset { size: 3, .. })
        ));
    }

    #[test]
    fn path_endpoints_form_a_stable_anchor() {
        let g = path(3);
        let cert = is_stable_anchor(&g, &VertexSet::from_iter([0, 2])).unwrap();
        assert!(cert.is_stable());
        assert!(!cert.anchor_asymmetric(), "E_2 has the swap automorphism");
        assert_eq!(cert.shadows().len(), 1);
        assert!(!cert.bundle_feasible(), "single outside vertex");
    }

    #[test]
    fn pendant_twins_break_stability_via_invariance() {
        // Triangle {0,1,2} plus 3 and 4, each adjacent only to 0. The
        // triangle occurs once, but the shadow {0} moves under Aut(K_3),
        // so condition (i) is the first to fail.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4)]).unwrap();
        let s = VertexSet::from_iter([0, 1, 2]);
        assert!(is_anchor(&g, &s).unwrap().is_anchor);
        let cert = is_stable_anchor(&g, &s).unwrap();
        assert!(!cert.is_stable());
        assert!(matches!(
            cert.verdict(),
            Stability::Unstable(InstabilityReason::ShadowNotInvariant { .. })
        ));
    }

    #[test]
    fn duplicate_shadows_reported_when_invariance_holds() {
        // S = {0,2} induces E_2; 1 and 3 are both adjacent to all of S and
        // to each other, so {0,2} occurs once, shadows equal {0,2}: setwise
        // invariant under the swap but duplicated.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 3), (2, 3), (1, 3)]).unwrap();
        let s = VertexSet::from_iter([0, 2]);
        let cert = is_stable_anchor(&g, &s).unwrap();
        assert!(!cert.is_stable());
        assert_eq!(
            cert.verdict(),
            &Stability::Unstable(InstabilityReason::DuplicateShadows { first: 1, second: 3 })
        );
    }

    #[test]
    fn anchor_agrees_with_copy_count_exhaustively() {
        // All graphs on 6 vertices, all proper subset sizes.
        for bits in (0u64..1 << 15).step_by(97) {
            let g = Graph::from_upper_bits(6, bits);
            for mask in 1u64..(1 << 6) - 1 {
                let s = VertexSet::from_words(&[mask]);
                let check = is_anchor(&g, &s).unwrap();
                let count = count_induced_copies(&g, &g.induced(&s));
                assert_eq!(check.is_anchor, count == 1, "bits={bits} mask={mask:b}");
            }
        }
    }

    #[test]
    fn stable_verdict_is_isomorphism_invariant() {
        use crate::perm::Permutation;
        let mut rng_seed = 0;
        for _ in 0..30 {
            rng_seed += 1;
            let g = Graph::random(9, rng_seed);
            let s = VertexSet::from_iter([0, 2, 5, 7]);
            let cert = is_stable_anchor(&g, &s).unwrap();
            let table: Vec<usize> = (0..9).map(|v| (v + 3) % 9).collect();
            let p = Permutation::from_table(table);
            let gp = g.relabel(&p);
            let sp: VertexSet = s.iter().map(|v| p.apply(v)).collect();
            let cert_p = is_stable_anchor(&gp, &sp).unwrap();
            assert_eq!(cert.is_stable(), cert_p.is_stable(), "seed {rng_seed}");
        }
    }

    #[test]
    fn random_search_finds_stable_anchor_quickly() {
        let g = Graph::random(30, 7001);
        match find_stable_anchor(&g, 13, 10, 42) {
            SearchOutcome::Found { certificate, .. } => {
                assert!(certificate.is_stable());
                assert_eq!(certificate.anchor_set().len(), 13);
            }
            SearchOutcome::NotFound { failures, .. } => {
                panic!("expected a stable anchor, failures: {failures:?}")
            }
        }
    }

    #[test]
    fn random_search_success_rate_is_high() {
        // Success frequency across seeds; the per-trial stable probability
        // at (n=30, m=13) is well above 0.9.
        let mut found = 0;
        for seed in 0..20 {
            let g = Graph::random(30, 9000 + seed);
            if matches!(
                find_stable_anchor(&g, 13, 10, seed),
                SearchOutcome::Found { .. }
            ) {
                found += 1;
            }
        }
        assert!(found >= 18, "only {found}/20 searches succeeded");
    }

    #[test]
    fn complete_and_empty_hosts_never_have_anchors() {
        for g in [Graph::complete(8), Graph::empty(8)] {
            match find_stable_anchor(&g, 3, 6, 5) {
                SearchOutcome::NotFound { trials, failures } => {
                    assert_eq!(trials, 6);
                    assert_eq!(failures.get(&FailureKind::NotAnchor), Some(&6));
                }
                SearchOutcome::Found { .. } => panic!("no subset occurs uniquely"),
            }
        }
    }

    #[test]
    fn parallel_and_sequential_search_agree() {
        let g = Graph::random(24, 31);
        for seed in 0..5 {
            let a = find_stable_anchor(&g, 11, 8, seed);
            let b = find_stable_anchor_seq(&g, 11, 8, seed);
            match (a, b) {
                (
                    SearchOutcome::Found { trial: t1, certificate: c1 },
                    SearchOutcome::Found { trial: t2, certificate: c2 },
                ) => {
                    assert_eq!(t1, t2);
                    assert_eq!(c1.anchor_set(), c2.anchor_set());
                }
                (
                    SearchOutcome::NotFound { failures: f1, .. },
                    SearchOutcome::NotFound { failures: f2, .. },
                ) => assert_eq!(f1, f2),
                _ => panic!("outcomes disagree"),
            }
        }
    }
}
