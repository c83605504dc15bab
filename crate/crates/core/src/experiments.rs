//! Seeded Monte Carlo estimators, closed-form probability evaluators, and
//! round-trip reconstruction campaigns, with CSV/JSON report emission.
//!
//! Everything here is deterministic given the master seed: per-trial seeds
//! are derived from the trial index, trials may run in parallel, and records
//! are kept in trial order. Wall-clock timings are measured per trial but
//! zeroed in emitted reports unless explicitly requested, so output files
//! are byte-identical across reruns.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::anchor::{find_stable_anchor, is_stable_anchor, FailureKind, SearchOutcome, Stability};
use crate::graph::Graph;
use crate::recon::{build_bundle, reconstruct, ReconError};
use crate::seeding::{derive_seed, rng_from_seed, sample_subset};

/// Default master seed for the CLI; any fixed value works, it just must not
/// come from the clock.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("2^{m} possible shadows cannot cover {outside} outside vertices")]
    ShadowDomain { m: u32, outside: u64 },
    #[error("round-trip needs 1 <= m < n-2, got m={m} for n={n}")]
    RoundtripDomain { n: usize, m: usize },
    #[error("trial {trial} (seed {seed}): reconstruction disagrees with the host graph")]
    ReconstructionMismatch { trial: usize, seed: u64 },
    #[error("trial {trial} (seed {seed}): {source}")]
    ReconstructionFailed {
        trial: usize,
        seed: u64,
        source: ReconError,
    },
    #[error("invalid experiment configuration: {reason}")]
    InvalidConfig { reason: String },
}

/// Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
}

impl WilsonInterval {
    pub fn overlaps(&self, other: &WilsonInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// 95% Wilson interval by default (`z = 1.96`).
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> WilsonInterval {
    if trials == 0 {
        return WilsonInterval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    WilsonInterval {
        lo: ((center - radius) / denom).max(0.0),
        hi: ((center + radius) / denom).min(1.0),
    }
}

/// How the anchor order m is chosen from the host order n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    Explicit(usize),
    /// ceil(3 log2 n)
    ThreeLog2,
    /// ceil(3 log2 n) - 2
    ThreeLog2Minus2,
}

impl MRule {
    pub fn resolve(&self, n: usize) -> usize {
        match self {
            MRule::Explicit(m) => *m,
            MRule::ThreeLog2 => ceil_3log2(n),
            MRule::ThreeLog2Minus2 => ceil_3log2(n).saturating_sub(2),
        }
    }
}

fn ceil_3log2(n: usize) -> usize {
    assert!(n >= 1);
    (3.0 * (n as f64).log2()).ceil() as usize
}

impl FromStr for MRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3log2n" => Ok(MRule::ThreeLog2),
            "3log2n-2" => Ok(MRule::ThreeLog2Minus2),
            other => other
                .parse::<usize>()
                .map(MRule::Explicit)
                .map_err(|_| format!("bad m rule `{other}`; use a number, 3log2n or 3log2n-2")),
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Explicit(m) => write!(f, "{m}"),
            MRule::ThreeLog2 => write!(f, "3log2n"),
            MRule::ThreeLog2Minus2 => write!(f, "3log2n-2"),
        }
    }
}

/// Configuration block reproduced at the head of JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub n_values: Vec<usize>,
    pub m_rule: String,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |reason: &str| {
            Err(ExperimentError::InvalidConfig {
                reason: reason.to_string(),
            })
        };
        if self.trials == 0 {
            return fail("trial count must be at least 1");
        }
        if self.n_values.is_empty() {
            return fail("n range must be nonempty");
        }
        let rule: MRule = self
            .m_rule
            .parse()
            .map_err(|reason| ExperimentError::InvalidConfig { reason })?;
        for &n in &self.n_values {
            if n == 0 {
                return fail("n must be positive");
            }
            let m = rule.resolve(n);
            if m == 0 || m >= n {
                return Err(ExperimentError::InvalidConfig {
                    reason: format!("m rule {rule} gives m={m} outside 1..{n}"),
                });
            }
        }
        Ok(())
    }
}

/// One trial outcome. Flags are monotone: `stable` implies `anchor`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TrialRecord {
    pub experiment: &'static str,
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub asymmetric: bool,
    pub anchor: bool,
    pub stable: bool,
    pub reconstructed: Option<bool>,
    pub ms: u64,
}

/// CSV lines for trial records, fixed schema
/// `experiment,n,m,trial,seed,asymmetric,anchor,stable,reconstructed,ms`.
/// Timings are zeroed unless `include_timings` so reruns emit identical bytes.
pub fn records_to_csv(records: &[TrialRecord], include_timings: bool) -> String {
    let mut out = String::from("experiment,n,m,trial,seed,asymmetric,anchor,stable,reconstructed,ms\n");
    for r in records {
        let reconstructed = match r.reconstructed {
            None => String::new(),
            Some(true) => "1".to_string(),
            Some(false) => "0".to_string(),
        };
        let ms = if include_timings { r.ms } else { 0 };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.n,
            r.m,
            r.trial,
            r.seed,
            u8::from(r.asymmetric),
            u8::from(r.anchor),
            u8::from(r.stable),
            reconstructed,
            ms
        ));
    }
    out
}

/// JSON report: the config header object plus one row per trial.
pub fn records_to_json(
    config: &ExperimentConfig,
    records: &[TrialRecord],
    include_timings: bool,
) -> String {
    #[derive(Serialize)]
    struct Report<'a> {
        config: &'a ExperimentConfig,
        rows: Vec<TrialRecord>,
    }
    let rows = records
        .iter()
        .map(|r| TrialRecord {
            ms: if include_timings { r.ms } else { 0 },
            ..r.clone()
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Report {
        config,
        rows,
    })
    .expect("report serialization cannot fail");
    s.push('\n');
    s
}

fn run_trials<T: Send>(trials: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(f).collect()
    }
}

/// Estimate of the probability that a uniform m-subset of G(n, 1/2) induces
/// a stable anchor, with per-condition counts.
#[derive(Debug, Clone)]
pub struct StableAnchorEstimate {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub asymmetric: u64,
    pub anchor: u64,
    pub stable: u64,
    pub failures: Vec<(FailureKind, u64)>,
    pub records: Vec<TrialRecord>,
}

impl StableAnchorEstimate {
    pub fn stable_fraction(&self) -> f64 {
        self.stable as f64 / self.trials as f64
    }

    pub fn anchor_fraction(&self) -> f64 {
        self.anchor as f64 / self.trials as f64
    }

    pub fn asymmetric_fraction(&self) -> f64 {
        self.asymmetric as f64 / self.trials as f64
    }

    pub fn stable_interval(&self) -> WilsonInterval {
        wilson_interval(self.stable, self.trials, 1.96)
    }
}

fn anchor_trial(n: usize, m: usize, experiment: &'static str, seed: u64, trial: usize) -> (TrialRecord, Option<FailureKind>) {
    let start = Instant::now();
    let g = Graph::random(n, seed);
    let mut rng = rng_from_seed(derive_seed(seed, 1));
    let s = sample_subset(&mut rng, n, m);
    let cert = is_stable_anchor(&g, &s).expect("1 <= m < n");
    let failure = match cert.verdict() {
        Stability::Stable => None,
        Stability::Unstable(reason) => Some(FailureKind::from(reason)),
    };
    let record = TrialRecord {
        experiment,
        n,
        m,
        trial,
        seed,
        asymmetric: cert.anchor_asymmetric(),
        anchor: cert.copies_found() == 1,
        stable: cert.is_stable(),
        reconstructed: None,
        ms: start.elapsed().as_millis() as u64,
    };
    (record, failure)
}

/// Draws `trials` independent pairs (G, S) with G = G(n, 1/2) and S a
/// uniform m-subset, and certifies each; reports asymmetric / anchor /
/// stable counts separately.
pub fn estimate_stable_anchor_prob(
    n: usize,
    m: usize,
    trials: usize,
    master_seed: u64,
) -> StableAnchorEstimate {
    assert!(m >= 1 && m < n, "need 1 <= m < n");
    assert!(trials >= 1);
    let results = run_trials(trials, |t| {
        anchor_trial(n, m, "anchor-scan", derive_seed(master_seed, t as u64), t)
    });
    aggregate_estimate(n, m, master_seed, results)
}

/// Sequential twin of [`estimate_stable_anchor_prob`] for the bench suite.
pub fn estimate_stable_anchor_prob_seq(
    n: usize,
    m: usize,
    trials: usize,
    master_seed: u64,
) -> StableAnchorEstimate {
    assert!(m >= 1 && m < n && trials >= 1);
    let results = (0..trials)
        .map(|t| anchor_trial(n, m, "anchor-scan", derive_seed(master_seed, t as u64), t))
        .collect();
    aggregate_estimate(n, m, master_seed, results)
}

fn aggregate_estimate(
    n: usize,
    m: usize,
    master_seed: u64,
    results: Vec<(TrialRecord, Option<FailureKind>)>,
) -> StableAnchorEstimate {
    let mut est = StableAnchorEstimate {
        n,
        m,
        trials: results.len() as u64,
        master_seed,
        asymmetric: 0,
        anchor: 0,
        stable: 0,
        failures: Vec::new(),
        records: Vec::with_capacity(results.len()),
    };
    let mut failure_counts = std::collections::BTreeMap::new();
    for (record, failure) in results {
        est.asymmetric += u64::from(record.asymmetric);
        est.anchor += u64::from(record.anchor);
        est.stable += u64::from(record.stable);
        if let Some(kind) = failure {
            *failure_counts.entry(kind).or_insert(0u64) += 1;
        }
        est.records.push(record);
    }
    est.failures = failure_counts.into_iter().collect();
    est
}

/// Upper bound on the probability that a planted m-vertex subgraph of
/// G(n, 1/2) has a second copy: `(1 + n 2^(-m/2))^m - 1`, evaluated in
/// log space.
pub fn bound_second_copy(n: u64, m: u32) -> f64 {
    assert!(n >= 1 && m >= 1);
    let log_x = (n as f64).ln() - f64::from(m) / 2.0 * std::f64::consts::LN_2;
    let x = log_x.exp();
    (f64::from(m) * x.ln_1p()).exp_m1()
}

/// Probability that n-m outside vertices all cast distinct shadows when each
/// shadow is uniform over the 2^m subsets: the falling-factorial product
/// `prod_{j=0}^{n-m-1} (1 - j/2^m)`, evaluated in log space.
pub fn shadow_uniqueness_prob(n: u64, m: u32) -> Result<f64, ExperimentError> {
    let outside = n.saturating_sub(u64::from(m));
    if outside <= 1 {
        return Ok(1.0);
    }
    let enough = m >= 64 || (1u128 << m) >= u128::from(outside);
    if !enough {
        return Err(ExperimentError::ShadowDomain { m, outside });
    }
    let pool = 2f64.powi(m as i32);
    let log_p: f64 = (0..outside).map(|j| (-(j as f64) / pool).ln_1p()).sum();
    Ok(log_p.exp())
}

/// Union bound on the probability that a fixed m-vertex graph occurs in
/// G(n, 1/2) at all: `C(n,m) / |Gamma_m|` with `|Gamma_m| ~ 2^C(m,2) / m!`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HitProbBound {
    /// log10 of the bound, unclamped.
    pub log10_bound: f64,
    /// The bound reached or passed 1, carrying no information.
    pub vacuous: bool,
}

pub fn subgraph_hit_prob(n: u64, m: u64) -> HitProbBound {
    assert!(m <= n, "need m <= n");
    let log10_binom: f64 = (1..=m)
        .map(|i| (((n - m + i) as f64) / i as f64).log10())
        .sum();
    let log10_classes = (m * (m - 1) / 2) as f64 * 2f64.log10()
        - (2..=m).map(|i| (i as f64).log10()).sum::<f64>();
    let log10_bound = log10_binom - log10_classes;
    HitProbBound {
        log10_bound,
        vacuous: log10_bound >= 0.0,
    }
}

/// Report of a reconstruction round-trip campaign.
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub probes: usize,
    pub master_seed: u64,
    pub anchors_found: u64,
    pub reconstructed: u64,
    pub records: Vec<TrialRecord>,
}

/// Per trial: sample G(n, 1/2), probe for a stable anchor of order
/// `ceil(3 log2 n) - 2`, build the bundle, reconstruct, and demand
/// isomorphism with the host. A reconstruction mismatch is a hard error:
/// a stable certificate makes the round trip a guarantee, so disagreement
/// means a bug, never bad luck.
pub fn roundtrip_experiment(
    n: usize,
    trials: usize,
    probes: usize,
    master_seed: u64,
) -> Result<RoundtripReport, ExperimentError> {
    let m = MRule::ThreeLog2Minus2.resolve(n);
    if m == 0 || m + 2 >= n {
        return Err(ExperimentError::RoundtripDomain { n, m });
    }
    assert!(trials >= 1 && probes >= 1);

    let results: Vec<Result<TrialRecord, ExperimentError>> = run_trials(trials, |t| {
        let seed = derive_seed(master_seed, t as u64);
        let start = Instant::now();
        let g = Graph::random(n, seed);
        let outcome = find_stable_anchor(&g, m, probes, derive_seed(seed, 1));
        let mut record = TrialRecord {
            experiment: "recon-roundtrip",
            n,
            m,
            trial: t,
            seed,
            asymmetric: false,
            anchor: false,
            stable: false,
            reconstructed: None,
            ms: 0,
        };
        if let SearchOutcome::Found { certificate, .. } = outcome {
            record.asymmetric = certificate.anchor_asymmetric();
            record.anchor = true;
            record.stable = true;
            let bundle = build_bundle(&g, certificate.anchor_set()).map_err(|source| {
                ExperimentError::ReconstructionFailed {
                    trial: t,
                    seed,
                    source,
                }
            })?;
            let rebuilt = reconstruct(&bundle).map_err(|source| {
                ExperimentError::ReconstructionFailed {
                    trial: t,
                    seed,
                    source,
                }
            })?;
            if !crate::iso::are_isomorphic(&g, &rebuilt) {
                return Err(ExperimentError::ReconstructionMismatch { trial: t, seed });
            }
            record.reconstructed = Some(true);
        }
        record.ms = start.elapsed().as_millis() as u64;
        Ok(record)
    });

    let mut report = RoundtripReport {
        n,
        m,
        trials: trials as u64,
        probes,
        master_seed,
        anchors_found: 0,
        reconstructed: 0,
        records: Vec::with_capacity(trials),
    };
    for res in results {
        let record = res?;
        report.anchors_found += u64::from(record.anchor);
        report.reconstructed += u64::from(record.reconstructed == Some(true));
        report.records.push(record);
    }
    debug_assert_eq!(report.anchors_found, report.reconstructed);
    Ok(report)
}
