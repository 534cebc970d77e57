//! Source estimation from a snapshot.
//!
//! Every algorithm shares the same first step: keep the nodes with at least
//! `Y` observed neighbors, add the observations, and make the induced
//! subgraph connected. The second step differs: [`Algorithm::Ojc`] searches
//! every m-subset of the candidates exactly, the other three run restarted
//! K-Means with different center rules.

mod candidates;
mod kmeans;
mod ojc;
mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use web_time::Instant;

use crate::diffusion::Snapshot;
use crate::graph::{Graph, GraphError, NodeId, NodeSet};

pub use candidates::{select_candidates, CandidateResult};
pub use kmeans::{kmeans_from, kmeans_search, CentroidRule, KMeansOptions, KMeansRun};
pub use table::{build_distance_table, score_set, DistanceTable, Score};

#[derive(Debug, Error)]
pub enum LocalizationError {
    #[error("snapshot has no observations")]
    NoObservations,
    #[error("{candidates} candidates cannot hold {m} sources")]
    InsufficientCandidates { candidates: usize, m: usize },
    #[error("source count must be at least 1")]
    ZeroSources,
    #[error("restarts and max_iters must be at least 1")]
    InvalidKMeansOptions,
    #[error("node set must not be empty")]
    EmptySet,
    #[error("node {0} is not in the candidate subgraph")]
    NotInSubgraph(NodeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "OJC", alias = "ojc")]
    Ojc,
    #[serde(rename = "AJC", alias = "ajc")]
    Ajc,
    #[serde(rename = "DC", alias = "dc")]
    Dc,
    #[serde(rename = "CC", alias = "cc")]
    Cc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Ojc, Algorithm::Ajc, Algorithm::Dc, Algorithm::Cc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ojc => "OJC",
            Algorithm::Ajc => "AJC",
            Algorithm::Dc => "DC",
            Algorithm::Cc => "CC",
        }
    }

    /// Center rule for the K-Means algorithms, `None` for the exact search.
    pub fn rule(self) -> Option<CentroidRule> {
        match self {
            Algorithm::Ojc => None,
            Algorithm::Ajc => Some(CentroidRule::JordanCenter),
            Algorithm::Dc => Some(CentroidRule::DistanceCentroid),
            Algorithm::Cc => Some(CentroidRule::ClosenessCentroid),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected OJC, AJC, DC or CC)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalizeOptions {
    pub threshold: u32,
    pub m: usize,
    pub kmeans: KMeansOptions,
    /// Spread the exact search over the rayon pool.
    pub parallel: bool,
}

impl LocalizeOptions {
    pub fn new(threshold: u32, m: usize) -> Self {
        Self {
            threshold,
            m,
            kmeans: KMeansOptions::default(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    pub algorithm: Algorithm,
    /// Estimated sources, parent ids.
    pub sources: NodeSet,
    pub score: Score,
    pub threshold: u32,
    pub candidate_count: usize,
    pub subgraph_nodes: usize,
    pub observed_count: usize,
    pub patch_edges: usize,
    pub connected: bool,
    pub restarts_used: usize,
    pub iterations_used: usize,
    /// Restarts of a Jordan-center run whose score sequence went up at some
    /// step. Always zero for a correct implementation.
    pub score_increases: usize,
    pub wall_time: Duration,
}

/// Second-step search on an already built table. Returns the chosen local ids
/// together with the K-Means counters `(restarts, iterations, increases)`.
fn search<R: Rng + ?Sized>(
    table: &DistanceTable,
    domain: &[usize],
    algorithm: Algorithm,
    opts: &LocalizeOptions,
    rng: &mut R,
) -> Result<(Vec<usize>, Score, (usize, usize, usize)), LocalizationError> {
    let insufficient = || LocalizationError::InsufficientCandidates {
        candidates: domain.len(),
        m: opts.m,
    };
    match algorithm.rule() {
        None => {
            let cover = ojc::jordan_cover(table, domain, opts.m, opts.parallel).ok_or_else(insufficient)?;
            Ok((cover.members, cover.score, (0, 0, 0)))
        }
        Some(rule) => {
            let (best, runs) = kmeans_search(table, domain, opts.m, rule, opts.kmeans, rng).ok_or_else(insufficient)?;
            let iterations = runs.iter().map(|r| r.iterations).sum();
            let increases = if rule == CentroidRule::JordanCenter {
                runs.iter().filter(|r| !r.is_monotone()).count()
            } else {
                0
            };
            Ok((best.centers, best.score, (runs.len(), iterations, increases)))
        }
    }
}

/// Runs `algorithm` end to end. `selection_rng` drives the connectivity
/// repair of the candidate subgraph and `search_rng` the K-Means restarts, so
/// callers can give several algorithms the same subgraph.
pub fn localize_with<R1, R2>(
    g: &Graph,
    snapshot: &Snapshot,
    algorithm: Algorithm,
    opts: &LocalizeOptions,
    selection_rng: &mut R1,
    search_rng: &mut R2,
) -> Result<LocalizationResult, LocalizationError>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    if opts.m == 0 {
        return Err(LocalizationError::ZeroSources);
    }
    if algorithm.rule().is_some() && (opts.kmeans.restarts == 0 || opts.kmeans.max_iters == 0) {
        return Err(LocalizationError::InvalidKMeansOptions);
    }
    let start = Instant::now();
    let candidate = select_candidates(g, snapshot, opts.threshold, selection_rng)?;
    let domain = candidate.candidate_locals();
    if domain.len() < opts.m {
        return Err(LocalizationError::InsufficientCandidates {
            candidates: domain.len(),
            m: opts.m,
        });
    }
    let table = build_distance_table(&candidate, snapshot)?;
    let (members, score, (restarts_used, iterations_used, score_increases)) =
        search(&table, &domain, algorithm, opts, search_rng)?;
    let wall_time = start.elapsed();

    Ok(LocalizationResult {
        algorithm,
        sources: members.iter().map(|&l| table.parent_of(l)).collect(),
        score,
        threshold: opts.threshold,
        candidate_count: candidate.candidates.len(),
        subgraph_nodes: candidate.subgraph.node_count(),
        observed_count: snapshot.len(),
        patch_edges: candidate.patch_edge_count,
        connected: candidate.connected,
        restarts_used,
        iterations_used,
        score_increases,
        wall_time,
    })
}

pub fn localize<R: Rng + ?Sized>(
    g: &Graph,
    snapshot: &Snapshot,
    algorithm: Algorithm,
    opts: &LocalizeOptions,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    let mut selection = crate::seed::rng_from(rng.random());
    localize_with(g, snapshot, algorithm, opts, &mut selection, rng)
}

/// Exact m-Jordan cover over the candidates.
pub fn ojc<R: Rng + ?Sized>(
    g: &Graph,
    snapshot: &Snapshot,
    threshold: u32,
    m: usize,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    localize(g, snapshot, Algorithm::Ojc, &LocalizeOptions::new(threshold, m), rng)
}

fn kmeans_variant<R: Rng + ?Sized>(
    algorithm: Algorithm,
    g: &Graph,
    snapshot: &Snapshot,
    threshold: u32,
    m: usize,
    kmeans: KMeansOptions,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    let opts = LocalizeOptions {
        kmeans,
        ..LocalizeOptions::new(threshold, m)
    };
    localize(g, snapshot, algorithm, &opts, rng)
}

/// K-Means with Jordan-center updates over the candidates.
pub fn ajc<R: Rng + ?Sized>(
    g: &Graph,
    snapshot: &Snapshot,
    threshold: u32,
    m: usize,
    kmeans: KMeansOptions,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    kmeans_variant(Algorithm::Ajc, g, snapshot, threshold, m, kmeans, rng)
}

/// K-Means with distance-centroid updates.
pub fn dc<R: Rng + ?Sized>(
    g: &Graph,
    snapshot: &Snapshot,
    threshold: u32,
    m: usize,
    kmeans: KMeansOptions,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    kmeans_variant(Algorithm::Dc, g, snapshot, threshold, m, kmeans, rng)
}

/// K-Means with closeness-centroid updates.
pub fn cc<R: Rng + ?Sized>(
    g: &Graph,
    snapshot: &Snapshot,
    threshold: u32,
    m: usize,
    kmeans: KMeansOptions,
    rng: &mut R,
) -> Result<LocalizationResult, LocalizationError> {
    kmeans_variant(Algorithm::Cc, g, snapshot, threshold, m, kmeans, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::seed::rng_from;

    fn snap(ids: &[usize]) -> Snapshot {
        Snapshot::new(ids.iter().copied().collect())
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("ajc".parse::<Algorithm>().unwrap(), Algorithm::Ajc);
        assert!("xyz".parse::<Algorithm>().is_err());
    }

    #[test]
    fn ojc_on_path() {
        let r = ojc(&path(5), &snap(&[1, 3]), 1, 1, &mut rng_from(0)).unwrap();
        assert_eq!(r.sources, NodeSet::from([2]));
        assert_eq!(r.score, Score { eccentricity: 1, total: 2 });
        assert_eq!(r.candidate_count, 3);
        assert_eq!(r.subgraph_nodes, 5);
    }

    #[test]
    fn star_cover_is_the_observed_pair() {
        // With Y = 1 only the center qualifies, so the pair needs Y = 0.
        let g = star(4);
        let r = ojc(&g, &snap(&[1, 2]), 0, 2, &mut rng_from(0)).unwrap();
        assert_eq!(r.sources, NodeSet::from([1, 2]));
        assert_eq!(r.score, Score { eccentricity: 0, total: 0 });
        assert!(matches!(
            ojc(&g, &snap(&[1, 2]), 1, 2, &mut rng_from(0)),
            Err(LocalizationError::InsufficientCandidates { candidates: 1, m: 2 })
        ));
    }

    #[test]
    fn ajc_single_source_matches_ojc() {
        for seed in 0..20 {
            let mut rng = rng_from(seed);
            let g = crate::graph::generate_er(60, 0.08, &mut rng);
            let observed: Vec<usize> = (0..8).map(|_| rng.random_range(0..60)).collect();
            let s = snap(&observed);
            let exact = ojc(&g, &s, 1, 1, &mut rng_from(seed)).unwrap();
            let opts = KMeansOptions { restarts: 2, max_iters: 32 };
            let approx = ajc(&g, &s, 1, 1, opts, &mut rng_from(seed)).unwrap();
            assert_eq!(approx.sources, exact.sources, "seed {seed}");
            assert_eq!(approx.score, exact.score);
        }
    }

    #[test]
    fn baselines_on_small_graphs() {
        let opts = KMeansOptions { restarts: 4, max_iters: 8 };
        let r = dc(&path(5), &snap(&[0, 4]), 0, 1, opts, &mut rng_from(1)).unwrap();
        assert_eq!(r.sources, NodeSet::from([0]));
        let r = cc(&star(4), &snap(&[1, 2]), 0, 1, opts, &mut rng_from(1)).unwrap();
        assert_eq!(r.sources, NodeSet::from([0]));
        assert_eq!(r.restarts_used, 4);
    }

    #[test]
    fn rejects_bad_input() {
        let g = path(5);
        assert!(matches!(ojc(&g, &snap(&[]), 1, 1, &mut rng_from(0)), Err(LocalizationError::NoObservations)));
        assert!(matches!(ojc(&g, &snap(&[1]), 1, 0, &mut rng_from(0)), Err(LocalizationError::ZeroSources)));
        let zero = KMeansOptions { restarts: 0, max_iters: 1 };
        assert!(matches!(ajc(&g, &snap(&[1]), 1, 1, zero, &mut rng_from(0)), Err(LocalizationError::InvalidKMeansOptions)));
    }

    #[test]
    fn deterministic_given_seed() {
        let g = crate::graph::generate_er(80, 0.05, &mut rng_from(4));
        let s = snap(&[3, 10, 11, 40, 41, 70]);
        let opts = KMeansOptions { restarts: 1, max_iters: 1 };
        let a = ajc(&g, &s, 1, 2, opts, &mut rng_from(5)).unwrap();
        let b = ajc(&g, &s, 1, 2, opts, &mut rng_from(5)).unwrap();
        assert_eq!(a.sources, b.sources);
        assert_eq!(a.score, b.score);
    }
}
