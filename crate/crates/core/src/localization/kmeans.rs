//! K-Means style clustering of the observations with graph-distance centers.
//!
//! Each restart draws `m` distinct centers from the candidate domain, then
//! alternates assignment (every observation joins its nearest center, ties to
//! the lowest id) and update (each cluster picks a new center by the chosen
//! rule, scanning the whole domain). A restart stops when the center set stops
//! changing, revisits an earlier set, or runs out of iterations.
//!
//! For the Jordan-center rule the update is guarded so the (eccentricity,
//! total) score never increases: each cluster first proposes the node with the
//! smallest (max, sum) distance to its members. These proposals are taken only
//! if every cluster's maximum drops below the current eccentricity. Otherwise
//! each cluster takes the node with the smallest sum among those whose maximum
//! stays within the current eccentricity, which the current center satisfies.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Hops, UNREACHABLE};

use super::{DistanceTable, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentroidRule {
    /// Minimize (max distance, sum of distances) to the cluster's observations.
    JordanCenter,
    /// Minimize the sum of distances.
    DistanceCentroid,
    /// Maximize the sum of reciprocal distances, excluding the node itself.
    ClosenessCentroid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            restarts: 100,
            max_iters: 32,
        }
    }
}

/// One restart's result.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRun {
    /// Local ids, ascending.
    pub centers: Vec<usize>,
    pub score: Score,
    /// Rule objective of the final assignment: summed distance for
    /// `DistanceCentroid`, summed closeness for `ClosenessCentroid`, the
    /// eccentricity for `JordanCenter`.
    pub objective: f64,
    /// Center updates performed.
    pub iterations: usize,
    /// Score of every center set the restart evaluated, in order.
    pub trace: Vec<Score>,
}

impl KMeansRun {
    pub fn is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1] <= w[0])
    }

    /// Orders runs best-first under `rule`'s restart selection criterion.
    fn rank(&self, other: &KMeansRun, rule: CentroidRule) -> Ordering {
        let primary = match rule {
            CentroidRule::JordanCenter => Ordering::Equal,
            CentroidRule::DistanceCentroid => self.objective.total_cmp(&other.objective),
            CentroidRule::ClosenessCentroid => other.objective.total_cmp(&self.objective),
        };
        primary
            .then(self.score.cmp(&other.score))
            .then_with(|| self.centers.cmp(&other.centers))
    }
}

struct Assignment {
    /// Index into the center list for every observation row.
    cluster: Vec<usize>,
    score: Score,
    objective: f64,
}

fn reciprocal(d: Hops) -> f64 {
    if d == 0 || d == UNREACHABLE {
        0.0
    } else {
        1.0 / d as f64
    }
}

fn assign(table: &DistanceTable, centers: &[usize], rule: CentroidRule) -> Assignment {
    let rows = table.rows();
    let mut cluster = vec![0; rows];
    let mut ecc = 0;
    let mut total = 0u64;
    let mut closeness = 0.0;
    for (row, slot) in cluster.iter_mut().enumerate() {
        let mut best = (UNREACHABLE, usize::MAX);
        let mut best_j = 0;
        for (j, &c) in centers.iter().enumerate() {
            let key = (table.get(row, c), c);
            if key < best {
                best = key;
                best_j = j;
            }
        }
        *slot = best_j;
        ecc = ecc.max(best.0);
        total = total.saturating_add(best.0 as u64);
        closeness += reciprocal(best.0);
    }
    let score = Score {
        eccentricity: ecc,
        total,
    };
    let objective = match rule {
        CentroidRule::JordanCenter => ecc as f64,
        CentroidRule::DistanceCentroid => total as f64,
        CentroidRule::ClosenessCentroid => closeness,
    };
    Assignment {
        cluster,
        score,
        objective,
    }
}

/// Per-cluster statistics of one domain node against each cluster's members.
struct ClusterStats {
    max: Vec<Hops>,
    sum: Vec<u64>,
    closeness: Vec<f64>,
}

impl ClusterStats {
    fn new(k: usize) -> Self {
        Self {
            max: vec![0; k],
            sum: vec![0; k],
            closeness: vec![0.0; k],
        }
    }

    fn fill(&mut self, column: &[Hops], cluster: &[usize], rule: CentroidRule) {
        self.max.fill(0);
        self.sum.fill(0);
        match rule {
            CentroidRule::ClosenessCentroid => {
                self.closeness.fill(0.0);
                for (&d, &c) in column.iter().zip(cluster) {
                    self.closeness[c] += reciprocal(d);
                }
            }
            _ => {
                for (&d, &c) in column.iter().zip(cluster) {
                    self.max[c] = self.max[c].max(d);
                    self.sum[c] = self.sum[c].saturating_add(d as u64);
                }
            }
        }
    }
}

fn update<R: Rng + ?Sized>(
    table: &DistanceTable,
    domain: &[usize],
    centers: &[usize],
    assignment: &Assignment,
    rule: CentroidRule,
    rng: &mut R,
) -> Vec<usize> {
    let k = centers.len();
    let mut members = vec![0usize; k];
    for &c in &assignment.cluster {
        members[c] += 1;
    }
    let ecc = assignment.score.eccentricity;

    // Best key per cluster; the trailing usize is the node id for tie-breaks.
    let mut free: Vec<(Hops, u64, usize)> = vec![(UNREACHABLE, u64::MAX, usize::MAX); k];
    let mut capped: Vec<(Hops, u64, usize)> = vec![(UNREACHABLE, u64::MAX, usize::MAX); k];
    let mut by_sum: Vec<(u64, usize)> = vec![(u64::MAX, usize::MAX); k];
    let mut by_closeness: Vec<(f64, usize)> = vec![(f64::NEG_INFINITY, usize::MAX); k];

    let mut stats = ClusterStats::new(k);
    for &v in domain {
        stats.fill(table.column(v), &assignment.cluster, rule);
        for c in 0..k {
            if members[c] == 0 {
                continue;
            }
            match rule {
                CentroidRule::JordanCenter => {
                    let key = (stats.max[c], stats.sum[c], v);
                    if key < free[c] {
                        free[c] = key;
                    }
                    let key = (stats.max[c].max(ecc), stats.sum[c], v);
                    if key < capped[c] {
                        capped[c] = key;
                    }
                }
                CentroidRule::DistanceCentroid => {
                    if (stats.sum[c], v) < by_sum[c] {
                        by_sum[c] = (stats.sum[c], v);
                    }
                }
                CentroidRule::ClosenessCentroid => {
                    // Domain is scanned in ascending order, so strict `>`
                    // keeps the lowest id among equal closeness values.
                    if stats.closeness[c] > by_closeness[c].0 {
                        by_closeness[c] = (stats.closeness[c], v);
                    }
                }
            }
        }
    }

    let proposals: Vec<Option<usize>> = (0..k)
        .map(|c| {
            if members[c] == 0 {
                return None;
            }
            Some(match rule {
                CentroidRule::JordanCenter => {
                    let all_drop = (0..k)
                        .filter(|&j| members[j] > 0)
                        .all(|j| free[j].0 < ecc);
                    if all_drop {
                        free[c].2
                    } else {
                        capped[c].2
                    }
                }
                CentroidRule::DistanceCentroid => by_sum[c].1,
                CentroidRule::ClosenessCentroid => by_closeness[c].1,
            })
        })
        .collect();

    // Empty clusters and duplicate proposals are re-seeded with random
    // domain nodes not already in the new set.
    let mut next: Vec<usize> = Vec::with_capacity(k);
    for p in proposals.into_iter().flatten() {
        if !next.contains(&p) {
            next.push(p);
        }
    }
    while next.len() < k {
        let unused: Vec<usize> = domain.iter().copied().filter(|v| !next.contains(v)).collect();
        next.push(unused[rng.random_range(0..unused.len())]);
    }
    next.sort_unstable();
    next
}

/// Runs one restart from `initial` (distinct domain nodes).
pub fn kmeans_from<R: Rng + ?Sized>(
    table: &DistanceTable,
    domain: &[usize],
    initial: &[usize],
    rule: CentroidRule,
    max_iters: usize,
    rng: &mut R,
) -> KMeansRun {
    let mut centers = initial.to_vec();
    centers.sort_unstable();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(centers.clone());
    let mut current = assign(table, &centers, rule);
    let mut trace = vec![current.score];
    let mut iterations = 0;
    while iterations < max_iters {
        let next = update(table, domain, &centers, &current, rule, rng);
        iterations += 1;
        if next == centers || !seen.insert(next.clone()) {
            break;
        }
        centers = next;
        current = assign(table, &centers, rule);
        trace.push(current.score);
    }
    KMeansRun {
        centers,
        score: current.score,
        objective: current.objective,
        iterations,
        trace,
    }
}

/// Best of `options.restarts` random restarts under `rule`'s selection
/// criterion, plus every restart's run. `None` if the domain has fewer than
/// `m` nodes.
pub fn kmeans_search<R: Rng + ?Sized>(
    table: &DistanceTable,
    domain: &[usize],
    m: usize,
    rule: CentroidRule,
    options: KMeansOptions,
    rng: &mut R,
) -> Option<(KMeansRun, Vec<KMeansRun>)> {
    if m == 0 || domain.len() < m || options.restarts == 0 {
        return None;
    }
    let runs: Vec<KMeansRun> = (0..options.restarts)
        .map(|_| {
            let initial: Vec<usize> = sample(rng, domain.len(), m)
                .into_iter()
                .map(|i| domain[i])
                .collect();
            kmeans_from(table, domain, &initial, rule, options.max_iters.max(1), rng)
        })
        .collect();
    let best = runs
        .iter()
        .min_by(|a, b| a.rank(b, rule))
        .cloned()
        .expect("at least one restart");
    Some((best, runs))
}
