//! Exact m-Jordan-cover search over the candidate set.
//!
//! Subsets are enumerated in lexicographic order of (ascending) local ids.
//! For each prefix the element-wise minimum distance vector is kept, so the
//! last element costs one pass over the observations. A subset is abandoned
//! as soon as its running maximum exceeds the incumbent eccentricity.
//! Observations the prefix leaves uncovered (distance above the incumbent)
//! are checked first, since any one of them can rule a subset out.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::graph::{Hops, UNREACHABLE};

use super::{DistanceTable, Score};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Cover {
    /// Local ids, ascending.
    pub members: Vec<usize>,
    pub score: Score,
}

fn pack(score: Score) -> u64 {
    ((score.eccentricity as u64) << 32) | score.total.min(u32::MAX as u64)
}

fn unpack(bits: u64) -> (Hops, u64) {
    ((bits >> 32) as Hops, bits & u32::MAX as u64)
}

struct Search<'a> {
    table: &'a DistanceTable,
    domain: &'a [usize],
    m: usize,
    /// Best score found by any partition, packed; only strict comparisons
    /// against it are valid because it may come from a later partition.
    shared: &'a AtomicU64,
}

impl Search<'_> {
    /// Enumerates every subset whose smallest domain index is `first`.
    fn run_partition(&self, first: usize, best: &mut Option<Cover>) {
        let rows = self.table.rows();
        if self.m == 1 {
            let nothing = vec![UNREACHABLE; rows];
            self.last_level(&nothing, &[], first, first + 1, best);
            return;
        }
        let mut chosen = Vec::with_capacity(self.m);
        let mut mins: Vec<Vec<Hops>> = vec![vec![UNREACHABLE; rows]; self.m];
        chosen.push(self.domain[first]);
        mins[0].copy_from_slice(self.table.column(self.domain[first]));
        self.descend(1, first + 1, &mut chosen, &mut mins, best);
    }

    fn descend(
        &self,
        depth: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        mins: &mut [Vec<Hops>],
        best: &mut Option<Cover>,
    ) {
        let remaining = self.m - depth;
        if remaining == 1 {
            let (prefix, _) = mins.split_at(depth);
            self.last_level(&prefix[depth - 1], chosen, start, self.domain.len(), best);
            return;
        }
        let stop = self.domain.len() + 1 - remaining;
        for i in start..stop {
            let v = self.domain[i];
            let (prev, rest) = mins.split_at_mut(depth);
            let cur = &mut rest[0];
            for ((c, &p), &d) in cur.iter_mut().zip(&prev[depth - 1]).zip(self.table.column(v)) {
                *c = p.min(d);
            }
            chosen.push(v);
            self.descend(depth + 1, i + 1, chosen, mins, best);
            chosen.pop();
        }
    }

    /// Tries every final element in `domain[start..end]` after `prefix`.
    fn last_level(
        &self,
        prefix_min: &[Hops],
        prefix: &[usize],
        start: usize,
        end: usize,
        best: &mut Option<Cover>,
    ) {
        let bound = |best: &Option<Cover>| -> (Hops, u64, Hops, u64) {
            let (se, st) = unpack(self.shared.load(Ordering::Relaxed));
            match best {
                Some(b) => (b.score.eccentricity, b.score.total, se, st),
                None => (UNREACHABLE, u64::MAX, se, st),
            }
        };
        let (le, _, se, _) = bound(best);
        let mut limit = le.min(se);
        let mut critical: Vec<usize> = (0..prefix_min.len())
            .filter(|&r| prefix_min[r] > limit)
            .collect();

        for i in start..end {
            let v = self.domain[i];
            let col = self.table.column(v);
            if critical.iter().any(|&r| col[r] > limit) {
                continue;
            }
            let mut ecc: Hops = 0;
            let mut total: u64 = 0;
            let mut pruned = false;
            for (&p, &d) in prefix_min.iter().zip(col) {
                let x = p.min(d);
                if x > limit {
                    pruned = true;
                    break;
                }
                ecc = ecc.max(x);
                total += x as u64;
            }
            if pruned {
                continue;
            }
            let (lbe, lbt, sbe, sbt) = bound(best);
            // Same-partition incumbents come earlier in lexicographic order,
            // so ties with them lose; ties with other partitions are resolved
            // when partitions are merged.
            if (ecc, total) >= (lbe, lbt) {
                continue;
            }
            if ecc > sbe || (ecc == sbe && total.min(u32::MAX as u64) > sbt) {
                continue;
            }
            let score = Score {
                eccentricity: ecc,
                total,
            };
            let mut members = prefix.to_vec();
            members.push(v);
            *best = Some(Cover { members, score });
            self.shared.fetch_min(pack(score), Ordering::Relaxed);

            let new_limit = ecc.min(unpack(self.shared.load(Ordering::Relaxed)).0);
            if new_limit < limit {
                limit = new_limit;
                critical = (0..prefix_min.len())
                    .filter(|&r| prefix_min[r] > limit)
                    .collect();
            }
        }
    }
}

/// Exact minimum-score `m`-subset of `domain` (local ids, ascending), ties
/// broken by the lexicographically smallest id tuple. `None` if the domain has
/// fewer than `m` nodes.
pub(crate) fn jordan_cover(
    table: &DistanceTable,
    domain: &[usize],
    m: usize,
    parallel: bool,
) -> Option<Cover> {
    if m == 0 || domain.len() < m {
        return None;
    }
    debug_assert!(domain.windows(2).all(|w| w[0] < w[1]));
    let shared = AtomicU64::new(u64::MAX);
    let search = Search {
        table,
        domain,
        m,
        shared: &shared,
    };
    let partitions = domain.len() + 1 - m;
    let result = if parallel {
        (0..partitions)
            .into_par_iter()
            .filter_map(|first| {
                let mut best = None;
                search.run_partition(first, &mut best);
                best
            })
            .min_by(|a, b| (a.score, &a.members).cmp(&(b.score, &b.members)))
    } else {
        let mut best = None;
        for first in 0..partitions {
            search.run_partition(first, &mut best);
        }
        best
    };
    // The first subset always beats the empty incumbent.
    Some(result.expect("non-empty domain yields a cover"))
}
