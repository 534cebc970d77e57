//! Accuracy of an estimated source set against the true one.

use std::fmt;

use thiserror::Error;

use crate::graph::{bfs_distances, Graph, GraphError, Hops, NodeSet, UNREACHABLE};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("source sets differ in size ({truth} vs {estimate})")]
    SizeMismatch { truth: usize, estimate: usize },
    #[error("source set must not be empty")]
    EmptySet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Mean hop distance under the best matching, or `Unreachable` when every
/// perfect matching needs a pair with no connecting path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorDistance {
    Finite(f64),
    Unreachable,
}

impl ErrorDistance {
    pub fn value(self) -> Option<f64> {
        match self {
            ErrorDistance::Finite(x) => Some(x),
            ErrorDistance::Unreachable => None,
        }
    }
}

impl fmt::Display for ErrorDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorDistance::Finite(x) => write!(f, "{x}"),
            ErrorDistance::Unreachable => f.write_str("unreachable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMetrics {
    pub error_distance: ErrorDistance,
    pub detection_rate: f64,
    pub exact_match: bool,
}

/// Largest size solved by trying every permutation.
pub const BRUTE_FORCE_LIMIT: usize = 6;

/// Minimum total cost of a perfect matching, trying all permutations.
pub fn assignment_brute_force(cost: &[Vec<u64>]) -> u64 {
    fn rec(cost: &[Vec<u64>], row: usize, used: &mut [bool], acc: u64, best: &mut u64) {
        if acc >= *best {
            return;
        }
        if row == cost.len() {
            *best = acc;
            return;
        }
        for col in 0..cost.len() {
            if !used[col] {
                used[col] = true;
                rec(cost, row + 1, used, acc.saturating_add(cost[row][col]), best);
                used[col] = false;
            }
        }
    }
    let mut best = u64::MAX;
    rec(cost, 0, &mut vec![false; cost.len()], 0, &mut best);
    if cost.is_empty() {
        0
    } else {
        best
    }
}

/// Minimum total cost of a perfect matching by the Hungarian method with
/// row and column potentials, O(m³).
pub fn assignment_hungarian(cost: &[Vec<u64>]) -> u64 {
    let n = cost.len();
    if n == 0 {
        return 0;
    }
    let c = |i: usize, j: usize| cost[i - 1][j - 1] as i128;
    // 1-based; column 0 is a virtual column holding the row being inserted.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut matched = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i128::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = i128::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = c(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[matched[j] - 1][j - 1]).sum()
}

/// Error distance from a square hop-distance matrix.
pub fn error_distance_from_matrix(dist: &[Vec<Hops>]) -> ErrorDistance {
    let m = dist.len();
    if m == 0 {
        return ErrorDistance::Finite(0.0);
    }
    // An unreachable pair costs more than any matching of reachable pairs, so
    // the optimum uses one only when no fully reachable matching exists.
    let finite_max = dist
        .iter()
        .flatten()
        .filter(|&&d| d != UNREACHABLE)
        .max()
        .copied()
        .unwrap_or(0) as u64;
    let penalty = finite_max * m as u64 + 1;
    let cost: Vec<Vec<u64>> = dist
        .iter()
        .map(|row| {
            row.iter()
                .map(|&d| if d == UNREACHABLE { penalty } else { d as u64 })
                .collect()
        })
        .collect();
    let total = if m <= BRUTE_FORCE_LIMIT {
        assignment_brute_force(&cost)
    } else {
        assignment_hungarian(&cost)
    };
    if total >= penalty {
        ErrorDistance::Unreachable
    } else {
        ErrorDistance::Finite(total as f64 / m as f64)
    }
}

/// Average hop distance between `truth` and `estimate` under the cheapest
/// one-to-one matching, with distances measured in `g`.
pub fn error_distance(
    g: &Graph,
    truth: &NodeSet,
    estimate: &NodeSet,
) -> Result<ErrorDistance, MetricsError> {
    if truth.len() != estimate.len() {
        return Err(MetricsError::SizeMismatch {
            truth: truth.len(),
            estimate: estimate.len(),
        });
    }
    if truth.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    estimate.check_within(g)?;
    let dist = truth
        .iter()
        .map(|s| {
            let row = bfs_distances(g, s)?;
            Ok(estimate.iter().map(|e| row[e]).collect())
        })
        .collect::<Result<Vec<Vec<Hops>>, GraphError>>()?;
    Ok(error_distance_from_matrix(&dist))
}

/// Fraction of true sources present in the estimate.
pub fn detection_rate(truth: &NodeSet, estimate: &NodeSet) -> Result<f64, MetricsError> {
    if truth.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    Ok(truth.intersection_len(estimate) as f64 / truth.len() as f64)
}

pub fn evaluate(g: &Graph, truth: &NodeSet, estimate: &NodeSet) -> Result<TrialMetrics, MetricsError> {
    Ok(TrialMetrics {
        error_distance: error_distance(g, truth, estimate)?,
        detection_rate: detection_rate(truth, estimate)?,
        exact_match: truth == estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn path_examples() {
        let g = path(5);
        let d = |a: &[usize], b: &[usize]| {
            error_distance(&g, &a.iter().copied().collect(), &b.iter().copied().collect()).unwrap()
        };
        assert_eq!(d(&[0, 4], &[0, 4]), ErrorDistance::Finite(0.0));
        assert_eq!(d(&[0, 4], &[1, 3]), ErrorDistance::Finite(1.0));
        assert_eq!(d(&[0], &[3]), ErrorDistance::Finite(3.0));
    }

    #[test]
    fn crossed_matching_is_more_expensive() {
        // 0<->1 and 4<->3 cost 2 in total, the crossed pairing costs 6.
        let dist = vec![vec![1, 3], vec![3, 1]];
        assert_eq!(error_distance_from_matrix(&dist), ErrorDistance::Finite(1.0));
    }

    #[test]
    fn unreachable_only_when_forced() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let a = NodeSet::from([0, 2]);
        assert_eq!(error_distance(&g, &a, &NodeSet::from([1, 3])).unwrap(), ErrorDistance::Finite(1.0));
        assert_eq!(
            error_distance(&g, &NodeSet::from([0]), &NodeSet::from([3])).unwrap(),
            ErrorDistance::Unreachable
        );
        assert_eq!(
            error_distance(&g, &NodeSet::from([0, 1]), &NodeSet::from([1, 3])).unwrap(),
            ErrorDistance::Unreachable
        );
        assert_eq!(ErrorDistance::Unreachable.to_string(), "unreachable");
    }

    #[test]
    fn detection_examples() {
        let s = NodeSet::from([0, 4]);
        assert_eq!(detection_rate(&s, &NodeSet::from([0, 3])).unwrap(), 0.5);
        assert_eq!(detection_rate(&s, &NodeSet::from([1, 3])).unwrap(), 0.0);
        assert_eq!(detection_rate(&s, &s).unwrap(), 1.0);
        assert!(detection_rate(&NodeSet::new(), &s).is_err());
    }

    #[test]
    fn size_mismatch() {
        let g = path(5);
        assert!(matches!(
            error_distance(&g, &NodeSet::from([0]), &NodeSet::from([1, 2])),
            Err(MetricsError::SizeMismatch { truth: 1, estimate: 2 })
        ));
    }

    #[test]
    fn hungarian_handles_larger_inputs() {
        // Anti-diagonal zeros force the reversed permutation.
        let n = 9;
        let cost: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| if i + j == n - 1 { 0 } else { 5 + (i * j) as u64 }).collect())
            .collect();
        assert_eq!(assignment_hungarian(&cost), 0);
        assert_eq!(assignment_brute_force(&cost), 0);
    }
}
