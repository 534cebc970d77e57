use rayon::prelude::*;

use crate::diffusion::Snapshot;
use crate::graph::{bfs_distances, Hops, NodeId, NodeSet, UNREACHABLE};

use super::{CandidateResult, LocalizationError};

/// Infection eccentricity of a node set, with total distance as tie-break.
///
/// Ordering is lexicographic: eccentricity, then total. Unreachable
/// observations contribute `UNREACHABLE` to both fields, so any set that
/// misses an observation ranks below every set that reaches all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score {
    pub eccentricity: Hops,
    pub total: u64,
}

impl Score {
    pub const WORST: Score = Score {
        eccentricity: UNREACHABLE,
        total: u64::MAX,
    };

    pub fn is_finite(&self) -> bool {
        self.eccentricity != UNREACHABLE
    }
}

/// Hop distances from every observed node to every subgraph node, measured
/// inside the candidate subgraph.
///
/// Stored node-major: the distances from all observations to one subgraph
/// node are contiguous, which is the access pattern of the cover search.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    observed: Vec<NodeId>,
    observed_local: Vec<usize>,
    to_parent: Vec<NodeId>,
    by_node: Vec<Hops>,
}

impl DistanceTable {
    /// One BFS inside `graph` per observed local id.
    pub fn from_rows(
        graph: &crate::graph::Graph,
        to_parent: Vec<NodeId>,
        observed_local: Vec<usize>,
    ) -> Self {
        let rows: Vec<Vec<Hops>> = observed_local
            .par_iter()
            .map(|&w| bfs_distances(graph, w).expect("observed node in subgraph"))
            .collect();
        let n = graph.node_count();
        let r = rows.len();
        let mut by_node = vec![UNREACHABLE; n * r];
        for (ri, row) in rows.iter().enumerate() {
            for (v, &d) in row.iter().enumerate() {
                by_node[v * r + ri] = d;
            }
        }
        Self {
            observed: observed_local.iter().map(|&w| to_parent[w]).collect(),
            observed_local,
            to_parent,
            by_node,
        }
    }

    /// Number of observed nodes (rows).
    pub fn rows(&self) -> usize {
        self.observed.len()
    }

    /// Number of subgraph nodes (columns).
    pub fn node_count(&self) -> usize {
        self.to_parent.len()
    }

    /// Observed nodes as parent ids, one per row.
    pub fn observed(&self) -> &[NodeId] {
        &self.observed
    }

    pub fn observed_local(&self) -> &[usize] {
        &self.observed_local
    }

    pub fn row_of(&self, observed_parent: NodeId) -> Option<usize> {
        self.observed.binary_search(&observed_parent).ok()
    }

    pub fn local_of(&self, parent: NodeId) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }

    pub fn parent_of(&self, local: usize) -> NodeId {
        self.to_parent[local]
    }

    /// Distance from observation `row` to subgraph node `local`.
    #[inline]
    pub fn get(&self, row: usize, local: usize) -> Hops {
        self.by_node[local * self.rows() + row]
    }

    /// Distances from every observation to subgraph node `local`.
    #[inline]
    pub fn column(&self, local: usize) -> &[Hops] {
        let r = self.rows();
        &self.by_node[local * r..(local + 1) * r]
    }

    /// Distances from observation `row` to every subgraph node.
    pub fn row(&self, row: usize) -> Vec<Hops> {
        (0..self.node_count()).map(|v| self.get(row, v)).collect()
    }

    /// Score of a set of local ids.
    pub fn score_locals(&self, set: &[usize]) -> Score {
        let mut ecc = 0;
        let mut total = 0u64;
        for row in 0..self.rows() {
            let d = set
                .iter()
                .map(|&v| self.get(row, v))
                .min()
                .unwrap_or(UNREACHABLE);
            ecc = ecc.max(d);
            total = total.saturating_add(d as u64);
        }
        Score {
            eccentricity: ecc,
            total,
        }
    }
}

/// Runs one BFS per observed node on the candidate subgraph.
pub fn build_distance_table(
    candidate: &CandidateResult<'_>,
    snapshot: &Snapshot,
) -> Result<DistanceTable, LocalizationError> {
    let view = &candidate.subgraph;
    let observed_local = snapshot
        .observed
        .iter()
        .map(|w| view.local_of(w).ok_or(LocalizationError::NotInSubgraph(w)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DistanceTable::from_rows(
        view.local_graph(),
        view.to_parent().to_vec(),
        observed_local,
    ))
}

/// Eccentricity and total distance of `set` (parent ids) with respect to the
/// observations in `table`.
pub fn score_set(table: &DistanceTable, set: &NodeSet) -> Result<Score, LocalizationError> {
    if set.is_empty() {
        return Err(LocalizationError::EmptySet);
    }
    let locals = set
        .iter()
        .map(|v| table.local_of(v).ok_or(LocalizationError::NotInSubgraph(v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(table.score_locals(&locals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::localization::select_candidates;
    use crate::seed::rng_from;

    fn path_table() -> DistanceTable {
        let g = path(5);
        let snap = Snapshot::new(NodeSet::from([1, 3]));
        let c = select_candidates(&g, &snap, 1, &mut rng_from(0)).unwrap();
        build_distance_table(&c, &snap).unwrap()
    }

    #[test]
    fn path_rows() {
        let t = path_table();
        assert_eq!(t.rows(), 2);
        assert_eq!(t.row(0), vec![1, 0, 1, 2, 3]);
        assert_eq!(t.row(1), vec![3, 2, 1, 0, 1]);
        assert_eq!(t.get(0, 1), 0);
        assert_eq!(t.get(1, 3), 0);
        assert_eq!(t.column(2), &[1, 1]);
    }

    #[test]
    fn path_scores() {
        let t = path_table();
        let score = |ids: &[usize]| score_set(&t, &ids.iter().copied().collect()).unwrap();
        assert_eq!(score(&[2]), Score { eccentricity: 1, total: 2 });
        assert_eq!(score(&[1, 3]), Score { eccentricity: 0, total: 0 });
        assert_eq!(score(&[0]), Score { eccentricity: 3, total: 4 });
        assert!(matches!(score_set(&t, &NodeSet::new()), Err(LocalizationError::EmptySet)));
    }

    #[test]
    fn singleton_observation() {
        let g = cycle(6);
        let snap = Snapshot::new(NodeSet::from([2]));
        let c = select_candidates(&g, &snap, 0, &mut rng_from(0)).unwrap();
        let t = build_distance_table(&c, &snap).unwrap();
        assert_eq!(t.row(0), bfs_distances(&g, 2).unwrap());
    }

    #[test]
    fn unreachable_ranks_last() {
        let g = crate::graph::Graph::from_edges(4, [(0, 1), (2, 3)]);
        let snap = Snapshot::new(NodeSet::from([0, 2]));
        let c = select_candidates(&g, &snap, 0, &mut rng_from(0)).unwrap();
        let t = build_distance_table(&c, &snap).unwrap();
        let one_side = score_set(&t, &NodeSet::from([1])).unwrap();
        let both = score_set(&t, &NodeSet::from([1, 3])).unwrap();
        assert!(!one_side.is_finite());
        assert_eq!(both, Score { eccentricity: 1, total: 2 });
        assert!(both < one_side);
    }

    #[test]
    fn score_order() {
        let a = Score { eccentricity: 1, total: 9 };
        let b = Score { eccentricity: 2, total: 0 };
        let c = Score { eccentricity: 1, total: 3 };
        assert!(a < b);
        assert!(c < a);
        assert!(b < Score::WORST);
    }
}
