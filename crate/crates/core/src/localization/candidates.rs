use rand::Rng;

use crate::diffusion::Snapshot;
use crate::graph::{bfs_tree, connected_components, Graph, NodeSet, SubgraphView};

use super::LocalizationError;

/// Output of candidate selection: the candidate set, the observations, and the
/// connected subgraph the search runs on.
#[derive(Debug, Clone)]
pub struct CandidateResult<'g> {
    /// Nodes with at least `threshold` observed neighbors (parent ids).
    pub candidates: NodeSet,
    /// Candidates plus observed nodes.
    pub extended: NodeSet,
    /// Subgraph induced by `extended`, plus any joining paths.
    pub subgraph: SubgraphView<'g>,
    pub threshold: u32,
    pub patch_edge_count: usize,
    /// False only if some components could not be joined in the parent graph.
    pub connected: bool,
}

impl CandidateResult<'_> {
    /// Local ids (in the subgraph) of the candidate nodes, ascending.
    pub fn candidate_locals(&self) -> Vec<usize> {
        self.candidates
            .iter()
            .map(|v| self.subgraph.local_of(v).expect("candidates are retained"))
            .collect()
    }

    pub fn check_invariants(&self, snapshot: &Snapshot) -> Result<(), String> {
        if !snapshot.observed.is_subset(&self.extended) {
            return Err("observed set not contained in extended candidates".into());
        }
        if !self.candidates.is_subset(&self.extended) {
            return Err("candidates not contained in extended candidates".into());
        }
        let retained: NodeSet = self.subgraph.to_parent().iter().copied().collect();
        if !self.extended.is_subset(&retained) {
            return Err("extended candidates missing from subgraph".into());
        }
        if self.connected != self.subgraph.is_connected() {
            return Err("connectivity flag disagrees with subgraph".into());
        }
        let parent = self.subgraph.parent();
        for (a, b) in self.subgraph.local_graph().edges() {
            if !parent.has_edge(self.subgraph.parent_of(a), self.subgraph.parent_of(b)) {
                return Err(format!("subgraph edge ({a}, {b}) is not a parent edge"));
            }
        }
        Ok(())
    }
}

/// Selects candidates with at least `threshold` observed neighbors and builds
/// the connected search subgraph.
///
/// When the induced subgraph is disconnected, one random representative is
/// taken per component and a random pivot among them is joined to every other
/// representative by a shortest path in `g`.
pub fn select_candidates<'g, R: Rng + ?Sized>(
    g: &'g Graph,
    snapshot: &Snapshot,
    threshold: u32,
    rng: &mut R,
) -> Result<CandidateResult<'g>, LocalizationError> {
    if snapshot.is_empty() {
        return Err(LocalizationError::NoObservations);
    }
    snapshot.observed.check_within(g)?;

    let candidates: NodeSet = if threshold == 0 {
        (0..g.node_count()).collect()
    } else {
        let mut counts = vec![0u32; g.node_count()];
        for w in snapshot.observed.iter() {
            for &v in g.neighbors(w) {
                counts[v] += 1;
            }
        }
        NodeSet::from_sorted_unchecked(
            (0..g.node_count())
                .filter(|&v| counts[v] >= threshold)
                .collect(),
        )
    };
    let extended = candidates.union(&snapshot.observed);
    let induced = SubgraphView::induced(g, &extended);

    let components = connected_components(induced.local_graph());
    let subgraph = if components.len() > 1 {
        let reps: Vec<_> = components
            .iter()
            .map(|c| induced.parent_of(c.as_slice()[rng.random_range(0..c.len())]))
            .collect();
        let pivot = reps[rng.random_range(0..reps.len())];
        let tree = bfs_tree(g, pivot)?;
        let paths: Vec<_> = reps
            .iter()
            .filter(|&&r| r != pivot)
            .filter_map(|&r| tree.path_to(r))
            .collect();
        induced.with_paths(&paths)
    } else {
        induced
    };

    let connected = subgraph.is_connected();
    Ok(CandidateResult {
        patch_edge_count: subgraph.patch_edges().len(),
        candidates,
        extended,
        subgraph,
        threshold,
        connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::seed::rng_from;

    fn snap(ids: &[usize]) -> Snapshot {
        Snapshot::new(ids.iter().copied().collect())
    }

    /// Brute-force candidate set: count observed neighbors pair by pair.
    fn oracle_candidates(g: &Graph, observed: &[usize], y: u32) -> NodeSet {
        (0..g.node_count())
            .filter(|&v| {
                let count = observed.iter().filter(|&&w| g.has_edge(v, w)).count();
                count as u32 >= y
            })
            .collect()
    }

    #[test]
    fn path_example() {
        let g = path(5);
        let c = select_candidates(&g, &snap(&[1, 3]), 1, &mut rng_from(0)).unwrap();
        assert_eq!(c.candidates, NodeSet::from([0, 2, 4]));
        assert_eq!(c.candidates, oracle_candidates(&g, &[1, 3], 1));
        assert_eq!(c.extended, NodeSet::from([0, 1, 2, 3, 4]));
        assert!(c.connected);
        assert_eq!(c.patch_edge_count, 0);
        assert_eq!(c.subgraph.local_graph().edge_count(), 4);
        c.check_invariants(&snap(&[1, 3])).unwrap();
    }

    #[test]
    fn zero_threshold_keeps_everything() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3)]);
        let c = select_candidates(&g, &snap(&[0]), 0, &mut rng_from(0)).unwrap();
        assert_eq!(c.candidates.len(), 6);
    }

    #[test]
    fn unjoinable_components_stay_separate() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let s = snap(&[0, 2]);
        let c = select_candidates(&g, &s, 1, &mut rng_from(0)).unwrap();
        assert_eq!(c.candidates, NodeSet::from([1, 3]));
        assert_eq!(c.extended, NodeSet::from([0, 1, 2, 3]));
        assert!(!c.connected);
        assert_eq!(c.patch_edge_count, 0);
        c.check_invariants(&s).unwrap();
    }

    #[test]
    fn components_joined_by_shortest_paths() {
        // Observations at both ends of a 7-node path; with y = 2 nothing
        // qualifies, so the two observed nodes must be joined through the middle.
        let g = path(7);
        let s = snap(&[0, 6]);
        for seed in 0..10 {
            let c = select_candidates(&g, &s, 2, &mut rng_from(seed)).unwrap();
            assert!(c.candidates.is_empty());
            assert!(c.connected);
            assert_eq!(c.subgraph.node_count(), 7);
            assert_eq!(c.patch_edge_count, 6);
            c.check_invariants(&s).unwrap();
        }
    }

    #[test]
    fn patch_edges_lie_on_shortest_paths() {
        let g = crate::graph::generate_er(120, 0.03, &mut rng_from(3));
        for seed in 0..20 {
            let mut rng = rng_from(seed);
            let observed: Vec<usize> = (0..8).map(|_| rng.random_range(0..120)).collect();
            let s = snap(&observed);
            let c = select_candidates(&g, &s, 2, &mut rng).unwrap();
            assert_eq!(c.candidates, oracle_candidates(&g, s.observed.as_slice(), 2));
            c.check_invariants(&s).unwrap();
            for &(a, b) in c.subgraph.patch_edges() {
                let (pa, pb) = (c.subgraph.parent_of(a), c.subgraph.parent_of(b));
                assert!(g.has_edge(pa, pb));
                assert!(!(c.extended.contains(pa) && c.extended.contains(pb)));
            }
            // Retained extras are exactly nodes on joining paths.
            let extra: Vec<_> = c
                .subgraph
                .to_parent()
                .iter()
                .filter(|v| !c.extended.contains(**v))
                .collect();
            if c.patch_edge_count == 0 {
                assert!(extra.is_empty());
            }
        }
    }

    #[test]
    fn empty_snapshot_is_an_error() {
        let g = path(3);
        assert!(matches!(
            select_candidates(&g, &Snapshot::default(), 1, &mut rng_from(0)),
            Err(LocalizationError::NoObservations)
        ));
    }
}
