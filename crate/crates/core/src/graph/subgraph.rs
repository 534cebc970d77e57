use super::{connected_components, Graph, NodeId, NodeSet};

/// A graph over a subset of a parent graph's nodes, with local ids `0..k`
/// assigned in ascending parent-id order.
///
/// Edges are either induced from the parent, or patch edges added to join
/// components. Patch edges are also parent edges; they are tracked separately
/// because the plain induced subgraph would not contain them.
#[derive(Debug, Clone)]
pub struct SubgraphView<'g> {
    parent: &'g Graph,
    local: Graph,
    to_parent: Vec<NodeId>,
    patch_edges: Vec<(usize, usize)>,
}

impl<'g> SubgraphView<'g> {
    /// The subgraph induced by `nodes`: all parent edges with both endpoints
    /// retained.
    pub fn induced(parent: &'g Graph, nodes: &NodeSet) -> Self {
        let to_parent = nodes.as_slice().to_vec();
        let edges = induced_edges(parent, &to_parent);
        Self {
            parent,
            local: Graph::from_edges(to_parent.len(), edges),
            to_parent,
            patch_edges: Vec::new(),
        }
    }

    /// Adds every node and consecutive-pair edge of each parent-id path.
    /// Edges already present are not counted as patch edges.
    pub fn with_paths(&self, paths: &[Vec<NodeId>]) -> Self {
        let nodes: NodeSet = self
            .to_parent
            .iter()
            .copied()
            .chain(paths.iter().flatten().copied())
            .collect();
        let to_parent = nodes.into_vec();
        let local_of = |p: NodeId| to_parent.binary_search(&p).expect("path node retained");

        let mut edges: Vec<(usize, usize)> = self
            .local
            .edges()
            .map(|(a, b)| (local_of(self.to_parent[a]), local_of(self.to_parent[b])))
            .collect();
        let mut patch: Vec<(usize, usize)> = self
            .patch_edges
            .iter()
            .map(|&(a, b)| (local_of(self.to_parent[a]), local_of(self.to_parent[b])))
            .collect();
        for path in paths {
            for w in path.windows(2) {
                debug_assert!(self.parent.has_edge(w[0], w[1]));
                let (a, b) = (local_of(w[0]), local_of(w[1]));
                let key = (a.min(b), a.max(b));
                let already = self
                    .local_of(w[0])
                    .zip(self.local_of(w[1]))
                    .is_some_and(|(x, y)| self.local.has_edge(x, y));
                if !already {
                    patch.push(key);
                }
                edges.push(key);
            }
        }
        patch.sort_unstable();
        patch.dedup();
        Self {
            parent: self.parent,
            local: Graph::from_edges(to_parent.len(), edges),
            to_parent,
            patch_edges: patch,
        }
    }

    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    pub fn local_graph(&self) -> &Graph {
        &self.local
    }

    pub fn node_count(&self) -> usize {
        self.to_parent.len()
    }

    /// Parent ids of the retained nodes, ascending; index = local id.
    pub fn to_parent(&self) -> &[NodeId] {
        &self.to_parent
    }

    pub fn parent_of(&self, local: usize) -> NodeId {
        self.to_parent[local]
    }

    pub fn local_of(&self, parent: NodeId) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }

    pub fn patch_edges(&self) -> &[(usize, usize)] {
        &self.patch_edges
    }

    pub fn is_patch_edge(&self, a: usize, b: usize) -> bool {
        self.patch_edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || connected_components(&self.local).len() == 1
    }
}

fn induced_edges(parent: &Graph, retained: &[NodeId]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (a, &u) in retained.iter().enumerate() {
        for &v in parent.neighbors(u) {
            if v > u {
                if let Ok(b) = retained.binary_search(&v) {
                    edges.push((a, b));
                }
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{bfs_distances, UNREACHABLE};
    use super::*;

    #[test]
    fn induced_cases() {
        let g = path(5);
        let sparse = SubgraphView::induced(&g, &NodeSet::from([0, 2, 4]));
        assert_eq!(sparse.node_count(), 3);
        assert_eq!(sparse.local_graph().edge_count(), 0);

        let middle = SubgraphView::induced(&g, &NodeSet::from([1, 2, 3]));
        assert_eq!(middle.local_graph().edge_count(), 2);
        assert_eq!(middle.to_parent(), &[1, 2, 3]);
        assert!(middle.local_graph().has_edge(0, 1));
        assert!(middle.local_graph().has_edge(1, 2));

        let all = SubgraphView::induced(&g, &(0..5).collect());
        assert_eq!(all.local_graph(), &g);
        for v in 0..5 {
            assert_eq!(all.local_of(v), Some(v));
            assert_eq!(all.parent_of(v), v);
        }
        assert!(all.patch_edges().is_empty());
    }

    #[test]
    fn maps_are_inverse() {
        let g = cycle(9);
        let view = SubgraphView::induced(&g, &NodeSet::from([1, 4, 5, 8]));
        for local in 0..view.node_count() {
            assert_eq!(view.local_of(view.parent_of(local)), Some(local));
        }
        assert_eq!(view.local_of(0), None);
    }

    #[test]
    fn paths_join_components() {
        let g = path(5);
        let view = SubgraphView::induced(&g, &NodeSet::from([0, 4]));
        assert!(!view.is_connected());
        let joined = view.with_paths(&[vec![0, 1, 2, 3, 4]]);
        assert!(joined.is_connected());
        assert_eq!(joined.node_count(), 5);
        assert_eq!(joined.patch_edges().len(), 4);
        assert!(joined.is_patch_edge(2, 1));
        let d = bfs_distances(joined.local_graph(), 0).unwrap();
        assert_eq!(d[4], 4);
    }

    #[test]
    fn existing_edges_are_not_patch_edges() {
        let g = path(5);
        let view = SubgraphView::induced(&g, &NodeSet::from([0, 1, 4]));
        let joined = view.with_paths(&[vec![1, 2, 3, 4]]);
        assert_eq!(joined.patch_edges().len(), 3);
        let again = joined.with_paths(&[vec![0, 1, 2]]);
        assert_eq!(again.patch_edges().len(), 3);
        assert_eq!(again.local_graph().edge_count(), 4);
    }

    #[test]
    fn view_distances_never_shrink() {
        let g = cycle(6);
        let view = SubgraphView::induced(&g, &NodeSet::from([0, 1, 2, 3]));
        let parent_d = bfs_distances(&g, 0).unwrap();
        let view_d = bfs_distances(view.local_graph(), 0).unwrap();
        for local in 0..view.node_count() {
            assert_ne!(view_d[local], UNREACHABLE);
            assert!(view_d[local] >= parent_d[view.parent_of(local)]);
        }
    }
}
