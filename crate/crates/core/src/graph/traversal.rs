use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{Graph, GraphError, Hops, NodeId, NodeSet, UNREACHABLE};

/// Breadth-first search result: hop distances plus the parent pointer each
/// node was discovered through.
#[derive(Debug, Clone)]
pub struct BfsTree {
    pub source: NodeId,
    pub dist: Vec<Hops>,
    /// `None` for the source and for unreachable nodes.
    pub parent: Vec<Option<NodeId>>,
}

impl BfsTree {
    /// Nodes from the source to `target`, inclusive, or `None` if unreachable.
    pub fn path_to(&self, target: NodeId) -> Option<Vec<NodeId>> {
        if self.dist[target] == UNREACHABLE {
            return None;
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Hop distances from `source` to every node; `UNREACHABLE` where no path exists.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Result<Vec<Hops>, GraphError> {
    g.check_node(source)?;
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// BFS with parent pointers. Neighbors are expanded in ascending id order and
/// a node keeps the first parent that reaches it, so among equal-length paths
/// the one through the earliest-dequeued, lowest-id nodes wins.
pub fn bfs_tree(g: &Graph, source: NodeId) -> Result<BfsTree, GraphError> {
    g.check_node(source)?;
    let n = g.node_count();
    let mut dist = vec![UNREACHABLE; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Ok(BfsTree {
        source,
        dist,
        parent,
    })
}

/// A minimum-hop path from `u` to `v` (both endpoints included), or `None`
/// when `v` is unreachable from `u`.
pub fn shortest_path(g: &Graph, u: NodeId, v: NodeId) -> Result<Option<Vec<NodeId>>, GraphError> {
    g.check_node(v)?;
    Ok(bfs_tree(g, u)?.path_to(v))
}

/// Connected components, each as a sorted node set, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<NodeSet> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        components.push(members.into_iter().collect());
    }
    components
}

/// Precomputed single-source distance rows, keyed by source node.
pub trait DistanceRows {
    fn row(&self, source: NodeId) -> Option<&[Hops]>;
}

impl DistanceRows for HashMap<NodeId, Vec<Hops>> {
    fn row(&self, source: NodeId) -> Option<&[Hops]> {
        self.get(&source).map(Vec::as_slice)
    }
}

impl DistanceRows for BTreeMap<NodeId, Vec<Hops>> {
    fn row(&self, source: NodeId) -> Option<&[Hops]> {
        self.get(&source).map(Vec::as_slice)
    }
}

/// All-pairs table indexed by source.
impl DistanceRows for [Vec<Hops>] {
    fn row(&self, source: NodeId) -> Option<&[Hops]> {
        self.get(source).map(Vec::as_slice)
    }
}

impl DistanceRows for Vec<Vec<Hops>> {
    fn row(&self, source: NodeId) -> Option<&[Hops]> {
        self.as_slice().row(source)
    }
}

/// `min_{u in set} d(v, u)`. Members without a row of their own are resolved
/// through the row of `v` (distances are symmetric). Returns `UNREACHABLE` if
/// no member is reachable or a distance cannot be resolved.
pub fn distance_to_set<R>(rows: &R, set: &NodeSet, v: NodeId) -> Result<Hops, GraphError>
where
    R: DistanceRows + ?Sized,
{
    if set.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let own = rows.row(v);
    Ok(set
        .iter()
        .map(|u| match rows.row(u) {
            Some(row) => row.get(v).copied().unwrap_or(UNREACHABLE),
            None => own
                .and_then(|r| r.get(u).copied())
                .unwrap_or(UNREACHABLE),
        })
        .min()
        .unwrap_or(UNREACHABLE))
}
