use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use super::{BuildStats, Graph, GraphError, NodeId};

/// A graph read from an edge list together with the original ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[v]` is the id used in the file for compacted node `v`.
    pub original_ids: Vec<u64>,
    pub stats: BuildStats,
}

impl LoadedGraph {
    /// Compacted id for an id as written in the source file.
    pub fn compact_id(&self, original: u64) -> Option<NodeId> {
        // Loading is rare and ids are few; a linear scan avoids keeping a map.
        self.original_ids.iter().position(|&id| id == original)
    }
}

/// Parses a whitespace-separated edge list. Lines starting with `#` or `%`
/// and blank lines are skipped. Ids are compacted to `0..n` in order of first
/// appearance.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph, GraphError> {
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut original_ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |raw: u64| -> NodeId {
        *ids.entry(raw).or_insert_with(|| {
            original_ids.push(raw);
            original_ids.len() - 1
        })
    };
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64, GraphError> {
            let token = tokens.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                message: "expected two node ids".into(),
            })?;
            token.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("invalid node id {token:?}"),
            })
        };
        let (a, b) = (next_id()?, next_id()?);
        if tokens.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                message: "expected exactly two node ids".into(),
            });
        }
        edges.push((intern(a), intern(b)));
    }
    let (graph, stats) = Graph::from_edges_with_stats(original_ids.len(), edges);
    Ok(LoadedGraph {
        graph,
        original_ids,
        stats,
    })
}

/// Writes `g` in the same format `load_edge_list` reads, one `u v` per line.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
