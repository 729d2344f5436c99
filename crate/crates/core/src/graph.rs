//! Immutable undirected graphs in compressed adjacency form.
//!
//! Nodes are dense `0..N` indices. Every graph also carries the external id of
//! each node (the integer that appeared in the input file) so that results can
//! be written back in terms of the caller's ids.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense node index in `0..num_nodes`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    external_ids: Vec<u64>,
    external_index: HashMap<u64, NodeId>,
}

/// A graph read from an edge list, with ingestion counters.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicate_edges: usize,
}

impl Graph {
    /// Builds a graph on `num_nodes` nodes. Edges are symmetrized and
    /// deduplicated, self-loops are dropped. External ids default to the
    /// dense indices.
    pub fn from_edges<I>(num_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let ids = (0..num_nodes as u64).collect();
        Self::build(ids, edges).map(|(g, _, _)| g)
    }

    /// Replaces the external id map. Ids must be distinct.
    pub fn with_external_ids(mut self, ids: Vec<u64>) -> Result<Self> {
        if ids.len() != self.num_nodes() {
            return Err(Error::InvalidConfig(format!(
                "{} external ids for {} nodes",
                ids.len(),
                self.num_nodes()
            )));
        }
        let index = index_ids(&ids)?;
        self.external_ids = ids;
        self.external_index = index;
        Ok(self)
    }

    fn build<I>(external_ids: Vec<u64>, edges: I) -> Result<(Self, usize, usize)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = external_ids.len();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut self_loops = 0;
        let mut raw = 0;
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, num_nodes: n });
                }
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            raw += 1;
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        let unique = neighbors.len() / 2;
        let external_index = index_ids(&external_ids)?;
        let graph = Graph {
            offsets,
            neighbors,
            external_ids,
            external_index,
        };
        Ok((graph, self_loops, raw - unique))
    }

    pub fn num_nodes(&self) -> usize {
        self.external_ids.len()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// Sorted neighbor list of `x`.
    pub fn neighbors(&self, x: NodeId) -> &[u32] {
        &self.neighbors[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn has_edge(&self, x: NodeId, y: NodeId) -> bool {
        self.neighbors(x).binary_search(&(y as u32)).is_ok()
    }

    /// `d_V`, the sum of all degrees (twice the edge count).
    pub fn total_degree(&self) -> usize {
        self.neighbors.len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn is_isolated(&self, x: NodeId) -> bool {
        self.degree(x) == 0
    }

    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        (0..self.num_nodes())
            .filter(|&x| self.is_isolated(x))
            .collect()
    }

    pub fn non_isolated_nodes(&self) -> Vec<NodeId> {
        (0..self.num_nodes())
            .filter(|&x| !self.is_isolated(x))
            .collect()
    }

    /// Sum of the degrees of the nodes in `set`.
    pub fn total_degree_of_set(&self, set: &[NodeId]) -> Result<usize> {
        set.iter().try_fold(0, |acc, &x| {
            if x >= self.num_nodes() {
                Err(Error::NodeOutOfRange {
                    node: x,
                    num_nodes: self.num_nodes(),
                })
            } else {
                Ok(acc + self.degree(x))
            }
        })
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn external_id(&self, x: NodeId) -> u64 {
        self.external_ids[x]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn node_of(&self, external: u64) -> Option<NodeId> {
        self.external_index.get(&external).copied()
    }

    /// Writes one line per undirected edge using external ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{}\t{}", self.external_ids[u], self.external_ids[v])?;
        }
        Ok(())
    }
}

fn index_ids(ids: &[u64]) -> Result<HashMap<u64, NodeId>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, &id) in ids.iter().enumerate() {
        if index.insert(id, i).is_some() {
            return Err(Error::InvalidConfig(format!("duplicate external id {id}")));
        }
    }
    Ok(index)
}

/// Reads a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` or `%` are skipped. External ids
/// are mapped to dense indices in ascending id order, so 1-indexed LFR files
/// map `i` to `i - 1`. Edges listed in both directions collapse to one.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid node id {tok:?}"),
            })
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    if pairs.is_empty() {
        return Err(Error::NoEdges);
    }

    let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |id: u64| ids.binary_search(&id).expect("id collected above");
    let edges: Vec<_> = pairs.iter().map(|&(a, b)| (dense(a), dense(b))).collect();
    let (graph, self_loops_dropped, duplicate_edges) = Graph::build(ids.clone(), edges)?;
    Ok(LoadedGraph {
        graph,
        self_loops_dropped,
        duplicate_edges,
    })
}
