//! Undirected visibility graphs keyed by time index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::series::TimeSeries;

/// Which visibility rule connects two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "hvg")]
    Horizontal,
    #[serde(rename = "nvg")]
    Natural,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::Horizontal, Criterion::Natural];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Horizontal => "hvg",
            Criterion::Natural => "nvg",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hvg" | "horizontal" => Ok(Criterion::Horizontal),
            "nvg" | "natural" => Ok(Criterion::Natural),
            other => Err(format!("unknown criterion `{other}` (expected hvg or nvg)")),
        }
    }
}

/// Simple undirected graph on point indices.
///
/// Nodes are kept sorted, each with a sorted neighbour list, so the
/// representation is canonical: two graphs are `==` exactly when they have
/// the same node set and the same edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGraph {
    nodes: Vec<i64>,
    // neighbours of nodes[i] are neighbors[offsets[i]..offsets[i + 1]]
    offsets: Vec<usize>,
    neighbors: Vec<i64>,
}

impl Default for VisibilityGraph {
    fn default() -> Self {
        Self {
            nodes: Vec::new(),
            offsets: vec![0],
            neighbors: Vec::new(),
        }
    }
}

impl VisibilityGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edgeless graph on the given nodes.
    pub fn with_nodes(nodes: impl IntoIterator<Item = i64>) -> Self {
        GraphBuilder::new(nodes).build()
    }

    /// Edgeless graph with one node per point of `series`.
    pub fn with_nodes_of(series: &TimeSeries) -> Self {
        Self::with_nodes(series.indices())
    }

    /// Graph on `nodes` plus every edge endpoint.
    pub fn from_edges(
        nodes: impl IntoIterator<Item = i64>,
        edges: impl IntoIterator<Item = (i64, i64)>,
    ) -> Self {
        let mut b = GraphBuilder::new(nodes);
        for (u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    fn slot(&self, index: i64) -> Option<usize> {
        self.nodes.binary_search(&index).ok()
    }

    fn adjacent(&self, slot: usize) -> &[i64] {
        &self.neighbors[self.offsets[slot]..self.offsets[slot + 1]]
    }

    pub fn contains_node(&self, index: i64) -> bool {
        self.slot(index).is_some()
    }

    pub fn contains_edge(&self, u: i64, v: i64) -> bool {
        self.slot(u)
            .is_some_and(|s| self.adjacent(s).binary_search(&v).is_ok())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = i64> + '_ {
        self.nodes.iter().copied()
    }

    /// Neighbours in ascending order; empty for unknown nodes.
    pub fn neighbors(&self, index: i64) -> &[i64] {
        self.slot(index).map_or(&[], |s| self.adjacent(s))
    }

    pub fn degree(&self, index: i64) -> usize {
        self.neighbors(index).len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.nodes.iter().enumerate().flat_map(move |(s, &u)| {
            let adj = self.adjacent(s);
            let after = adj.partition_point(|&v| v <= u);
            adj[after..].iter().map(move |&v| (u, v))
        })
    }

    /// True when every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &VisibilityGraph) -> bool {
        self.edges().all(|(u, v)| other.contains_edge(u, v))
    }
}

/// Collects edges and assembles the graph in one sort at the end.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: Vec<i64>,
    half_edges: Vec<(i64, i64)>,
}

impl GraphBuilder {
    pub fn new(nodes: impl IntoIterator<Item = i64>) -> Self {
        Self {
            nodes: nodes.into_iter().collect(),
            half_edges: Vec::new(),
        }
    }

    /// One node per point of `series`.
    pub fn for_series(series: &TimeSeries) -> Self {
        let mut b = Self::new(series.indices());
        b.half_edges.reserve(4 * series.len());
        b
    }

    /// Panics on a self-loop. Repeated edges are merged by [`GraphBuilder::build`].
    #[inline]
    pub fn add_edge(&mut self, u: i64, v: i64) {
        assert_ne!(u, v, "self-loop on node {u}");
        self.half_edges.push((u, v));
        self.half_edges.push((v, u));
    }

    pub fn build(self) -> VisibilityGraph {
        let GraphBuilder {
            mut nodes,
            mut half_edges,
        } = self;
        half_edges.sort_unstable();
        half_edges.dedup();
        nodes.extend(half_edges.iter().map(|e| e.0));
        nodes.sort_unstable();
        nodes.dedup();

        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        offsets.push(0);
        let mut at = 0;
        for &u in &nodes {
            while at < half_edges.len() && half_edges[at].0 == u {
                at += 1;
            }
            offsets.push(at);
        }
        VisibilityGraph {
            nodes,
            offsets,
            neighbors: half_edges.into_iter().map(|e| e.1).collect(),
        }
    }
}

/// Same node set and same edge set.
pub fn graph_equal(a: &VisibilityGraph, b: &VisibilityGraph) -> bool {
    a == b
}
