//! Simple directed graphs and the pattern labels attached to generated samples.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple directed graph over dense node indices `0..node_count`.
///
/// No self-loops and no parallel edges. Adjacency is kept in ordered sets so
/// that edge iteration order is a pure function of the edge set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiGraph {
    succ: Vec<BTreeSet<usize>>,
    pred: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl DiGraph {
    pub fn new(node_count: usize) -> Self {
        DiGraph {
            succ: vec![BTreeSet::new(); node_count],
            pred: vec![BTreeSet::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops and bad indices.
    /// Duplicate pairs collapse.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = DiGraph::new(node_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Appends a fresh isolated node and returns its index.
    pub fn add_node(&mut self) -> usize {
        self.succ.push(BTreeSet::new());
        self.pred.push(BTreeSet::new());
        self.succ.len() - 1
    }

    /// Inserts `src -> dst`. Returns `Ok(false)` when the edge already existed.
    pub fn add_edge(&mut self, src: usize, dst: usize) -> Result<bool> {
        let n = self.node_count();
        for index in [src, dst] {
            if index >= n {
                return Err(Error::NodeOutOfRange { index, node_count: n });
            }
        }
        if src == dst {
            return Err(Error::SelfLoop(src));
        }
        let inserted = self.succ[src].insert(dst);
        if inserted {
            self.pred[dst].insert(src);
            self.edge_count += 1;
        }
        Ok(inserted)
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.succ.get(src).is_some_and(|s| s.contains(&dst))
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[u].iter().copied()
    }

    pub fn predecessors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.pred[u].iter().copied()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.pred[u].len()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.succ[u].len()
    }

    /// Edges in lexicographic `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn degree_vectors(&self) -> (Vec<usize>, Vec<usize>) {
        let ins = self.pred.iter().map(BTreeSet::len).collect();
        let outs = self.succ.iter().map(BTreeSet::len).collect();
        (ins, outs)
    }

    /// Neighbors of the underlying undirected simple graph, sorted.
    pub fn undirected_neighbors(&self, u: usize) -> Vec<usize> {
        self.succ[u].union(&self.pred[u]).copied().collect()
    }

    /// Sorted undirected adjacency lists for every node.
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.node_count()).map(|u| self.undirected_neighbors(u)).collect()
    }

    /// Every edge reversed.
    pub fn reversed(&self) -> DiGraph {
        DiGraph {
            succ: self.pred.clone(),
            pred: self.succ.clone(),
            edge_count: self.edge_count,
        }
    }

    /// Relabels node `u` as `perm[u]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DiGraph> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::Dimension {
                op: "permuted",
                detail: format!("permutation of length {} for {} nodes", perm.len(), n),
            });
        }
        DiGraph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Subgraph induced by `nodes`; node `nodes[i]` becomes index `i`.
    pub fn induced(&self, nodes: &[usize]) -> Result<DiGraph> {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            index[u] = i;
        }
        let mut g = DiGraph::new(nodes.len());
        for &u in nodes {
            for v in self.successors(u) {
                if index[v] != usize::MAX {
                    g.add_edge(index[u], index[v])?;
                }
            }
        }
        Ok(g)
    }
}

/// The seven transaction motifs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternLabel {
    Collector,
    Sink,
    Collusion,
    ScatterGather,
    GatherScatter,
    Cyclic,
    Branching,
}

/// How far from a focal account one has to look to see the motif.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternCategory {
    SingleStep,
    TwoStep,
    MultipleStep,
}

impl PatternLabel {
    pub const ALL: [PatternLabel; 7] = [
        PatternLabel::Collector,
        PatternLabel::Sink,
        PatternLabel::Collusion,
        PatternLabel::ScatterGather,
        PatternLabel::GatherScatter,
        PatternLabel::Cyclic,
        PatternLabel::Branching,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternLabel::Collector => "collector",
            PatternLabel::Sink => "sink",
            PatternLabel::Collusion => "collusion",
            PatternLabel::ScatterGather => "scatter-gather",
            PatternLabel::GatherScatter => "gather-scatter",
            PatternLabel::Cyclic => "cyclic",
            PatternLabel::Branching => "branching",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn category(self) -> PatternCategory {
        match self {
            PatternLabel::Collector | PatternLabel::Sink | PatternLabel::Collusion => {
                PatternCategory::SingleStep
            }
            PatternLabel::ScatterGather | PatternLabel::GatherScatter => PatternCategory::TwoStep,
            PatternLabel::Cyclic | PatternLabel::Branching => PatternCategory::MultipleStep,
        }
    }

    pub fn valid_names() -> String {
        PatternLabel::ALL.map(PatternLabel::as_str).join(", ")
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternLabel::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                Error::param(
                    "pattern",
                    format!("unknown pattern `{s}`; valid names: {}", PatternLabel::valid_names()),
                )
            })
    }
}

/// A generated (or ingested) sample: graph, label and provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub id: String,
    pub graph: DiGraph,
    pub label: PatternLabel,
    pub seed: u64,
    /// Structural anchors, e.g. the center of a star or the X/Y pair of a scatter-gather.
    pub focal_nodes: Vec<usize>,
}

impl LabeledGraph {
    pub fn new(graph: DiGraph, label: PatternLabel, seed: u64, focal_nodes: Vec<usize>) -> Result<Self> {
        let id = format!("{label}-{seed}");
        Self::with_id(id, graph, label, seed, focal_nodes)
    }

    pub fn with_id(
        id: String,
        graph: DiGraph,
        label: PatternLabel,
        seed: u64,
        focal_nodes: Vec<usize>,
    ) -> Result<Self> {
        if focal_nodes.is_empty() {
            return Err(Error::Empty("focal node list"));
        }
        if let Some(&bad) = focal_nodes.iter().find(|&&f| f >= graph.node_count()) {
            return Err(Error::NodeOutOfRange {
                index: bad,
                node_count: graph.node_count(),
            });
        }
        Ok(LabeledGraph {
            id,
            graph,
            label,
            seed,
            focal_nodes,
        })
    }
}
