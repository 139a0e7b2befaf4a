use super::params::Tensor2;
use crate::error::Result;
use crate::features::compute_features;
use crate::graph::DiGraph;

/// `D^(-1/2) (A_sym + I) D^(-1/2)` on the undirected closure.
pub fn normalize_adjacency(g: &DiGraph) -> Tensor2 {
    let adj = g.undirected_adjacency();
    let inv_sqrt: Vec<f64> = adj.iter().map(|a| 1.0 / ((a.len() + 1) as f64).sqrt()).collect();
    let mut m = Tensor2::zeros(adj.len(), adj.len());
    for (u, nbrs) in adj.iter().enumerate() {
        m[(u, u)] = inv_sqrt[u] * inv_sqrt[u];
        for &v in nbrs {
            m[(u, v)] = inv_sqrt[u] * inv_sqrt[v];
        }
    }
    m
}

/// Row-normalized undirected adjacency; isolated nodes get a zero row.
pub fn mean_aggregator(g: &DiGraph) -> Tensor2 {
    let adj = g.undirected_adjacency();
    let mut m = Tensor2::zeros(adj.len(), adj.len());
    for (u, nbrs) in adj.iter().enumerate() {
        let w = 1.0 / nbrs.len().max(1) as f64;
        for &v in nbrs {
            m[(u, v)] = w;
        }
    }
    m
}

/// Directed 0/1 adjacency matrix.
pub fn adjacency(g: &DiGraph) -> Tensor2 {
    let mut a = Tensor2::zeros(g.node_count(), g.node_count());
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
    }
    a
}

/// Everything the encoders and the loss need from one graph, computed once.
#[derive(Debug, Clone)]
pub struct GraphTensors {
    pub norm_adj: Tensor2,
    pub mean_agg: Tensor2,
    /// Undirected neighbors plus the node itself, sorted.
    pub attention_scope: Vec<Vec<usize>>,
    pub target: Tensor2,
    pub features: Tensor2,
}

impl GraphTensors {
    pub fn new(g: &DiGraph, features: Tensor2) -> Self {
        let attention_scope = (0..g.node_count())
            .map(|u| {
                let mut s = g.undirected_neighbors(u);
                let pos = s.binary_search(&u).unwrap_err();
                s.insert(pos, u);
                s
            })
            .collect();
        GraphTensors {
            norm_adj: normalize_adjacency(g),
            mean_agg: mean_aggregator(g),
            attention_scope,
            target: adjacency(g),
            features,
        }
    }

    /// Computes the normalized structural features and wraps the graph.
    pub fn from_graph(g: &DiGraph) -> Result<Self> {
        let fm = compute_features(g)?;
        Ok(GraphTensors::new(g, fm.values))
    }

    pub fn node_count(&self) -> usize {
        self.target.nrows()
    }
}
