//! The nine structural node features fed to the autoencoders.

mod paths;
mod second_order;
mod structural;

use nalgebra::DMatrix;
use serde::Serialize;

pub use paths::{betweenness, closeness, harmonic};
pub use second_order::second_order;
pub use structural::{burt_constraint, laplacian_centrality, node_reciprocity};

use crate::error::{Error, Result};
use crate::graph::DiGraph;

pub const FEATURE_COUNT: usize = 9;

pub const COLUMN_ORDER: [&str; FEATURE_COUNT] = [
    "in_degree",
    "out_degree",
    "closeness",
    "betweenness",
    "harmonic",
    "second_order",
    "laplacian",
    "constraint",
    "reciprocity",
];

/// Tag stored in model files describing how features were produced.
pub const FEATURE_CONVENTION: &str = "structural9/per-graph-minmax";

/// Columns whose spread is within this fraction of their magnitude count as constant.
/// Solver round-off on regular graphs would otherwise be stretched to the full [0, 1] range.
pub const CONSTANT_COLUMN_TOL: f64 = 1e-9;

/// Per-node feature matrix, min-max normalized per column within one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub values: DMatrix<f64>,
    /// `(min, max)` of each raw column before normalization.
    pub ranges: [(f64, f64); FEATURE_COUNT],
}

impl FeatureMatrix {
    pub fn node_count(&self) -> usize {
        self.values.nrows()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// The nine raw columns, unnormalized, in [`COLUMN_ORDER`].
pub fn raw_features(g: &DiGraph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    let (ins, outs) = g.degree_vectors();
    let columns: [Vec<f64>; FEATURE_COUNT] = [
        ins.iter().map(|&d| d as f64).collect(),
        outs.iter().map(|&d| d as f64).collect(),
        closeness(g),
        betweenness(g),
        harmonic(g),
        second_order(g)?,
        laplacian_centrality(g),
        burt_constraint(g),
        node_reciprocity(g),
    ];
    Ok(DMatrix::from_fn(n, FEATURE_COUNT, |i, j| columns[j][i]))
}

pub fn compute_features(g: &DiGraph) -> Result<FeatureMatrix> {
    if g.node_count() == 0 {
        return Err(Error::Empty("graph"));
    }
    let mut values = raw_features(g)?;
    let mut ranges = [(0.0, 0.0); FEATURE_COUNT];
    for (j, range) in ranges.iter_mut().enumerate() {
        let mut col = values.column_mut(j);
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param(COLUMN_ORDER[j], "non-finite feature value"));
        }
        *range = (lo, hi);
        let span = hi - lo;
        if span > CONSTANT_COLUMN_TOL * lo.abs().max(hi.abs()).max(1.0) {
            col.apply(|x| *x = ((*x - lo) / span).clamp(0.0, 1.0));
        } else {
            col.fill(0.0);
        }
    }
    Ok(FeatureMatrix { values, ranges })
}

/// One line of the optional feature dump.
#[derive(Debug, Serialize)]
pub struct FeatureDump<'a> {
    pub graph_id: &'a str,
    pub columns: [&'static str; FEATURE_COUNT],
    pub rows: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn path3() -> DiGraph {
        DiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn in_star(n: usize) -> DiGraph {
        DiGraph::from_edges(n, (1..n).map(|i| (i, 0))).unwrap()
    }

    fn undirected(n: usize, edges: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_edges(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)])).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < TOL
    }

    #[test]
    fn closeness_examples() {
        assert!(close(closeness(&path3())[2], 2.0 / 3.0));
        assert_eq!(closeness(&DiGraph::new(1)), vec![0.0]);
        assert!(close(closeness(&in_star(5))[0], 1.0));
    }

    #[test]
    fn betweenness_examples() {
        assert!(close(betweenness(&path3())[1], 0.5));
        let tri = DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(betweenness(&tri).iter().all(|&b| close(b, 0.5)));
        let out_star = in_star(5).reversed();
        assert!(betweenness(&out_star).iter().all(|&b| b == 0.0));
    }

    #[test]
    fn harmonic_examples() {
        assert!(close(harmonic(&path3())[2], 1.5));
        assert_eq!(harmonic(&DiGraph::new(1)), vec![0.0]);
        let two = DiGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(harmonic(&two), vec![1.0, 1.0]);
    }

    #[test]
    fn second_order_examples() {
        let k3 = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(second_order(&k3).unwrap().iter().all(|&x| close(x, 2f64.sqrt())));
        let p = undirected(3, &[(0, 1), (1, 2)]);
        assert!(close(second_order(&p).unwrap()[1], 0.0));
        assert_eq!(second_order(&DiGraph::new(1)).unwrap(), vec![0.0]);
        // Direction is ignored.
        assert_eq!(second_order(&path3()).unwrap(), second_order(&p).unwrap());
    }

    #[test]
    fn laplacian_examples() {
        let star = undirected(4, &[(0, 1), (0, 2), (0, 3)]);
        let lc = laplacian_centrality(&star);
        assert!(close(lc[0], 1.0));
        assert!(close(lc[1], 4.0 / 9.0));
        assert_eq!(laplacian_centrality(&DiGraph::new(3)), vec![0.0; 3]);
    }

    #[test]
    fn constraint_examples() {
        let edge = DiGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(burt_constraint(&edge), vec![1.0, 1.0]);
        let tri = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(burt_constraint(&tri).iter().all(|&c| close(c, 1.125)));
        assert_eq!(burt_constraint(&DiGraph::new(1)), vec![0.0]);
    }

    #[test]
    fn reciprocity_examples() {
        let two = DiGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(node_reciprocity(&two), vec![1.0, 1.0]);
        assert!(node_reciprocity(&in_star(4)).iter().all(|&r| r == 0.0));
        let g = DiGraph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert!(close(node_reciprocity(&g)[1], 2.0 / 3.0));
    }

    #[test]
    fn collector_center_row() {
        let fm = compute_features(&in_star(5)).unwrap();
        let center = fm.values.row(0);
        assert_eq!(center[0], 1.0);
        assert_eq!(center[1], 0.0);
        assert_eq!(center[2], 1.0);
        assert_eq!(center[8], 0.0);
        assert_eq!(fm.ranges[0], (0.0, 4.0));
    }

    #[test]
    fn single_node_is_all_zero() {
        let fm = compute_features(&DiGraph::new(1)).unwrap();
        assert_eq!(fm.values.shape(), (1, FEATURE_COUNT));
        assert!(fm.values.iter().all(|&x| x == 0.0));
        assert!(compute_features(&DiGraph::new(0)).is_err());
    }

    #[test]
    fn round_off_spread_is_constant() {
        // Second-order centrality on this graph's underlying 5-cycle differs only in the last bit.
        let g = DiGraph::from_edges(5, [(1, 0), (1, 4), (2, 0), (2, 3), (4, 1), (4, 3)]).unwrap();
        let raw = raw_features(&g).unwrap();
        assert!((0..5).all(|u| (raw[(u, 5)] - 20f64.sqrt()).abs() < 1e-12));
        let fm = compute_features(&g).unwrap();
        assert!(fm.values.column(5).iter().all(|&x| x == 0.0));
    }
}
