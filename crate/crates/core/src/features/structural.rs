//! Neighborhood measures: Laplacian centrality, Burt's constraint, reciprocity.

use std::collections::HashMap;

use crate::graph::DiGraph;

/// Relative drop in Laplacian energy `Σd² + Σd` when a node is deleted from
/// the undirected closure.
pub fn laplacian_centrality(g: &DiGraph) -> Vec<f64> {
    let adj = g.undirected_adjacency();
    let deg: Vec<f64> = adj.iter().map(|a| a.len() as f64).collect();
    let energy: f64 = deg.iter().map(|d| d * d + d).sum();
    if energy == 0.0 {
        return vec![0.0; deg.len()];
    }
    // Removing v drops its own term and lowers each neighbor's degree by one:
    // (d² + d) - ((d-1)² + (d-1)) = 2d.
    adj.iter()
        .enumerate()
        .map(|(v, nbrs)| {
            let drop = deg[v] * deg[v] + deg[v] + nbrs.iter().map(|&u| 2.0 * deg[u]).sum::<f64>();
            drop / energy
        })
        .collect()
}

/// Burt's constraint over the union of in- and out-neighbors with tie weight
/// `a_ij + a_ji`. Nodes without neighbors score 0.
pub fn burt_constraint(g: &DiGraph) -> Vec<f64> {
    let n = g.node_count();
    let adj = g.undirected_adjacency();
    let tie = |i: usize, j: usize| g.has_edge(i, j) as u32 as f64 + g.has_edge(j, i) as u32 as f64;
    let proportions: Vec<HashMap<usize, f64>> = (0..n)
        .map(|i| {
            let total: f64 = adj[i].iter().map(|&k| tie(i, k)).sum();
            adj[i].iter().map(|&j| (j, tie(i, j) / total)).collect()
        })
        .collect();
    let p = |i: usize, j: usize| proportions[i].get(&j).copied().unwrap_or(0.0);

    (0..n)
        .map(|i| {
            adj[i]
                .iter()
                .map(|&j| {
                    let indirect: f64 = adj[i].iter().filter(|&&q| q != j).map(|&q| p(i, q) * p(q, j)).sum();
                    let local = p(i, j) + indirect;
                    local * local
                })
                .sum()
        })
        .collect()
}

/// Share of a node's incident directed edges whose reverse edge also exists.
pub fn node_reciprocity(g: &DiGraph) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| {
            let incident = g.in_degree(u) + g.out_degree(u);
            if incident == 0 {
                return 0.0;
            }
            let mutual = g.successors(u).filter(|&v| g.has_edge(v, u)).count();
            (2 * mutual) as f64 / incident as f64
        })
        .collect()
}
