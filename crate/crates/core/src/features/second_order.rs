//! Second-order centrality: spread of the return time of a simple random walk.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::DiGraph;

/// Connected components of the underlying undirected graph, each sorted.
fn weak_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Standard deviation of the return time to each node of a simple random walk
/// on the undirected closure, computed exactly per connected component.
///
/// With node `i` made absorbing and `Q` the walk restricted to the rest of the
/// component, first-passage moments satisfy `(I - Q) h = 1` and
/// `(I - Q) s = 2h - 1`. The return time is one step to a uniform neighbor `k`
/// followed by the passage from `k`. Singleton components score 0.
pub fn second_order(g: &DiGraph) -> Result<Vec<f64>> {
    let adj = g.undirected_adjacency();
    let mut out = vec![0.0; g.node_count()];
    for members in weak_components(&adj) {
        if members.len() < 2 {
            continue;
        }
        let m = members.len();
        let mut local = vec![usize::MAX; g.node_count()];
        for (k, &u) in members.iter().enumerate() {
            local[u] = k;
        }
        for (pos, &target) in members.iter().enumerate() {
            // Row/column index in the reduced system for every other member.
            let reduced = |k: usize| if k < pos { k } else { k - 1 };
            let mut system = DMatrix::<f64>::identity(m - 1, m - 1);
            for (k, &u) in members.iter().enumerate() {
                if k == pos {
                    continue;
                }
                let p = 1.0 / adj[u].len() as f64;
                for &v in &adj[u] {
                    let kv = local[v];
                    if kv != pos {
                        system[(reduced(k), reduced(kv))] -= p;
                    }
                }
            }
            let lu = system.lu();
            let h = lu
                .solve(&DVector::from_element(m - 1, 1.0))
                .ok_or(Error::Singular("second-order first-passage times"))?;
            let rhs = h.map(|x| 2.0 * x - 1.0);
            let s = lu
                .solve(&rhs)
                .ok_or(Error::Singular("second-order passage second moments"))?;

            let p = 1.0 / adj[target].len() as f64;
            let (mut mean_h, mut mean_s) = (0.0, 0.0);
            for &v in &adj[target] {
                let r = reduced(local[v]);
                mean_h += p * h[r];
                mean_s += p * s[r];
            }
            let first = 1.0 + mean_h;
            let second = 1.0 + 2.0 * mean_h + mean_s;
            out[target] = (second - first * first).max(0.0).sqrt();
        }
    }
    Ok(out)
}
