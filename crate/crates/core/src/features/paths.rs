//! Shortest-path centralities on the directed graph (unweighted BFS).

use std::collections::VecDeque;

use crate::graph::DiGraph;

/// BFS distances *to* `target`, i.e. `d(v, target)` for every `v`, following
/// edges backwards. Unreachable nodes get `None`.
fn distances_to(g: &DiGraph, target: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[target] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for v in g.predecessors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Incoming closeness with reachability scaling: `(r/(n-1)) * (r / Σ d(v,u))`
/// over the `r` nodes that reach `u`.
pub fn closeness(g: &DiGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .map(|u| {
            let dist = distances_to(g, u);
            let (reach, total) = dist
                .iter()
                .enumerate()
                .filter(|&(v, _)| v != u)
                .filter_map(|(_, d)| *d)
                .fold((0usize, 0usize), |(r, t), d| (r + 1, t + d));
            if reach == 0 {
                0.0
            } else {
                let r = reach as f64;
                (r / (n - 1) as f64) * (r / total as f64)
            }
        })
        .collect()
}

/// Sum of reciprocal incoming distances; unreachable pairs contribute nothing.
pub fn harmonic(g: &DiGraph) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| {
            distances_to(g, u)
                .iter()
                .enumerate()
                .filter(|&(v, _)| v != u)
                .filter_map(|(_, d)| d.map(|d| 1.0 / d as f64))
                .sum()
        })
        .collect()
}

/// Brandes betweenness over ordered pairs, normalized by `(n-1)(n-2)`.
pub fn betweenness(g: &DiGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    if n < 3 {
        return score;
    }
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::new();

    for s in 0..n {
        stack.clear();
        preds.iter_mut().for_each(Vec::clear);
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for w in g.successors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64;
    score.iter_mut().for_each(|x| *x /= norm);
    score
}
