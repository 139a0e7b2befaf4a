use motifgae::features::*;
use motifgae::generate::{generate_dataset, GeneratorParams, PatternRng};
use motifgae::{DiGraph, PatternLabel};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn undirected(n: usize, edges: &[(usize, usize)]) -> DiGraph {
    DiGraph::from_edges(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)])).unwrap()
}

/// All-pairs distances and shortest-path counts by repeated relaxation.
struct AllPairs {
    dist: Vec<Vec<Option<usize>>>,
    count: Vec<Vec<f64>>,
}

fn all_pairs(g: &DiGraph) -> AllPairs {
    let n = g.node_count();
    let mut dist = vec![vec![None; n]; n];
    let mut count = vec![vec![0.0; n]; n];
    for s in 0..n {
        dist[s][s] = Some(0);
        count[s][s] = 1.0;
        for d in 0..n {
            for u in 0..n {
                if dist[s][u] != Some(d) {
                    continue;
                }
                for v in g.successors(u) {
                    if dist[s][v].is_none() {
                        dist[s][v] = Some(d + 1);
                    }
                    if dist[s][v] == Some(d + 1) {
                        count[s][v] += count[s][u];
                    }
                }
            }
        }
    }
    AllPairs { dist, count }
}

/// Closeness and harmonic from distances `d(v, u)` (incoming) or `d(u, v)` (outgoing).
fn oracle_closeness_harmonic(ap: &AllPairs, incoming: bool) -> (Vec<f64>, Vec<f64>) {
    let n = ap.dist.len();
    let mut c = vec![0.0; n];
    let mut h = vec![0.0; n];
    for u in 0..n {
        let ds: Vec<usize> = (0..n)
            .filter(|&v| v != u)
            .filter_map(|v| if incoming { ap.dist[v][u] } else { ap.dist[u][v] })
            .collect();
        if !ds.is_empty() {
            let r = ds.len() as f64;
            c[u] = (r / (n - 1) as f64) * (r / ds.iter().sum::<usize>() as f64);
            h[u] = ds.iter().map(|&d| 1.0 / d as f64).sum();
        }
    }
    (c, h)
}

fn oracle_betweenness(ap: &AllPairs) -> Vec<f64> {
    let n = ap.dist.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let mut b = vec![0.0; n];
    for (v, bv) in b.iter_mut().enumerate() {
        for s in (0..n).filter(|&s| s != v) {
            for t in (0..n).filter(|&t| t != v && t != s) {
                if let (Some(st), Some(sv), Some(vt)) = (ap.dist[s][t], ap.dist[s][v], ap.dist[v][t]) {
                    if sv + vt == st {
                        *bv += ap.count[s][v] * ap.count[v][t] / ap.count[s][t];
                    }
                }
            }
        }
        *bv /= ((n - 1) * (n - 2)) as f64;
    }
    b
}

fn assert_close(a: &[f64], b: &[f64], what: &str) {
    assert_eq!(a.len(), b.len());
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() < TOL, "{what}[{i}]: {x} vs {y}");
    }
}

/// Empirical standard deviation of the return time to `target` over a long walk.
fn monte_carlo_return_std(g: &DiGraph, target: usize, steps: usize, seed: u64) -> f64 {
    let adj = g.undirected_adjacency();
    let mut rng = PatternRng::new(seed);
    let mut at = target;
    let mut since = 0usize;
    let (mut n, mut sum, mut sq) = (0.0, 0.0, 0.0);
    for _ in 0..steps {
        let nbrs = &adj[at];
        at = nbrs[rng.int_inclusive(0, nbrs.len() - 1)];
        since += 1;
        if at == target {
            let t = since as f64;
            n += 1.0;
            sum += t;
            sq += t * t;
            since = 0;
        }
    }
    let mean = sum / n;
    (sq / n - mean * mean).sqrt()
}

fn random_connected(n: usize, extra: usize, seed: u64) -> DiGraph {
    let mut rng = PatternRng::new(seed);
    let mut g = DiGraph::new(n);
    for v in 1..n {
        let u = rng.int_inclusive(0, v - 1);
        g.add_edge(u, v).unwrap();
    }
    for _ in 0..extra {
        let (u, v) = (rng.int_inclusive(0, n - 1), rng.int_inclusive(0, n - 1));
        if u != v {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

#[test]
fn second_order_matches_random_walk() {
    let k3 = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
    let c4 = undirected(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let r8 = random_connected(8, 6, 17);
    for (name, g) in [("K3", &k3), ("C4", &c4), ("random8", &r8)] {
        let exact = second_order(g).unwrap();
        for (u, &want) in exact.iter().enumerate() {
            let got = monte_carlo_return_std(g, u, 1_000_000, 100 + u as u64);
            assert!(((got - want) / want).abs() < 0.02, "{name} node {u}: walk {got}, exact {want}");
        }
    }
    assert!(second_order(&k3).unwrap().iter().all(|&x| (x - 2f64.sqrt()).abs() < TOL));
}

#[test]
fn path_oracles_agree_on_generator_samples() {
    let params = GeneratorParams::default();
    for label in PatternLabel::ALL {
        for s in generate_dataset(label, 20, 3, &params).unwrap() {
            let g = &s.graph;
            let ap = all_pairs(g);
            let (c_in, h_in) = oracle_closeness_harmonic(&ap, true);
            assert_close(&closeness(g), &c_in, "closeness");
            assert_close(&harmonic(g), &h_in, "harmonic");
            assert_close(&betweenness(g), &oracle_betweenness(&ap), "betweenness");
        }
    }
}

#[test]
fn no_nan_sweep() {
    let params = GeneratorParams::default();
    let mut total = 0;
    for (i, label) in PatternLabel::ALL.into_iter().enumerate() {
        let count = if i < 4 { 1_429 } else { 1_428 };
        for s in generate_dataset(label, count, 50_000, &params).unwrap() {
            let fm = compute_features(&s.graph).unwrap();
            assert!(fm.values.iter().all(|x| x.is_finite() && (0.0..=1.0).contains(x)), "{}", s.id);
            total += 1;
        }
    }
    assert_eq!(total, 10_000);
}

fn digraph() -> impl Strategy<Value = DiGraph> {
    (2usize..10).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            DiGraph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap()
        })
    })
}

fn graph_and_perm() -> impl Strategy<Value = (DiGraph, Vec<usize>)> {
    digraph().prop_flat_map(|g| {
        let perm = Just((0..g.node_count()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), perm)
    })
}

proptest! {
    #[test]
    fn raw_features_are_permutation_equivariant((g, perm) in graph_and_perm()) {
        let base = raw_features(&g).unwrap();
        let moved = raw_features(&g.permuted(&perm).unwrap()).unwrap();
        for u in 0..g.node_count() {
            for j in 0..FEATURE_COUNT {
                prop_assert!((base[(u, j)] - moved[(perm[u], j)]).abs() < 1e-8, "{} node {}", COLUMN_ORDER[j], u);
            }
        }
    }

    #[test]
    fn reversal_gives_outgoing_variants(g in digraph()) {
        let ap = all_pairs(&g);
        let (c_out, h_out) = oracle_closeness_harmonic(&ap, false);
        let r = g.reversed();
        for (u, (&want_c, &want_h)) in c_out.iter().zip(&h_out).enumerate() {
            prop_assert!((closeness(&r)[u] - want_c).abs() < TOL);
            prop_assert!((harmonic(&r)[u] - want_h).abs() < TOL);
        }
        let (b, br) = (betweenness(&g), betweenness(&r));
        for u in 0..g.node_count() {
            prop_assert!((b[u] - br[u]).abs() < TOL);
        }
    }

    #[test]
    fn laplacian_bounds(g in digraph()) {
        let lc = laplacian_centrality(&g);
        prop_assert!(lc.iter().all(|x| (-TOL..=1.0 + TOL).contains(x)));
        if g.edge_count() > 0 {
            prop_assert!(lc.iter().sum::<f64>() >= 1.0 - TOL);
        }
    }

    #[test]
    fn normalized_entries_in_unit_interval(g in digraph()) {
        let fm = compute_features(&g).unwrap();
        prop_assert!(fm.values.iter().all(|x| x.is_finite() && (0.0..=1.0).contains(x)));
        for (j, &(lo, hi)) in fm.ranges.iter().enumerate() {
            prop_assert!(lo <= hi, "{}", COLUMN_ORDER[j]);
        }
    }
}
