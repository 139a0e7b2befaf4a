use motifgae::gae::*;
use motifgae::generate::PatternRng;
use motifgae::DiGraph;
use proptest::prelude::*;

fn random_graph(n: usize, p: f64, seed: u64) -> DiGraph {
    let mut rng = PatternRng::new(seed);
    let mut g = DiGraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.bernoulli(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn gradients_match_finite_differences() {
    for kind in EncoderKind::ALL {
        for seed in 0..10 {
            let gt = GraphTensors::from_graph(&random_graph(8, 0.25, 1_000 + seed)).unwrap();
            let model = init_model(kind, Dims::default(), seed).unwrap();
            for c in finite_difference_check(&model, &gt, 1e-5).unwrap() {
                assert!(c.max_rel_error < 1e-4, "{kind} seed {seed} {}: {}", c.name, c.max_rel_error);
            }
        }
    }
}

#[test]
fn loss_matches_naive_pair_sum() {
    let g = DiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let a = adjacency(&g);
    let z = Tensor2::from_row_slice(3, 2, &[0.3, -1.2, 0.8, 0.4, -0.5, 0.9]);
    let r = Tensor2::from_row_slice(2, 2, &[1.1, -0.3, 0.6, 0.2]);
    let logits = decode(&z, &r).unwrap();

    let mut naive = 0.0;
    let w = 4.0 / 2.0;
    for u in 0..3 {
        for v in 0..3 {
            if u == v {
                continue;
            }
            let mut l = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    l += z[(u, i)] * r[(i, j)] * z[(v, j)];
                }
            }
            let prob = 1.0 / (1.0 + (-l).exp());
            naive += if a[(u, v)] == 1.0 { -w * prob.ln() } else { -(1.0 - prob).ln() };
        }
    }
    naive /= 6.0;
    let report = reconstruction_loss(&logits, &a).unwrap();
    assert!((report.value - naive).abs() < 1e-12, "{} vs {naive}", report.value);
}

#[test]
fn gcn_examples() {
    let x = Tensor2::from_row_slice(1, 3, &[0.2, 0.0, 0.7]);
    let (out, _) = gcn_forward(&Tensor2::identity(1, 1), &x, &Tensor2::identity(3, 3), true).unwrap();
    assert_eq!(out, x);

    let k2 = DiGraph::from_edges(2, [(0, 1)]).unwrap();
    let h = Tensor2::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
    let (out, _) = gcn_forward(&normalize_adjacency(&k2), &h, &Tensor2::identity(2, 2), true).unwrap();
    let want = Tensor2::from_row_slice(2, 2, &[0.5, 1.5, 0.5, 1.5]);
    assert!((out - want).abs().max() < 1e-12);

    let (zero, _) = gcn_forward(&normalize_adjacency(&k2), &Tensor2::zeros(2, 2), &h, true).unwrap();
    assert!(zero.iter().all(|&v| v == 0.0));
}

#[test]
fn sage_examples() {
    let k2 = DiGraph::from_edges(2, [(1, 0)]).unwrap();
    let h = Tensor2::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    // W = I stacked on I picks out h_v + mean.
    let w = Tensor2::from_fn(4, 2, |i, j| if i % 2 == j { 1.0 } else { 0.0 });
    let (out, _) = sage_forward(&mean_aggregator(&k2), &h, &w, true).unwrap();
    assert_eq!(out, Tensor2::from_row_slice(2, 2, &[4.0, 6.0, 4.0, 6.0]));

    let lonely = DiGraph::new(1);
    let x = Tensor2::from_row_slice(1, 2, &[0.5, -1.0]);
    let (out, _) = sage_forward(&mean_aggregator(&lonely), &x, &w, true).unwrap();
    assert_eq!(out, Tensor2::from_row_slice(1, 2, &[0.5, 0.0]));

    let star = DiGraph::from_edges(4, [(1, 0), (2, 0), (3, 0)]).unwrap();
    let h = Tensor2::from_row_slice(4, 2, &[9.0, 9.0, 0.25, 0.5, 0.25, 0.5, 0.25, 0.5]);
    let agg = mean_aggregator(&star) * &h;
    assert_eq!(agg.row(0).iter().copied().collect::<Vec<_>>(), vec![0.25, 0.5]);
}

#[test]
fn gat_examples() {
    let g = random_graph(7, 0.3, 4);
    let gt = GraphTensors::from_graph(&g).unwrap();
    let w = Tensor2::from_fn(9, 4, |i, j| ((i * 4 + j) as f64 * 0.37).sin());
    let a = Tensor2::from_fn(8, 1, |i, _| (i as f64 * 1.3).cos());

    let same = Tensor2::from_element(7, 9, 0.4);
    let (_, cache) = gat_forward(&gt.attention_scope, &same, &w, &a, true).unwrap();
    let att = cache.attention_matrix();
    for (v, scope) in gt.attention_scope.iter().enumerate() {
        for &u in scope {
            assert!((att[(v, u)] - 1.0 / scope.len() as f64).abs() < 1e-12);
        }
    }

    let lonely = DiGraph::new(1);
    let lt = GraphTensors::new(&lonely, Tensor2::from_element(1, 9, 0.5));
    let (out, _) = gat_forward(&lt.attention_scope, &lt.features, &w, &a, true).unwrap();
    let expected = (&lt.features * &w).map(|x| x.max(0.0));
    assert!((out - expected).abs().max() < 1e-15);
}

fn digraph() -> impl Strategy<Value = DiGraph> {
    (2usize..10).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 1..3 * n).prop_map(move |pairs| {
            DiGraph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn attention_rows_sum_to_one(g in digraph(), seed in 0u64..1000) {
        let gt = GraphTensors::from_graph(&g).unwrap();
        let model = init_model(EncoderKind::Gat, Dims::default(), seed).unwrap();
        let l1 = &model.params.layer1;
        let (_, cache) = gat_forward(&gt.attention_scope, &gt.features, &l1.weight, l1.attention.as_ref().unwrap(), true).unwrap();
        for row in cache.attention_matrix().row_iter() {
            prop_assert!((row.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn encoders_are_permutation_equivariant(
        (g, perm) in digraph().prop_flat_map(|g| {
            let p = Just((0..g.node_count()).collect::<Vec<_>>()).prop_shuffle();
            (Just(g), p)
        }),
        seed in 0u64..1000,
    ) {
        let gt = GraphTensors::from_graph(&g).unwrap();
        let pt = GraphTensors::from_graph(&g.permuted(&perm).unwrap()).unwrap();
        for kind in EncoderKind::ALL {
            let model = init_model(kind, Dims::default(), seed).unwrap();
            let z = model.encode(&gt).unwrap();
            let zp = model.encode(&pt).unwrap();
            for u in 0..g.node_count() {
                for k in 0..z.ncols() {
                    prop_assert!((z[(u, k)] - zp[(perm[u], k)]).abs() < 1e-9);
                }
            }
            let (l, lp) = (model.reconstruction_error(&gt).unwrap(), model.reconstruction_error(&pt).unwrap());
            prop_assert!((l - lp).abs() < 1e-9 * l.max(1.0));
        }
    }
}
