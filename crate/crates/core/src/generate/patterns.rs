//! One generator per motif. Each is a pure function of `(params, seed)`.
//!
//! Node 0 is always the first focal node. Noise nodes are appended after the
//! core structure, so a graph's first nodes are its motif skeleton.

use std::collections::VecDeque;

use super::params::GeneratorParams;
use super::rng::PatternRng;
use crate::graph::{DiGraph, LabeledGraph, PatternLabel};

/// Builder used by the generators; every edge it adds is between distinct
/// freshly-numbered nodes, so insertion can never fail.
struct Builder(DiGraph);

impl Builder {
    fn with_nodes(n: usize) -> Self {
        Builder(DiGraph::new(n))
    }

    fn node(&mut self) -> usize {
        self.0.add_node()
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.0.add_edge(u, v).expect("generator emitted an invalid edge");
    }

    fn finish(self, label: PatternLabel, seed: u64, focal: Vec<usize>) -> LabeledGraph {
        LabeledGraph::new(self.0, label, seed, focal).expect("generator focal nodes are valid")
    }
}

/// Star around node 0. Edges point into the center when `inward`, out of it otherwise;
/// the optional noise fan points the other way.
fn star(fan_range: (usize, usize), noise_prob: f64, inward: bool, seed: u64, label: PatternLabel) -> LabeledGraph {
    let mut rng = PatternRng::new(seed);
    let fan = rng.int_inclusive(fan_range.0, fan_range.1);
    let mut b = Builder::with_nodes(1);
    for _ in 0..fan {
        let leaf = b.node();
        if inward {
            b.edge(leaf, 0);
        } else {
            b.edge(0, leaf);
        }
    }
    if rng.bernoulli(noise_prob) {
        let noise = rng.int_inclusive(1, fan / 3);
        for _ in 0..noise {
            let leaf = b.node();
            if inward {
                b.edge(0, leaf);
            } else {
                b.edge(leaf, 0);
            }
        }
    }
    b.finish(label, seed, vec![0])
}

pub fn gen_collector(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.collector;
    star((p.in_range.lo, p.in_range.hi), p.noise_prob, true, seed, PatternLabel::Collector)
}

pub fn gen_sink(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.sink;
    star((p.out_range.lo, p.out_range.hi), p.noise_prob, false, seed, PatternLabel::Sink)
}

pub fn gen_collusion(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.collusion;
    let mut rng = PatternRng::new(seed);
    let n_in = if rng.bernoulli(p.two_input_prob) {
        2
    } else {
        rng.int_inclusive(p.multi_input_range.lo, p.multi_input_range.hi)
    };
    let n_out = rng.int_inclusive(p.out_range.lo, p.out_range.hi);

    let mut b = Builder::with_nodes(n_in + n_out);
    let inputs = 0..n_in;
    let outputs = n_in..n_in + n_out;
    for i in inputs.clone() {
        for o in outputs.clone() {
            b.edge(i, o);
        }
    }

    // One draw per side; the noise nodes then attach to uniformly chosen core nodes.
    if rng.bernoulli(p.noise_prob) {
        let count = rng.int_inclusive(p.noise_count_range.lo, p.noise_count_range.hi);
        for _ in 0..count {
            let target = outputs.start + rng.int_inclusive(0, n_out - 1);
            let x = b.node();
            b.edge(x, target);
        }
    }
    if rng.bernoulli(p.noise_prob) {
        let count = rng.int_inclusive(p.noise_count_range.lo, p.noise_count_range.hi);
        for _ in 0..count {
            let source = rng.int_inclusive(0, n_in - 1);
            let x = b.node();
            b.edge(source, x);
        }
    }
    b.finish(PatternLabel::Collusion, seed, (0..n_in + n_out).collect())
}

pub fn gen_scatter_gather(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.sg;
    let mut rng = PatternRng::new(seed);
    let mids = rng.int_inclusive(p.mid_range.lo, p.mid_range.hi);
    let (x, y) = (0, 1);
    let mut b = Builder::with_nodes(2 + mids);
    for m in 2..2 + mids {
        b.edge(x, m);
        b.edge(m, y);
    }
    for m in 2..2 + mids {
        if rng.bernoulli(p.noise_prob) {
            let n = b.node();
            b.edge(n, m);
        }
        if rng.bernoulli(p.noise_prob) {
            let n = b.node();
            b.edge(m, n);
        }
    }
    b.finish(PatternLabel::ScatterGather, seed, vec![x, y])
}

pub fn gen_gather_scatter(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.gs;
    let mut rng = PatternRng::new(seed);
    let n_in = rng.int_inclusive(p.in_range.lo, p.in_range.hi);
    let n_out = if n_in >= p.large_threshold {
        rng.int_inclusive(n_in - p.out_offset, n_in + p.out_offset)
    } else {
        rng.int_inclusive(p.small_out_range.lo, p.small_out_range.hi)
    };
    let mut b = Builder::with_nodes(1 + n_in + n_out);
    let senders = 1..1 + n_in;
    let receivers = 1 + n_in..1 + n_in + n_out;
    for s in senders.clone() {
        b.edge(s, 0);
    }
    for r in receivers.clone() {
        b.edge(0, r);
    }
    for s in senders {
        if rng.bernoulli(p.noise_prob) {
            let n = b.node();
            b.edge(s, n);
        }
    }
    for r in receivers {
        if rng.bernoulli(p.noise_prob) {
            let n = b.node();
            b.edge(n, r);
        }
    }
    b.finish(PatternLabel::GatherScatter, seed, vec![0])
}

pub fn gen_cyclic(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.cyclic;
    let mut rng = PatternRng::new(seed);
    let extra = rng.int_inclusive(p.extra_range.lo, p.extra_range.hi);
    let len = extra + 1;
    let mut b = Builder::with_nodes(len);
    for u in 0..len {
        b.edge(u, (u + 1) % len);
    }
    for u in 0..len {
        if rng.bernoulli(p.noise_prob) {
            let count = rng.int_inclusive(p.noise_count_range.lo, p.noise_count_range.hi);
            for _ in 0..count {
                let n = b.node();
                b.edge(n, u);
            }
        }
        if rng.bernoulli(p.noise_prob) {
            let count = rng.int_inclusive(p.noise_count_range.lo, p.noise_count_range.hi);
            for _ in 0..count {
                let n = b.node();
                b.edge(u, n);
            }
        }
    }
    b.finish(PatternLabel::Cyclic, seed, vec![0])
}

pub fn gen_branching(params: &GeneratorParams, seed: u64) -> LabeledGraph {
    let p = &params.branching;
    let mut rng = PatternRng::new(seed);
    let mut b = Builder::with_nodes(1);
    let mut queue = VecDeque::new();

    let root_children = rng.int_inclusive(p.root_range.lo, p.root_range.hi);
    for _ in 0..root_children {
        let c = b.node();
        b.edge(0, c);
        queue.push_back((c, 1));
    }
    // Breadth-first so that node numbering follows depth.
    while let Some((u, depth)) = queue.pop_front() {
        if depth >= p.max_depth {
            continue;
        }
        let draw = rng.unit();
        let children = if draw <= p.p3 {
            3
        } else if draw <= p.p0 {
            0
        } else {
            2
        };
        for _ in 0..children {
            let c = b.node();
            b.edge(u, c);
            queue.push_back((c, depth + 1));
        }
    }
    b.finish(PatternLabel::Branching, seed, vec![0])
}
