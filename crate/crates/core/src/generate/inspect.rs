//! Recovers motif parameters from a sample's structure alone.
//!
//! This never looks at the generator's random stream: it checks that a graph
//! is a well-formed instance of its labeled motif and reports the core sizes
//! and noise attachments it finds. Generator tests use it as an oracle.

use std::collections::BTreeSet;

use crate::graph::{DiGraph, LabeledGraph, PatternLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Motif {
    Collector { fan_in: usize, noise_out: usize },
    Sink { fan_out: usize, noise_in: usize },
    Collusion {
        inputs: usize,
        outputs: usize,
        noise_senders: usize,
        noise_receivers: usize,
    },
    ScatterGather { mids: usize, noisy_in: usize, noisy_out: usize },
    GatherScatter {
        senders: usize,
        receivers: usize,
        noisy_senders: usize,
        noisy_receivers: usize,
    },
    /// Noise counts are listed in cycle order starting at the focal node.
    Cyclic {
        cycle_len: usize,
        noise_in: Vec<usize>,
        noise_out: Vec<usize>,
    },
    /// `child_counts` holds `(depth, children)` for every non-root node.
    Branching {
        root_children: usize,
        depth: usize,
        child_counts: Vec<(usize, usize)>,
    },
}

impl Motif {
    /// Number of nodes that are not part of the noise-free skeleton.
    pub fn noise_nodes(&self) -> usize {
        match self {
            Motif::Collector { noise_out, .. } => *noise_out,
            Motif::Sink { noise_in, .. } => *noise_in,
            Motif::Collusion {
                noise_senders,
                noise_receivers,
                ..
            } => noise_senders + noise_receivers,
            Motif::ScatterGather { noisy_in, noisy_out, .. } => noisy_in + noisy_out,
            Motif::GatherScatter {
                noisy_senders,
                noisy_receivers,
                ..
            } => noisy_senders + noisy_receivers,
            Motif::Cyclic { noise_in, noise_out, .. } => {
                noise_in.iter().sum::<usize>() + noise_out.iter().sum::<usize>()
            }
            Motif::Branching { .. } => 0,
        }
    }
}

type Check<T> = std::result::Result<T, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check<()> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn degree(g: &DiGraph, u: usize) -> usize {
    g.in_degree(u) + g.out_degree(u)
}

fn single_focal(sample: &LabeledGraph) -> Check<usize> {
    ensure(sample.focal_nodes.len() == 1, || {
        format!("expected one focal node, got {:?}", sample.focal_nodes)
    })?;
    Ok(sample.focal_nodes[0])
}

pub fn inspect(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    match sample.label {
        PatternLabel::Collector | PatternLabel::Sink => {
            let x = single_focal(sample)?;
            for (u, v) in g.edges() {
                ensure(u == x || v == x, || format!("edge ({u},{v}) misses the center"))?;
            }
            for u in (0..g.node_count()).filter(|&u| u != x) {
                ensure(degree(g, u) == 1, || format!("leaf {u} has degree {}", degree(g, u)))?;
            }
            let (fan_in, fan_out) = (g.in_degree(x), g.out_degree(x));
            if sample.label == PatternLabel::Collector {
                Ok(Motif::Collector { fan_in, noise_out: fan_out })
            } else {
                Ok(Motif::Sink { fan_out, noise_in: fan_in })
            }
        }
        PatternLabel::Collusion => inspect_collusion(sample),
        PatternLabel::ScatterGather => inspect_scatter_gather(sample),
        PatternLabel::GatherScatter => inspect_gather_scatter(sample),
        PatternLabel::Cyclic => inspect_cyclic(sample),
        PatternLabel::Branching => inspect_branching(sample),
    }
}

fn inspect_collusion(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    let focal: BTreeSet<usize> = sample.focal_nodes.iter().copied().collect();
    let inputs: BTreeSet<usize> = focal
        .iter()
        .copied()
        .filter(|&u| g.successors(u).any(|v| focal.contains(&v)))
        .collect();
    let outputs: BTreeSet<usize> = focal
        .iter()
        .copied()
        .filter(|&u| g.predecessors(u).any(|v| focal.contains(&v)))
        .collect();
    ensure(inputs.is_disjoint(&outputs), || "a core node is both input and output".into())?;
    ensure(inputs.len() + outputs.len() == focal.len(), || "isolated core node".into())?;
    for &i in &inputs {
        ensure(g.in_degree(i) == 0, || format!("input {i} has predecessors"))?;
        for &o in &outputs {
            ensure(g.has_edge(i, o), || format!("missing biclique edge ({i},{o})"))?;
        }
    }
    for &o in &outputs {
        ensure(g.out_degree(o) == 0, || format!("output {o} has successors"))?;
    }
    let (mut noise_senders, mut noise_receivers) = (0, 0);
    for u in (0..g.node_count()).filter(|u| !focal.contains(u)) {
        ensure(degree(g, u) == 1, || format!("noise node {u} has degree {}", degree(g, u)))?;
        if let Some(v) = g.successors(u).next() {
            ensure(outputs.contains(&v), || format!("noise sender {u} targets non-output {v}"))?;
            noise_senders += 1;
        } else {
            let v = g.predecessors(u).next().unwrap();
            ensure(inputs.contains(&v), || format!("noise receiver {u} fed by non-input {v}"))?;
            noise_receivers += 1;
        }
    }
    Ok(Motif::Collusion {
        inputs: inputs.len(),
        outputs: outputs.len(),
        noise_senders,
        noise_receivers,
    })
}

fn inspect_scatter_gather(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    let [x, y] = sample.focal_nodes[..] else {
        return Err(format!("expected focal pair, got {:?}", sample.focal_nodes));
    };
    ensure(g.in_degree(x) == 0 && g.out_degree(y) == 0, || "source has inputs or target has outputs".into())?;
    ensure(!g.has_edge(x, y), || "direct source-target edge".into())?;
    let mids: BTreeSet<usize> = g.successors(x).collect();
    let gathered: BTreeSet<usize> = g.predecessors(y).collect();
    ensure(mids == gathered, || "scatter and gather sets differ".into())?;
    let (mut noisy_in, mut noisy_out) = (0, 0);
    let mut core = mids.len() + 2;
    for &m in &mids {
        let extra_in = g.in_degree(m) - 1;
        let extra_out = g.out_degree(m) - 1;
        ensure(extra_in <= 1 && extra_out <= 1, || format!("intermediary {m} has too many noise nodes"))?;
        for n in g.predecessors(m).filter(|&n| n != x).chain(g.successors(m).filter(|&n| n != y)) {
            ensure(degree(g, n) == 1, || format!("noise node {n} has degree {}", degree(g, n)))?;
        }
        noisy_in += extra_in;
        noisy_out += extra_out;
        core += extra_in + extra_out;
    }
    ensure(core == g.node_count(), || "stray nodes".into())?;
    Ok(Motif::ScatterGather {
        mids: mids.len(),
        noisy_in,
        noisy_out,
    })
}

fn inspect_gather_scatter(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    let x = single_focal(sample)?;
    let senders: Vec<usize> = g.predecessors(x).collect();
    let receivers: Vec<usize> = g.successors(x).collect();
    let mut accounted = 1 + senders.len() + receivers.len();
    let mut noisy_senders = 0;
    for &s in &senders {
        ensure(g.in_degree(s) == 0, || format!("sender {s} has inputs"))?;
        for n in g.successors(s).filter(|&n| n != x) {
            ensure(degree(g, n) == 1, || format!("noise node {n} has degree {}", degree(g, n)))?;
        }
        let extra = g.out_degree(s) - 1;
        ensure(extra <= 1, || format!("sender {s} has {extra} noise outputs"))?;
        noisy_senders += extra;
    }
    let mut noisy_receivers = 0;
    for &r in &receivers {
        ensure(g.out_degree(r) == 0, || format!("receiver {r} has outputs"))?;
        for n in g.predecessors(r).filter(|&n| n != x) {
            ensure(degree(g, n) == 1, || format!("noise node {n} has degree {}", degree(g, n)))?;
        }
        let extra = g.in_degree(r) - 1;
        ensure(extra <= 1, || format!("receiver {r} has {extra} noise inputs"))?;
        noisy_receivers += extra;
    }
    accounted += noisy_senders + noisy_receivers;
    ensure(accounted == g.node_count(), || "stray nodes".into())?;
    Ok(Motif::GatherScatter {
        senders: senders.len(),
        receivers: receivers.len(),
        noisy_senders,
        noisy_receivers,
    })
}

fn inspect_cyclic(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    let x = single_focal(sample)?;
    // Noise outputs are sinks, so the only successor that continues is the cycle's.
    let mut cycle = vec![x];
    let mut u = x;
    loop {
        let next: Vec<usize> = g.successors(u).filter(|&v| g.out_degree(v) > 0).collect();
        ensure(next.len() == 1, || format!("node {u} has {} continuing successors", next.len()))?;
        u = next[0];
        if u == x {
            break;
        }
        ensure(!cycle.contains(&u), || "walk closed without returning to the focal node".into())?;
        cycle.push(u);
    }
    let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
    for u in (0..g.node_count()).filter(|u| !on_cycle.contains(u)) {
        ensure(degree(g, u) == 1, || format!("noise node {u} has degree {}", degree(g, u)))?;
    }
    let noise_in = cycle.iter().map(|&c| g.in_degree(c) - 1).collect();
    let noise_out = cycle.iter().map(|&c| g.out_degree(c) - 1).collect();
    Ok(Motif::Cyclic {
        cycle_len: cycle.len(),
        noise_in,
        noise_out,
    })
}

fn inspect_branching(sample: &LabeledGraph) -> Check<Motif> {
    let g = &sample.graph;
    let x = single_focal(sample)?;
    ensure(g.in_degree(x) == 0, || "root has inputs".into())?;
    ensure(g.edge_count() + 1 == g.node_count(), || "not a tree".into())?;
    let mut depth_of = vec![usize::MAX; g.node_count()];
    depth_of[x] = 0;
    let mut frontier = vec![x];
    let mut child_counts = Vec::new();
    let mut depth = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            if u != x {
                child_counts.push((depth_of[u], g.out_degree(u)));
            }
            for v in g.successors(u) {
                ensure(depth_of[v] == usize::MAX, || format!("node {v} reached twice"))?;
                ensure(g.in_degree(v) == 1, || format!("node {v} has in-degree {}", g.in_degree(v)))?;
                depth_of[v] = depth_of[u] + 1;
                next.push(v);
            }
        }
        if !next.is_empty() {
            depth += 1;
        }
        frontier = next;
    }
    ensure(depth_of.iter().all(|&d| d != usize::MAX), || "unreachable node".into())?;
    Ok(Motif::Branching {
        root_children: g.out_degree(x),
        depth,
        child_counts,
    })
}
