//! Seedable motif generators, dataset assembly and train/validation splitting.

mod inspect;
mod params;
mod patterns;
mod rng;

use rayon::prelude::*;

pub use inspect::{inspect, Motif};
pub use params::{
    BranchingParams, CollectorParams, CollusionParams, CyclicParams, GatherScatterParams, GeneratorParams,
    IntRange, ScatterGatherParams, SinkParams,
};
pub use patterns::{
    gen_branching, gen_collector, gen_collusion, gen_cyclic, gen_gather_scatter, gen_scatter_gather, gen_sink,
};
pub use rng::PatternRng;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, PatternLabel};

pub fn generate(label: PatternLabel, params: &GeneratorParams, seed: u64) -> LabeledGraph {
    match label {
        PatternLabel::Collector => gen_collector(params, seed),
        PatternLabel::Sink => gen_sink(params, seed),
        PatternLabel::Collusion => gen_collusion(params, seed),
        PatternLabel::ScatterGather => gen_scatter_gather(params, seed),
        PatternLabel::GatherScatter => gen_gather_scatter(params, seed),
        PatternLabel::Cyclic => gen_cyclic(params, seed),
        PatternLabel::Branching => gen_branching(params, seed),
    }
}

/// `count` samples of one pattern; sample `i` uses seed `base_seed + i`.
pub fn generate_dataset(
    label: PatternLabel,
    count: usize,
    base_seed: u64,
    params: &GeneratorParams,
) -> Result<Vec<LabeledGraph>> {
    if count == 0 {
        return Err(Error::param("count", "must be >= 1"));
    }
    params.validate()?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| generate(label, params, base_seed.wrapping_add(i)))
        .collect())
}

/// Seeded shuffle followed by a cut at `round(train_fraction * n)`.
pub fn split_dataset<T: Clone>(samples: &[T], train_fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param("train_fraction", format!("{train_fraction} not in (0, 1)")));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    PatternRng::new(seed).shuffle(&mut order);
    let n_train = (train_fraction * samples.len() as f64).round() as usize;
    let pick = |idx: &[usize]| idx.iter().map(|&i| samples[i].clone()).collect::<Vec<_>>();
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}
