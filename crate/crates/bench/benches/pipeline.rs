use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use motifgae::features::compute_features;
use motifgae::gae::{init_model, Dims, EncoderKind, GraphTensors};
use motifgae::generate::{generate, generate_dataset, GeneratorParams};
use motifgae::train::{batch_gradient, prepare_all};
use motifgae::PatternLabel;

fn generators(c: &mut Criterion) {
    let params = GeneratorParams::default();
    let mut group = c.benchmark_group("generate");
    for p in PatternLabel::ALL {
        group.bench_function(p.as_str(), |b| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                black_box(generate(p, &params, seed))
            })
        });
    }
    group.finish();
}

fn features(c: &mut Criterion) {
    let params = GeneratorParams::default();
    let mut group = c.benchmark_group("features");
    for p in [PatternLabel::Collector, PatternLabel::ScatterGather, PatternLabel::Branching] {
        let samples = generate_dataset(p, 64, 1, &params).unwrap();
        group.bench_function(p.as_str(), |b| {
            b.iter(|| {
                for s in &samples {
                    black_box(compute_features(&s.graph).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn gradients(c: &mut Criterion) {
    let samples = generate_dataset(PatternLabel::GatherScatter, 25, 3, &GeneratorParams::default()).unwrap();
    let prepared: Vec<GraphTensors> = prepare_all(&samples).unwrap();
    let batch: Vec<&GraphTensors> = prepared.iter().collect();
    let mut group = c.benchmark_group("batch_gradient");
    for kind in EncoderKind::ALL {
        let model = init_model(kind, Dims::default(), 0).unwrap();
        group.bench_function(kind.as_str(), |b| {
            b.iter_batched(|| batch.clone(), |batch| black_box(batch_gradient(&model, &batch).unwrap()), BatchSize::SmallInput)
        });
    }
    group.finish();
}

criterion_group!(benches, generators, features, gradients);
criterion_main!(benches);
