//! Per-pattern training with minibatch Adam and patience-based early stopping.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gae::{init_model, Adam, AdamConfig, Dims, EncoderKind, GaeModel, GaeParams, GraphTensors};
use crate::generate::PatternRng;
use crate::graph::{LabeledGraph, PatternLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub early_stop_patience: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Share of the training set held out to monitor early stopping.
    pub early_stop_fraction: f64,
    pub seed: u64,
    pub dims: Dims,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 100,
            early_stop_patience: 3,
            batch_size: 25,
            learning_rate: 1e-3,
            early_stop_fraction: 0.1,
            seed: 0,
            dims: Dims::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_epochs < 1 {
            return Err(Error::param("max_epochs", "must be >= 1"));
        }
        if self.early_stop_patience < 1 {
            return Err(Error::param("early_stop_patience", "must be >= 1"));
        }
        if self.batch_size < 1 {
            return Err(Error::param("batch_size", "must be >= 1"));
        }
        if !(self.early_stop_fraction > 0.0 && self.early_stop_fraction < 1.0) {
            return Err(Error::param("early_stop_fraction", "must lie in (0, 1)"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::param("learning_rate", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub early_stop_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub encoder_kind: EncoderKind,
    pub pattern: PatternLabel,
    pub epochs: Vec<EpochLog>,
    /// Last epoch run (1-based).
    pub stopped_epoch: usize,
    /// Epoch whose weights were kept (1-based).
    pub best_epoch: usize,
    pub early_stopped: bool,
    pub wall_time_secs: f64,
}

/// Patience bookkeeping over a stream of monitored losses.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    best: f64,
    best_epoch: usize,
    stale: usize,
    epoch: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Improved,
    Continue,
    Stop,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        EarlyStopping {
            patience,
            best: f64::INFINITY,
            best_epoch: 0,
            stale: 0,
            epoch: 0,
        }
    }

    /// Records the next epoch's loss. Only strict decreases count as improvement.
    pub fn observe(&mut self, loss: f64) -> Verdict {
        self.epoch += 1;
        if loss < self.best {
            self.best = loss;
            self.best_epoch = self.epoch;
            self.stale = 0;
            Verdict::Improved
        } else {
            self.stale += 1;
            if self.stale >= self.patience {
                Verdict::Stop
            } else {
                Verdict::Continue
            }
        }
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best_loss(&self) -> f64 {
        self.best
    }
}

/// Features and tensors for every graph of a set, in input order.
pub fn prepare_all(samples: &[LabeledGraph]) -> Result<Vec<GraphTensors>> {
    samples.par_iter().map(|s| GraphTensors::from_graph(&s.graph)).collect()
}

/// Mean loss and mean gradient over a batch; summation runs in index order so
/// the result does not depend on the thread count.
pub fn batch_gradient(model: &GaeModel, batch: &[&GraphTensors]) -> Result<(f64, GaeParams)> {
    let parts: Vec<_> = batch.par_iter().map(|gt| model.loss_and_gradients(gt)).collect::<Result<_>>()?;
    let mut iter = parts.into_iter();
    let (first_report, mut grad) = iter.next().ok_or(Error::Empty("batch"))?;
    let mut loss = first_report.value;
    for (report, g) in iter {
        loss += report.value;
        grad.add_assign(&g);
    }
    let scale = 1.0 / batch.len() as f64;
    grad.scale(scale);
    Ok((loss * scale, grad))
}

/// Mean reconstruction loss; per-graph losses are summed in index order.
pub fn mean_loss(model: &GaeModel, set: &[GraphTensors]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::Empty("evaluation set"));
    }
    let losses: Vec<f64> = set.par_iter().map(|gt| model.reconstruction_error(gt)).collect::<Result<_>>()?;
    Ok(losses.iter().sum::<f64>() / losses.len() as f64)
}

fn check_single_label(samples: &[LabeledGraph], pattern: PatternLabel) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if let Some(bad) = samples.iter().find(|s| s.label != pattern) {
        return Err(Error::MixedLabels {
            expected: pattern,
            found: bad.label,
        });
    }
    Ok(())
}

/// Trains one model on samples of a single pattern.
pub fn train_model(
    kind: EncoderKind,
    pattern: PatternLabel,
    train_set: &[LabeledGraph],
    config: &TrainConfig,
) -> Result<(GaeModel, TrainReport)> {
    check_single_label(train_set, pattern)?;
    let prepared = prepare_all(train_set)?;
    train_prepared(kind, pattern, &prepared, config)
}

/// As [`train_model`], for graphs whose tensors were already built.
pub fn train_prepared(
    kind: EncoderKind,
    pattern: PatternLabel,
    prepared: &[GraphTensors],
    config: &TrainConfig,
) -> Result<(GaeModel, TrainReport)> {
    config.validate()?;
    if prepared.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let started = Instant::now();
    let mut rng = PatternRng::new(config.seed);

    let mut order: Vec<usize> = (0..prepared.len()).collect();
    rng.shuffle(&mut order);
    let held = ((config.early_stop_fraction * prepared.len() as f64).round() as usize).clamp(
        usize::from(prepared.len() > 1),
        prepared.len().saturating_sub(1),
    );
    let (monitor_idx, fit_idx) = if held == 0 {
        // One sample: monitor the fit set itself.
        (order.clone(), order)
    } else {
        let (m, f) = order.split_at(held);
        (m.to_vec(), f.to_vec())
    };
    let monitor: Vec<GraphTensors> = monitor_idx.iter().map(|&i| prepared[i].clone()).collect();
    let mut fit: Vec<&GraphTensors> = fit_idx.iter().map(|&i| &prepared[i]).collect();

    let mut model = init_model(kind, config.dims, config.seed)?;
    model.trained_pattern = Some(pattern);
    let adam_cfg = AdamConfig {
        lr: config.learning_rate,
        ..AdamConfig::default()
    };
    let mut adam = Adam::new(adam_cfg, &model.params);
    let mut stopper = EarlyStopping::new(config.early_stop_patience);
    let mut best_params = model.params.clone();
    let mut epochs = Vec::new();
    let mut early_stopped = false;

    for epoch in 1..=config.max_epochs {
        rng.shuffle(&mut fit);
        let mut loss_sum = 0.0;
        for batch in fit.chunks(config.batch_size) {
            let (loss, grad) = batch_gradient(&model, batch)?;
            loss_sum += loss * batch.len() as f64;
            adam.step(&mut model.params, &grad);
        }
        if !model.params.is_finite() {
            return Err(Error::param("learning_rate", format!("weights diverged at epoch {epoch}")));
        }
        let monitored = mean_loss(&model, &monitor)?;
        epochs.push(EpochLog {
            epoch,
            train_loss: loss_sum / fit.len() as f64,
            early_stop_loss: monitored,
        });
        match stopper.observe(monitored) {
            Verdict::Improved => best_params = model.params.clone(),
            Verdict::Continue => {}
            Verdict::Stop => {
                early_stopped = true;
                break;
            }
        }
    }
    model.params = best_params;
    let report = TrainReport {
        encoder_kind: kind,
        pattern,
        stopped_epoch: epochs.len(),
        best_epoch: stopper.best_epoch(),
        early_stopped,
        epochs,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    Ok((model, report))
}
