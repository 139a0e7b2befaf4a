//! Cross-pattern error matrices, threshold calibration and classification.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gae::{EncoderKind, GaeModel, GraphTensors};
use crate::graph::PatternLabel;
use crate::train::mean_loss;

pub const PATTERNS: usize = 7;

/// Mean per-graph reconstruction loss of `model` over `eval_set`.
pub fn mean_reconstruction_error(model: &GaeModel, eval_set: &[GraphTensors]) -> Result<f64> {
    mean_loss(model, eval_set)
}

pub fn per_graph_errors(model: &GaeModel, set: &[GraphTensors]) -> Result<Vec<f64>> {
    set.par_iter().map(|gt| model.reconstruction_error(gt)).collect()
}

/// Nearest-rank percentile: the smallest value with at least `p`% of the data
/// at or below it.
pub fn nearest_rank(values: &[f64], percentile: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("error sample"));
    }
    if !(percentile > 0.0 && percentile <= 100.0) {
        return Err(Error::param("percentile", format!("{percentile} not in (0, 100]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((percentile / 100.0) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Sets the model's threshold to the given percentile of its per-graph errors
/// on `train_set` and returns it.
pub fn calibrate_threshold(model: &mut GaeModel, train_set: &[GraphTensors], percentile: f64) -> Result<f64> {
    let errors = per_graph_errors(model, train_set)?;
    let t = nearest_rank(&errors, percentile)?;
    model.threshold = Some(t);
    Ok(t)
}

/// Seven models of one encoder kind, one per pattern.
#[derive(Debug, Clone)]
pub struct ModelSet {
    encoder_kind: EncoderKind,
    models: Vec<GaeModel>,
}

impl ModelSet {
    pub fn new(models: impl IntoIterator<Item = GaeModel>) -> Result<Self> {
        let mut by_pattern: BTreeMap<PatternLabel, GaeModel> = BTreeMap::new();
        let mut kind = None;
        for m in models {
            let p = m
                .trained_pattern
                .ok_or_else(|| Error::param("model", "model has no trained pattern"))?;
            match kind {
                None => kind = Some(m.encoder_kind),
                Some(k) if k != m.encoder_kind => {
                    return Err(Error::param(
                        "model",
                        format!("mixed encoder kinds {k} and {}", m.encoder_kind),
                    ))
                }
                _ => {}
            }
            by_pattern.insert(p, m);
        }
        let missing: Vec<&str> = PatternLabel::ALL
            .iter()
            .filter(|p| !by_pattern.contains_key(p))
            .map(|p| p.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingPatterns {
                what: "models",
                patterns: missing.join(", "),
            });
        }
        Ok(ModelSet {
            encoder_kind: kind.expect("seven models present"),
            models: by_pattern.into_values().collect(),
        })
    }

    pub fn encoder_kind(&self) -> EncoderKind {
        self.encoder_kind
    }

    pub fn get(&self, p: PatternLabel) -> &GaeModel {
        &self.models[p.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &GaeModel> {
        self.models.iter()
    }

    pub fn require_calibrated(&self) -> Result<()> {
        match self.models.iter().find(|m| m.threshold.is_none()) {
            Some(m) => Err(Error::Uncalibrated(m.trained_pattern.expect("checked on construction"))),
            None => Ok(()),
        }
    }
}

/// Rows are trained patterns, columns evaluated patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMatrix {
    pub encoder_kind: EncoderKind,
    pub values: [[f64; PATTERNS]; PATTERNS],
    pub counts: [usize; PATTERNS],
}

impl ErrorMatrix {
    pub fn row_argmin(&self) -> [PatternLabel; PATTERNS] {
        std::array::from_fn(|i| {
            let row = &self.values[i];
            let j = (0..PATTERNS)
                .min_by(|&a, &b| row[a].total_cmp(&row[b]))
                .expect("nonempty row");
            PatternLabel::ALL[j]
        })
    }

    /// Rows whose minimum sits on the diagonal.
    pub fn diagonal_hits(&self) -> usize {
        self.row_argmin()
            .iter()
            .enumerate()
            .filter(|&(i, p)| p.index() == i)
            .count()
    }

    /// CSV with a header row and a leading column of pattern names. The row
    /// minimum carries a `*` suffix and is repeated in the `row_min` column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["trained".to_string()];
        header.extend(PatternLabel::ALL.iter().map(|p| p.to_string()));
        header.push("row_min".into());
        w.write_record(&header)?;
        let argmin = self.row_argmin();
        for (i, row) in self.values.iter().enumerate() {
            let mut rec = vec![PatternLabel::ALL[i].to_string()];
            for (j, v) in row.iter().enumerate() {
                let mark = if argmin[i].index() == j { "*" } else { "" };
                rec.push(format!("{v:.6}{mark}"));
            }
            rec.push(argmin[i].to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Cell `(i, j)` is model `i` evaluated on validation set `j`.
pub fn error_matrix(models: &ModelSet, validation: &BTreeMap<PatternLabel, Vec<GraphTensors>>) -> Result<ErrorMatrix> {
    let missing: Vec<&str> = PatternLabel::ALL
        .iter()
        .filter(|p| validation.get(p).is_none_or(Vec::is_empty))
        .map(|p| p.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPatterns {
            what: "validation sets",
            patterns: missing.join(", "),
        });
    }
    let mut values = [[0.0; PATTERNS]; PATTERNS];
    for (i, model) in models.iter().enumerate() {
        for (j, p) in PatternLabel::ALL.iter().enumerate() {
            values[i][j] = mean_reconstruction_error(model, &validation[p])?;
        }
    }
    Ok(ErrorMatrix {
        encoder_kind: models.encoder_kind(),
        values,
        counts: PatternLabel::ALL.map(|p| validation[&p].len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub scores: [f64; PATTERNS],
    pub best_label: PatternLabel,
    pub best_score: f64,
    /// `scores[p] <= threshold[p]`.
    pub flags: [bool; PATTERNS],
}

pub fn argmin_label(scores: &[f64; PATTERNS]) -> PatternLabel {
    let j = (0..PATTERNS)
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]))
        .expect("seven scores");
    PatternLabel::ALL[j]
}

/// Scores one graph against every model of a calibrated set.
pub fn classify(gt: &GraphTensors, models: &ModelSet) -> Result<Classification> {
    models.require_calibrated()?;
    let mut scores = [0.0; PATTERNS];
    let mut flags = [false; PATTERNS];
    for (i, m) in models.iter().enumerate() {
        scores[i] = m.reconstruction_error(gt)?;
        flags[i] = scores[i] <= m.threshold.expect("calibrated");
    }
    let best_label = argmin_label(&scores);
    Ok(Classification {
        scores,
        best_score: scores[best_label.index()],
        best_label,
        flags,
    })
}
