//! Two-layer graph autoencoders with GCN, GraphSAGE or GAT encoders and a
//! bilinear directed-edge decoder, with hand-derived gradients.

mod adam;
mod check;
mod layers;
mod loss;
mod params;
mod prepare;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use adam::{adam_update, Adam, AdamConfig};
pub use check::{finite_difference_check, relative_error, TensorCheck, REL_FLOOR};
pub use layers::{
    gat_backward, gat_forward, gcn_backward, gcn_forward, sage_backward, sage_forward, GatCache, GcnCache,
    SageCache, LEAKY_SLOPE,
};
pub use loss::{decode, loss_with_gradient, reconstruction_loss, sigmoid, softplus, LossReport};
pub use params::{GaeParams, LayerParams, Tensor2};
pub use prepare::{adjacency, mean_aggregator, normalize_adjacency, GraphTensors};

use crate::error::{Error, Result};
use crate::features::{FEATURE_CONVENTION, FEATURE_COUNT};
use crate::graph::PatternLabel;
use layers::{layer_backward, layer_forward, LayerCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncoderKind {
    Gcn,
    Sage,
    Gat,
}

impl EncoderKind {
    pub const ALL: [EncoderKind; 3] = [EncoderKind::Gcn, EncoderKind::Sage, EncoderKind::Gat];

    pub fn as_str(self) -> &'static str {
        match self {
            EncoderKind::Gcn => "gcn",
            EncoderKind::Sage => "sage",
            EncoderKind::Gat => "gat",
        }
    }
}

impl fmt::Display for EncoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EncoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EncoderKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::param("encoder", format!("unknown encoder `{s}`; expected gcn|sage|gat")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub input: usize,
    pub hidden: usize,
    pub latent: usize,
}

impl Default for Dims {
    fn default() -> Self {
        Dims {
            input: FEATURE_COUNT,
            hidden: 32,
            latent: 16,
        }
    }
}

/// A trained (or freshly initialized) autoencoder and its metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaeModel {
    pub encoder_kind: EncoderKind,
    pub dims: Dims,
    pub trained_pattern: Option<PatternLabel>,
    pub threshold: Option<f64>,
    pub feature_convention: String,
    pub params: GaeParams,
}

fn glorot(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Tensor2 {
    let bound = glorot_bound(rows, cols);
    Tensor2::from_fn(rows, cols, |_, _| rng.random_range(-bound..=bound))
}

pub fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

/// Glorot-uniform initialization, deterministic in `seed`.
pub fn init_model(kind: EncoderKind, dims: Dims, seed: u64) -> Result<GaeModel> {
    if dims.input == 0 || dims.hidden == 0 || dims.latent == 0 {
        return Err(Error::param("dims", "all dimensions must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight_rows = |d_in: usize| if kind == EncoderKind::Sage { 2 * d_in } else { d_in };
    let mut layer = |d_in: usize, d_out: usize| LayerParams {
        weight: glorot(&mut rng, weight_rows(d_in), d_out),
        attention: (kind == EncoderKind::Gat).then(|| glorot(&mut rng, 2 * d_out, 1)),
    };
    let layer1 = layer(dims.input, dims.hidden);
    let layer2 = layer(dims.hidden, dims.latent);
    let relation = glorot(&mut rng, dims.latent, dims.latent);
    Ok(GaeModel {
        encoder_kind: kind,
        dims,
        trained_pattern: None,
        threshold: None,
        feature_convention: FEATURE_CONVENTION.to_string(),
        params: GaeParams {
            layer1,
            layer2,
            relation,
        },
    })
}

struct ForwardPass {
    hidden: Tensor2,
    latent: Tensor2,
    cache1: LayerCache,
    cache2: LayerCache,
    logits: Tensor2,
}

impl GaeModel {
    fn forward(&self, gt: &GraphTensors) -> Result<ForwardPass> {
        if gt.features.ncols() != self.dims.input {
            return Err(Error::Dimension {
                op: "encode",
                detail: format!("{} feature columns, model expects {}", gt.features.ncols(), self.dims.input),
            });
        }
        let (hidden, cache1) = layer_forward(self.encoder_kind, gt, &gt.features, &self.params.layer1, true)?;
        let (latent, cache2) = layer_forward(self.encoder_kind, gt, &hidden, &self.params.layer2, false)?;
        let logits = decode(&latent, &self.params.relation)?;
        Ok(ForwardPass {
            hidden,
            latent,
            cache1,
            cache2,
            logits,
        })
    }

    /// Latent node embeddings `Z`.
    pub fn encode(&self, gt: &GraphTensors) -> Result<Tensor2> {
        Ok(self.forward(gt)?.latent)
    }

    /// Hidden layer activations, mainly for inspection.
    pub fn hidden(&self, gt: &GraphTensors) -> Result<Tensor2> {
        Ok(self.forward(gt)?.hidden)
    }

    pub fn logits(&self, gt: &GraphTensors) -> Result<Tensor2> {
        Ok(self.forward(gt)?.logits)
    }

    /// Reconstruction loss of one graph.
    pub fn reconstruction_error(&self, gt: &GraphTensors) -> Result<f64> {
        let pass = self.forward(gt)?;
        Ok(reconstruction_loss(&pass.logits, &gt.target)?.value)
    }

    /// Loss and exact gradients for every trainable tensor.
    pub fn loss_and_gradients(&self, gt: &GraphTensors) -> Result<(LossReport, GaeParams)> {
        let pass = self.forward(gt)?;
        let (report, d_logits) = loss_with_gradient(&pass.logits, &gt.target)?;
        let z = &pass.latent;
        let r = &self.params.relation;
        // L = Z R Zᵀ
        let d_relation = z.transpose() * &d_logits * z;
        let d_latent = &d_logits * z * r.transpose() + d_logits.transpose() * z * r;
        let (d_layer2, d_hidden) = layer_backward(gt, &self.params.layer2, &pass.cache2, &d_latent);
        let (d_layer1, _) = layer_backward(gt, &self.params.layer1, &pass.cache1, &d_hidden);
        Ok((
            report,
            GaeParams {
                layer1: d_layer1,
                layer2: d_layer2,
                relation: d_relation,
            },
        ))
    }
}
