use serde::Serialize;

use super::params::Tensor2;
use crate::error::{Error, Result};

/// Bilinear decoder logits `Z R Zᵀ`. Non-symmetric `R` yields directed scores.
pub fn decode(z: &Tensor2, relation: &Tensor2) -> Result<Tensor2> {
    if relation.shape() != (z.ncols(), z.ncols()) {
        return Err(Error::Dimension {
            op: "decode",
            detail: format!("latent {} with relation {:?}", z.ncols(), relation.shape()),
        });
    }
    Ok(z * relation * z.transpose())
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossReport {
    pub value: f64,
    pub positive_weight: f64,
    pub pairs: usize,
}

/// Weight on edge terms: non-edges per edge over ordered off-diagonal pairs.
fn positive_weight(target: &Tensor2) -> (f64, usize) {
    let n = target.nrows();
    let pairs = n * n.saturating_sub(1);
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && target[(u, v)] > 0.5)
        .count();
    let w = if edges == 0 {
        1.0
    } else {
        (pairs - edges) as f64 / edges as f64
    };
    (w, pairs)
}

fn check_square(logits: &Tensor2, target: &Tensor2) -> Result<()> {
    if !logits.is_square() || logits.shape() != target.shape() {
        return Err(Error::Dimension {
            op: "reconstruction_loss",
            detail: format!("logits {:?} vs target {:?}", logits.shape(), target.shape()),
        });
    }
    Ok(())
}

/// Class-weighted binary cross-entropy over ordered off-diagonal pairs,
/// averaged over the number of pairs. Graphs with fewer than two nodes score 0.
pub fn reconstruction_loss(logits: &Tensor2, target: &Tensor2) -> Result<LossReport> {
    Ok(loss_with_gradient(logits, target)?.0)
}

/// Loss plus `dL/dlogits` (zero on the diagonal).
pub fn loss_with_gradient(logits: &Tensor2, target: &Tensor2) -> Result<(LossReport, Tensor2)> {
    check_square(logits, target)?;
    let n = logits.nrows();
    let (w_pos, pairs) = positive_weight(target);
    let mut grad = Tensor2::zeros(n, n);
    if pairs == 0 {
        return Ok((
            LossReport {
                value: 0.0,
                positive_weight: w_pos,
                pairs,
            },
            grad,
        ));
    }
    let scale = 1.0 / pairs as f64;
    let mut total = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let l = logits[(u, v)];
            if target[(u, v)] > 0.5 {
                total += w_pos * softplus(-l);
                grad[(u, v)] = -w_pos * sigmoid(-l) * scale;
            } else {
                total += softplus(l);
                grad[(u, v)] = sigmoid(l) * scale;
            }
        }
    }
    Ok((
        LossReport {
            value: total * scale,
            positive_weight: w_pos,
            pairs,
        },
        grad,
    ))
}
