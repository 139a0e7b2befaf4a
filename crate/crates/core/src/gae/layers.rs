//! Encoder layers. Each forward returns a cache holding what its backward needs.

use super::params::{LayerParams, Tensor2};
use super::prepare::GraphTensors;
use crate::error::{Error, Result};

pub const LEAKY_SLOPE: f64 = 0.2;

fn relu_in_place(m: &mut Tensor2) {
    m.apply(|x| *x = x.max(0.0));
}

/// `grad ⊙ [pre > 0]`.
fn relu_backward(grad: &Tensor2, pre: &Tensor2) -> Tensor2 {
    grad.zip_map(pre, |g, s| if s > 0.0 { g } else { 0.0 })
}

fn check_mul(op: &'static str, left: &Tensor2, right: &Tensor2) -> Result<()> {
    if left.ncols() != right.nrows() {
        return Err(Error::Dimension {
            op,
            detail: format!("{:?} x {:?}", left.shape(), right.shape()),
        });
    }
    Ok(())
}

fn leaky(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        LEAKY_SLOPE * x
    }
}

fn leaky_slope(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        LEAKY_SLOPE
    }
}

#[derive(Debug, Clone)]
pub struct GcnCache {
    propagated: Tensor2,
    pre: Tensor2,
    activate: bool,
}

/// `act(Ã H W)`, ReLU when `activate`.
pub fn gcn_forward(norm_adj: &Tensor2, h: &Tensor2, w: &Tensor2, activate: bool) -> Result<(Tensor2, GcnCache)> {
    check_mul("gcn_forward", norm_adj, h)?;
    let propagated = norm_adj * h;
    check_mul("gcn_forward", &propagated, w)?;
    let pre = &propagated * w;
    let mut out = pre.clone();
    if activate {
        relu_in_place(&mut out);
    }
    Ok((out, GcnCache { propagated, pre, activate }))
}

/// Returns `(dL/dW, dL/dH)`.
pub fn gcn_backward(norm_adj: &Tensor2, w: &Tensor2, cache: &GcnCache, d_out: &Tensor2) -> (Tensor2, Tensor2) {
    let d_pre = if cache.activate {
        relu_backward(d_out, &cache.pre)
    } else {
        d_out.clone()
    };
    let d_w = cache.propagated.transpose() * &d_pre;
    // Ã is symmetric.
    let d_h = norm_adj * (&d_pre * w.transpose());
    (d_w, d_h)
}

#[derive(Debug, Clone)]
pub struct SageCache {
    concat: Tensor2,
    pre: Tensor2,
    activate: bool,
}

/// `act([H ‖ M H] W)` with `M` the mean aggregator; `W` is `(2 d_in) x d_out`.
pub fn sage_forward(mean_agg: &Tensor2, h: &Tensor2, w: &Tensor2, activate: bool) -> Result<(Tensor2, SageCache)> {
    check_mul("sage_forward", mean_agg, h)?;
    if w.nrows() != 2 * h.ncols() {
        return Err(Error::Dimension {
            op: "sage_forward",
            detail: format!("weight has {} rows, expected {}", w.nrows(), 2 * h.ncols()),
        });
    }
    let agg = mean_agg * h;
    let (n, d) = h.shape();
    let mut concat = Tensor2::zeros(n, 2 * d);
    concat.columns_mut(0, d).copy_from(h);
    concat.columns_mut(d, d).copy_from(&agg);
    let pre = &concat * w;
    let mut out = pre.clone();
    if activate {
        relu_in_place(&mut out);
    }
    Ok((out, SageCache { concat, pre, activate }))
}

pub fn sage_backward(mean_agg: &Tensor2, w: &Tensor2, cache: &SageCache, d_out: &Tensor2) -> (Tensor2, Tensor2) {
    let d_pre = if cache.activate {
        relu_backward(d_out, &cache.pre)
    } else {
        d_out.clone()
    };
    let d_w = cache.concat.transpose() * &d_pre;
    let d_concat = &d_pre * w.transpose();
    let d = d_concat.ncols() / 2;
    let d_h = d_concat.columns(0, d).into_owned() + mean_agg.transpose() * d_concat.columns(d, d);
    (d_w, d_h)
}

#[derive(Debug, Clone)]
pub struct GatCache {
    input: Tensor2,
    projected: Tensor2,
    /// Per node, `(neighbor, logit before LeakyReLU, attention weight)`.
    scores: Vec<Vec<(usize, f64, f64)>>,
    pre: Tensor2,
    activate: bool,
}

impl GatCache {
    /// Attention weights as a dense `n x n` matrix (row = attending node).
    pub fn attention_matrix(&self) -> Tensor2 {
        let n = self.scores.len();
        let mut m = Tensor2::zeros(n, n);
        for (v, row) in self.scores.iter().enumerate() {
            for &(u, _, alpha) in row {
                m[(v, u)] = alpha;
            }
        }
        m
    }
}

/// Single-head attention over each node's undirected neighborhood plus itself:
/// `e_vu = LeakyReLU(a_selfᵀ W h_v + a_nbrᵀ W h_u)`, softmax over `u`,
/// `out_v = act(Σ α_vu W h_u)`.
pub fn gat_forward(
    scope: &[Vec<usize>],
    h: &Tensor2,
    w: &Tensor2,
    a: &Tensor2,
    activate: bool,
) -> Result<(Tensor2, GatCache)> {
    check_mul("gat_forward", h, w)?;
    let d = w.ncols();
    if a.shape() != (2 * d, 1) {
        return Err(Error::Dimension {
            op: "gat_forward",
            detail: format!("attention vector {:?}, expected ({}, 1)", a.shape(), 2 * d),
        });
    }
    if scope.len() != h.nrows() {
        return Err(Error::Dimension {
            op: "gat_forward",
            detail: format!("{} neighborhoods for {} nodes", scope.len(), h.nrows()),
        });
    }
    let projected = h * w;
    let self_part = &projected * a.rows(0, d);
    let nbr_part = &projected * a.rows(d, d);
    let n = h.nrows();
    let mut pre = Tensor2::zeros(n, d);
    let mut scores = Vec::with_capacity(n);
    for (v, nbrs) in scope.iter().enumerate() {
        let logits: Vec<f64> = nbrs.iter().map(|&u| self_part[v] + nbr_part[u]).collect();
        let peak = logits.iter().map(|&e| leaky(e)).fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|&e| (leaky(e) - peak).exp()).collect();
        let total: f64 = exps.iter().sum();
        let mut row = Vec::with_capacity(nbrs.len());
        for ((&u, &e), &x) in nbrs.iter().zip(&logits).zip(&exps) {
            let alpha = x / total;
            for k in 0..d {
                pre[(v, k)] += alpha * projected[(u, k)];
            }
            row.push((u, e, alpha));
        }
        scores.push(row);
    }
    let mut out = pre.clone();
    if activate {
        relu_in_place(&mut out);
    }
    Ok((
        out,
        GatCache {
            input: h.clone(),
            projected,
            scores,
            pre,
            activate,
        },
    ))
}

/// Returns `(dL/dW, dL/da, dL/dH)`.
pub fn gat_backward(w: &Tensor2, a: &Tensor2, cache: &GatCache, d_out: &Tensor2) -> (Tensor2, Tensor2, Tensor2) {
    let d_pre = if cache.activate {
        relu_backward(d_out, &cache.pre)
    } else {
        d_out.clone()
    };
    let g = &cache.projected;
    let (n, d) = g.shape();
    let mut d_g = Tensor2::zeros(n, d);
    let mut d_self = vec![0.0; n];
    let mut d_nbr = vec![0.0; n];
    for (v, row) in cache.scores.iter().enumerate() {
        let dv = d_pre.row(v);
        let d_alpha: Vec<f64> = row.iter().map(|&(u, _, _)| dv.dot(&g.row(u))).collect();
        let weighted: f64 = row.iter().zip(&d_alpha).map(|(&(_, _, al), &da)| al * da).sum();
        for (&(u, e, alpha), &da) in row.iter().zip(&d_alpha) {
            // Messages flow back to the projected neighbor features.
            for k in 0..d {
                d_g[(u, k)] += alpha * dv[k];
            }
            let d_logit = alpha * (da - weighted) * leaky_slope(e);
            d_self[v] += d_logit;
            d_nbr[u] += d_logit;
        }
    }
    let a_self = a.rows(0, d);
    let a_nbr = a.rows(d, d);
    let d_self = Tensor2::from_column_slice(n, 1, &d_self);
    let d_nbr = Tensor2::from_column_slice(n, 1, &d_nbr);

    let mut d_a = Tensor2::zeros(2 * d, 1);
    d_a.rows_mut(0, d).copy_from(&(g.transpose() * &d_self));
    d_a.rows_mut(d, d).copy_from(&(g.transpose() * &d_nbr));
    d_g += &d_self * a_self.transpose() + &d_nbr * a_nbr.transpose();

    let d_w = cache.input.transpose() * &d_g;
    let d_h = &d_g * w.transpose();
    (d_w, d_a, d_h)
}

/// Which propagation rule a layer uses; keeps dispatch in one place.
#[derive(Debug, Clone)]
pub enum LayerCache {
    Gcn(GcnCache),
    Sage(SageCache),
    Gat(GatCache),
}

pub(crate) fn layer_forward(
    kind: super::EncoderKind,
    gt: &GraphTensors,
    h: &Tensor2,
    p: &LayerParams,
    activate: bool,
) -> Result<(Tensor2, LayerCache)> {
    use super::EncoderKind::*;
    Ok(match kind {
        Gcn => {
            let (o, c) = gcn_forward(&gt.norm_adj, h, &p.weight, activate)?;
            (o, LayerCache::Gcn(c))
        }
        Sage => {
            let (o, c) = sage_forward(&gt.mean_agg, h, &p.weight, activate)?;
            (o, LayerCache::Sage(c))
        }
        Gat => {
            let a = p.attention.as_ref().ok_or(Error::Dimension {
                op: "gat_forward",
                detail: "missing attention vector".into(),
            })?;
            let (o, c) = gat_forward(&gt.attention_scope, h, &p.weight, a, activate)?;
            (o, LayerCache::Gat(c))
        }
    })
}

/// Returns the parameter gradient and `dL/dH`.
pub(crate) fn layer_backward(
    gt: &GraphTensors,
    p: &LayerParams,
    cache: &LayerCache,
    d_out: &Tensor2,
) -> (LayerParams, Tensor2) {
    match cache {
        LayerCache::Gcn(c) => {
            let (d_w, d_h) = gcn_backward(&gt.norm_adj, &p.weight, c, d_out);
            (LayerParams { weight: d_w, attention: None }, d_h)
        }
        LayerCache::Sage(c) => {
            let (d_w, d_h) = sage_backward(&gt.mean_agg, &p.weight, c, d_out);
            (LayerParams { weight: d_w, attention: None }, d_h)
        }
        LayerCache::Gat(c) => {
            let a = p.attention.as_ref().expect("GAT cache implies attention vector");
            let (d_w, d_a, d_h) = gat_backward(&p.weight, a, c, d_out);
            (
                LayerParams {
                    weight: d_w,
                    attention: Some(d_a),
                },
                d_h,
            )
        }
    }
}
