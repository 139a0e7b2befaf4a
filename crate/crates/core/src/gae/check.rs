//! Central finite-difference comparison against the analytic gradients.

use serde::Serialize;

use super::prepare::GraphTensors;
use super::GaeModel;
use crate::error::Result;

/// Denominator floor for the relative error, so exact zeros compare by absolute difference.
pub const REL_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorCheck {
    pub name: &'static str,
    pub entries: usize,
    /// `max |analytic - numeric| / max(|analytic|, |numeric|, REL_FLOOR)`.
    pub max_rel_error: f64,
}

pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(REL_FLOOR)
}

/// Perturbs every weight by `±step` and compares the loss slope with the analytic gradient.
pub fn finite_difference_check(model: &GaeModel, gt: &GraphTensors, step: f64) -> Result<Vec<TensorCheck>> {
    let (_, analytic) = model.loss_and_gradients(gt)?;
    let names = model.params.tensor_names();
    let mut probe = model.clone();
    let mut out = Vec::with_capacity(names.len());
    for (t, (name, grad)) in names.into_iter().zip(analytic.tensors()).enumerate() {
        let mut worst: f64 = 0.0;
        for k in 0..grad.len() {
            let original = probe.params.tensors_mut()[t][k];
            probe.params.tensors_mut()[t][k] = original + step;
            let plus = probe.reconstruction_error(gt)?;
            probe.params.tensors_mut()[t][k] = original - step;
            let minus = probe.reconstruction_error(gt)?;
            probe.params.tensors_mut()[t][k] = original;
            let numeric = (plus - minus) / (2.0 * step);
            worst = worst.max(relative_error(grad[k], numeric));
        }
        out.push(TensorCheck {
            name,
            entries: grad.len(),
            max_rel_error: worst,
        });
    }
    Ok(out)
}
