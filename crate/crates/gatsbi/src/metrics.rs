//! Displacement-error metrics shared by losses and the evaluation harness.

use crate::error::{Error, Result};

/// Average displacement error: mean Euclidean distance over timesteps.
pub fn ade(pred: &[(f64, f64)], truth: &[(f64, f64)]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::Shape(format!(
            "ADE length mismatch: {} vs {}",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::Input("ADE of empty trajectories".into()));
    }
    let sum: f64 = pred
        .iter()
        .zip(truth)
        .map(|(p, t)| ((p.0 - t.0).powi(2) + (p.1 - t.1).powi(2)).sqrt())
        .sum();
    Ok(sum / pred.len() as f64)
}

/// Final displacement error: Euclidean distance at the last timestep.
pub fn fde(pred: &[(f64, f64)], truth: &[(f64, f64)]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::Shape(format!(
            "FDE length mismatch: {} vs {}",
            pred.len(),
            truth.len()
        )));
    }
    match (pred.last(), truth.last()) {
        (Some(p), Some(t)) => Ok(((p.0 - t.0).powi(2) + (p.1 - t.1).powi(2)).sqrt()),
        _ => Err(Error::Input("FDE of empty trajectories".into())),
    }
}
