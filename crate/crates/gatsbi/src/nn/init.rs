//! Weight initialization helpers.

use ndarray::Array2;
use rand::Rng;

/// U(−bound, bound).
pub fn uniform(rng: &mut impl Rng, rows: usize, cols: usize, bound: f64) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.random_range(-bound..bound))
}

/// Glorot-style uniform init: U(±√(6 / (fan_in + fan_out))).
pub fn xavier_uniform(rng: &mut impl Rng, rows: usize, cols: usize) -> Array2<f64> {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    uniform(rng, rows, cols, bound)
}
