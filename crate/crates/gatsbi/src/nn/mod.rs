//! Minimal reverse-mode automatic differentiation plus the building blocks
//! the forecasting model is assembled from (LSTM cells, linear maps, Adam).
//!
//! Everything runs on `f64` matrices with columns as batch elements, which
//! keeps the LSTM step a single GEMM and makes analytic gradients easy to
//! verify against central finite differences.

mod adam;
mod init;
mod lstm;
mod params;
mod tape;

pub use adam::Adam;
pub use init::{uniform, xavier_uniform};
pub use lstm::{Lstm, LstmState};
pub use params::{ParamId, ParamStore};
pub use tape::{Grads, Tape, Var};

use ndarray::Array2;

/// Dropout mask with survivors scaled by 1/(1-p); multiply element-wise.
pub fn dropout_mask(rows: usize, cols: usize, p: f64, rng: &mut impl rand::Rng) -> Array2<f64> {
    let keep = 1.0 - p;
    Array2::from_shape_fn((rows, cols), |_| {
        if rng.random::<f64>() < keep {
            1.0 / keep
        } else {
            0.0
        }
    })
}

/// A dense affine map `y = W x + b` acting on batched columns.
#[derive(Debug, Clone)]
pub struct Linear {
    pub w: ParamId,
    pub b: ParamId,
}

impl Linear {
    pub fn new(
        store: &mut ParamStore,
        rng: &mut impl rand::Rng,
        name: &str,
        inputs: usize,
        outputs: usize,
    ) -> Self {
        let bound = 1.0 / (inputs as f64).sqrt();
        let w = store.add(format!("{name}.w"), uniform(rng, outputs, inputs, bound));
        let b = store.add(format!("{name}.b"), uniform(rng, outputs, 1, bound));
        Self { w, b }
    }

    pub fn apply(&self, tape: &mut Tape, pvars: &[Option<Var>], x: Var) -> Var {
        let w = pvars[self.w.index()].expect("linear weight bound to tape");
        let b = pvars[self.b.index()].expect("linear bias bound to tape");
        let wx = tape.matmul(w, x);
        tape.add_col_broadcast(wx, b)
    }
}
