//! Adaptive-moment gradient descent.

use ndarray::Array2;

use super::params::ParamStore;
use super::tape::{Grads, Tape};

pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: u64,
    m: Vec<Array2<f64>>,
    v: Vec<Array2<f64>>,
}

impl Adam {
    pub fn new(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: Vec::new(),
            v: Vec::new(),
        }
    }

    /// Apply one update from the gradients of a finished backward pass.
    pub fn step(&mut self, params: &mut ParamStore, tape: &Tape, grads: &Grads) {
        if self.m.is_empty() {
            for id in params.ids() {
                let dim = params.get(id).dim();
                self.m.push(Array2::zeros(dim));
                self.v.push(Array2::zeros(dim));
            }
        }
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for &(id, var) in tape.param_bindings() {
            let Some(grad) = grads.of(var) else {
                continue;
            };
            let i = id.index();
            self.m[i].zip_mut_with(grad, |m, &g| *m = self.beta1 * *m + (1.0 - self.beta1) * g);
            self.v[i].zip_mut_with(grad, |v, &g| *v = self.beta2 * *v + (1.0 - self.beta2) * g * g);
            let value = params.get_mut(id);
            ndarray::Zip::from(&mut *value)
                .and(&self.m[i])
                .and(&self.v[i])
                .for_each(|p, &m, &v| {
                    let mh = m / bc1;
                    let vh = v / bc2;
                    *p -= self.lr * mh / (vh.sqrt() + self.eps);
                });
        }
    }
}
