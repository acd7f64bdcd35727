//! Batched LSTM cell on the tape.
//!
//! Weights are a single (4H × D+H) matrix; gate rows are ordered
//! input, forget, output, candidate. The forget-gate bias starts at 1.

use ndarray::Array2;
use rand::Rng;

use super::init::uniform;
use super::params::{ParamId, ParamStore};
use super::tape::{Tape, Var};

#[derive(Debug, Clone)]
pub struct Lstm {
    pub w: ParamId,
    pub b: ParamId,
    pub input: usize,
    pub hidden: usize,
}

/// Hidden and cell state handles for one timestep.
#[derive(Debug, Clone, Copy)]
pub struct LstmState {
    pub h: Var,
    pub c: Var,
}

impl Lstm {
    pub fn new(
        store: &mut ParamStore,
        rng: &mut impl Rng,
        name: &str,
        input: usize,
        hidden: usize,
    ) -> Self {
        let bound = 1.0 / (hidden as f64).sqrt();
        let w = store.add(
            format!("{name}.w"),
            uniform(rng, 4 * hidden, input + hidden, bound),
        );
        let mut bias = uniform(rng, 4 * hidden, 1, bound);
        for r in hidden..2 * hidden {
            bias[[r, 0]] += 1.0;
        }
        let b = store.add(format!("{name}.b"), bias);
        Self {
            w,
            b,
            input,
            hidden,
        }
    }

    pub fn zero_state(&self, tape: &mut Tape, batch: usize) -> LstmState {
        let h = tape.constant(Array2::zeros((self.hidden, batch)));
        let c = tape.constant(Array2::zeros((self.hidden, batch)));
        LstmState { h, c }
    }

    pub fn step(
        &self,
        tape: &mut Tape,
        pvars: &[Option<Var>],
        x: Var,
        state: LstmState,
    ) -> LstmState {
        let w = pvars[self.w.index()].expect("lstm weight bound to tape");
        let b = pvars[self.b.index()].expect("lstm bias bound to tape");
        let hdim = self.hidden;
        let z = tape.concat_rows(&[x, state.h]);
        let wz = tape.matmul(w, z);
        let pre = tape.add_col_broadcast(wz, b);
        let i_pre = tape.slice_rows(pre, 0, hdim);
        let f_pre = tape.slice_rows(pre, hdim, 2 * hdim);
        let o_pre = tape.slice_rows(pre, 2 * hdim, 3 * hdim);
        let g_pre = tape.slice_rows(pre, 3 * hdim, 4 * hdim);
        let i = tape.sigmoid(i_pre);
        let f = tape.sigmoid(f_pre);
        let o = tape.sigmoid(o_pre);
        let g = tape.tanh(g_pre);
        let fc = tape.mul(f, state.c);
        let ig = tape.mul(i, g);
        let c = tape.add(fc, ig);
        let tc = tape.tanh(c);
        let h = tape.mul(o, tc);
        LstmState { h, c }
    }

    /// Run over a sequence, returning the per-step hidden states.
    ///
    /// `validity` (optional per-step 1×B rows of 0/1) zeroes the state after
    /// invalid steps. Invalid frames only ever form a prefix of a sequence, so
    /// this makes the encoder start fresh at the first valid frame.
    pub fn run(
        &self,
        tape: &mut Tape,
        pvars: &[Option<Var>],
        xs: &[Var],
        validity: Option<&[Var]>,
    ) -> Vec<LstmState> {
        let batch = tape.value(xs[0]).ncols();
        let mut state = self.zero_state(tape, batch);
        let mut out = Vec::with_capacity(xs.len());
        for (t, &x) in xs.iter().enumerate() {
            let mut next = self.step(tape, pvars, x, state);
            if let Some(masks) = validity {
                next.h = tape.mul_row_broadcast(next.h, masks[t]);
                next.c = tape.mul_row_broadcast(next.c, masks[t]);
            }
            out.push(next);
            state = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Adam;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bind_params(tape: &mut Tape, store: &ParamStore) -> Vec<Option<Var>> {
        let mut pvars = vec![None; store.len()];
        for id in store.ids() {
            pvars[id.index()] = Some(tape.param(id, store.get(id).clone()));
        }
        pvars
    }

    #[test]
    fn deterministic_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut store = ParamStore::new();
        let lstm = Lstm::new(&mut store, &mut rng, "enc", 2, 8);
        let xs_data: Vec<Array2<f64>> = (0..5)
            .map(|t| Array2::from_shape_fn((2, 3), |(r, c)| (t + r + c) as f64 * 0.1))
            .collect();
        let run = |store: &ParamStore| {
            let mut tape = Tape::new();
            let pvars = bind_params(&mut tape, store);
            let xs: Vec<Var> = xs_data.iter().map(|x| tape.constant(x.clone())).collect();
            let states = lstm.run(&mut tape, &pvars, &xs, None);
            tape.value(states.last().unwrap().h).clone()
        };
        assert_eq!(run(&store), run(&store));
    }

    #[test]
    fn validity_prefix_resets_state() {
        // A sequence with an invalid prefix must encode identically to the
        // suffix alone.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut store = ParamStore::new();
        let lstm = Lstm::new(&mut store, &mut rng, "enc", 2, 6);

        let suffix: Vec<Array2<f64>> = (0..3)
            .map(|t| Array2::from_shape_fn((2, 1), |(r, _)| (t * 2 + r) as f64 * 0.3 - 0.4))
            .collect();

        let mut tape = Tape::new();
        let pvars = bind_params(&mut tape, &store);
        // Full sequence: 2 zero-padded invalid frames then the suffix.
        let mut xs = vec![
            tape.constant(Array2::zeros((2, 1))),
            tape.constant(Array2::zeros((2, 1))),
        ];
        let mut masks = vec![
            tape.constant(Array2::zeros((1, 1))),
            tape.constant(Array2::zeros((1, 1))),
        ];
        for x in &suffix {
            xs.push(tape.constant(x.clone()));
            masks.push(tape.constant(Array2::ones((1, 1))));
        }
        let padded = lstm.run(&mut tape, &pvars, &xs, Some(&masks));
        let padded_h = tape.value(padded.last().unwrap().h).clone();

        let mut tape2 = Tape::new();
        let pvars2 = bind_params(&mut tape2, &store);
        let xs2: Vec<Var> = suffix.iter().map(|x| tape2.constant(x.clone())).collect();
        let bare = lstm.run(&mut tape2, &pvars2, &xs2, None);
        let bare_h = tape2.value(bare.last().unwrap().h).clone();

        for (a, b) in padded_h.iter().zip(bare_h.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lstm_gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut store = ParamStore::new();
        let lstm = Lstm::new(&mut store, &mut rng, "enc", 2, 4);
        let xs_data: Vec<Array2<f64>> = (0..3)
            .map(|_| Array2::from_shape_fn((2, 2), |_| rng.random_range(-1.0..1.0)))
            .collect();

        let eval = |store: &ParamStore| -> f64 {
            let mut tape = Tape::new();
            let pvars = bind_params(&mut tape, store);
            let xs: Vec<Var> = xs_data.iter().map(|x| tape.constant(x.clone())).collect();
            let states = lstm.run(&mut tape, &pvars, &xs, None);
            let h = states.last().unwrap().h;
            let sq = tape.mul(h, h);
            let loss = tape.sum_all(sq);
            tape.scalar(loss)
        };

        let mut tape = Tape::new();
        let pvars = bind_params(&mut tape, &store);
        let xs: Vec<Var> = xs_data.iter().map(|x| tape.constant(x.clone())).collect();
        let states = lstm.run(&mut tape, &pvars, &xs, None);
        let h = states.last().unwrap().h;
        let sq = tape.mul(h, h);
        let loss = tape.sum_all(sq);
        let grads = tape.backward(loss);

        let h_step = 1e-6;
        for (pid, var) in tape.param_bindings() {
            let analytic = grads.of(*var).unwrap().clone();
            let arr = store.get(*pid).clone();
            // Spot-check a handful of entries per parameter.
            for (r, c) in [(0, 0), (1, 1), (3, 2)] {
                if r >= arr.nrows() || c >= arr.ncols() {
                    continue;
                }
                let mut plus = store.clone();
                plus.get_mut(*pid)[[r, c]] += h_step;
                let mut minus = store.clone();
                minus.get_mut(*pid)[[r, c]] -= h_step;
                let numeric = (eval(&plus) - eval(&minus)) / (2.0 * h_step);
                let a = analytic[[r, c]];
                assert!(
                    (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-4) < 1e-5,
                    "{} ({r},{c}): {a} vs {numeric}",
                    store.name(*pid)
                );
            }
        }
    }

    #[test]
    fn adam_reduces_simple_sequence_loss() {
        // Fit the LSTM to output a target vector from a fixed sequence.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut store = ParamStore::new();
        let lstm = Lstm::new(&mut store, &mut rng, "enc", 1, 4);
        let xs_data: Vec<Array2<f64>> =
            (0..4).map(|t| Array2::from_elem((1, 1), t as f64 * 0.2)).collect();
        let target = Array2::from_shape_vec((4, 1), vec![0.3, -0.2, 0.5, 0.1]).unwrap();
        let mut adam = Adam::new(1e-2);
        let mut losses = Vec::new();
        for _ in 0..200 {
            let mut tape = Tape::new();
            let pvars = bind_params(&mut tape, &store);
            let xs: Vec<Var> = xs_data.iter().map(|x| tape.constant(x.clone())).collect();
            let states = lstm.run(&mut tape, &pvars, &xs, None);
            let tgt = tape.constant(target.clone());
            let diff = tape.sub(states.last().unwrap().h, tgt);
            let sq = tape.mul(diff, diff);
            let loss = tape.sum_all(sq);
            losses.push(tape.scalar(loss));
            let grads = tape.backward(loss);
            adam.step(&mut store, &tape, &grads);
        }
        assert!(losses.last().unwrap() < &(losses[0] * 0.01));
    }
}
