//! Reverse-mode autodiff over a flat operation tape.
//!
//! A [`Tape`] records every operation of one forward pass; [`Tape::backward`]
//! walks it once in reverse and accumulates gradients. Nodes are plain
//! `Array2<f64>` values; column index is the batch dimension throughout.

use ndarray::{concatenate, s, Array2, Axis};

use super::params::ParamId;

/// Handle to a tape node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

impl Var {
    pub(crate) fn idx(self) -> usize {
        self.0
    }
}

enum Op {
    Constant,
    Param(ParamId),
    MatMul(Var, Var),
    Transpose(Var),
    Reshape(Var),
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    /// (n,m) + (n,1) broadcast over columns.
    AddColBroadcast(Var, Var),
    /// (n,m) ⊙ (1,m) broadcast over rows.
    MulRowBroadcast(Var, Var),
    Scale(Var, f64),
    Sigmoid(Var),
    Tanh(Var),
    Exp(Var),
    Ln(Var),
    Sqrt(Var),
    LeakyRelu(Var, f64),
    SliceRows(Var, usize, usize),
    ConcatRows(Vec<Var>),
    SliceCols(Var, usize, usize),
    ConcatCols(Vec<Var>),
    SumAll(Var),
    /// (n,m) -> (n,1).
    SumCols(Var),
    /// (n,m) -> (1,m).
    SumRows(Var),
    /// Row-wise softmax over entries where mask == 1; masked entries get 0.
    MaskedSoftmaxRows(Var, Array2<f64>),
    /// (n,m) -> (1,m): log Σ_rows exp.
    LogSumExpCols(Var),
}

struct Node {
    value: Array2<f64>,
    op: Op,
}

/// Gradients produced by one backward pass, indexed like the tape.
pub struct Grads {
    by_node: Vec<Option<Array2<f64>>>,
}

impl Grads {
    pub fn of(&self, var: Var) -> Option<&Array2<f64>> {
        self.by_node[var.idx()].as_ref()
    }
}

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    params: Vec<(ParamId, Var)>,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, var: Var) -> &Array2<f64> {
        &self.nodes[var.idx()].value
    }

    pub fn scalar(&self, var: Var) -> f64 {
        debug_assert_eq!(self.value(var).dim(), (1, 1));
        self.value(var)[[0, 0]]
    }

    fn push(&mut self, value: Array2<f64>, op: Op) -> Var {
        self.nodes.push(Node { value, op });
        Var(self.nodes.len() - 1)
    }

    pub fn constant(&mut self, value: Array2<f64>) -> Var {
        self.push(value, Op::Constant)
    }

    pub fn scalar_const(&mut self, value: f64) -> Var {
        self.constant(Array2::from_elem((1, 1), value))
    }

    /// Bind a parameter value; its gradient is retrievable after backward.
    pub fn param(&mut self, id: ParamId, value: Array2<f64>) -> Var {
        let var = self.push(value, Op::Param(id));
        self.params.push((id, var));
        var
    }

    pub fn param_bindings(&self) -> &[(ParamId, Var)] {
        &self.params
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Var {
        let value = self.value(a).dot(self.value(b));
        self.push(value, Op::MatMul(a, b))
    }

    pub fn transpose(&mut self, a: Var) -> Var {
        let value = self.value(a).t().to_owned();
        self.push(value, Op::Transpose(a))
    }

    pub fn reshape(&mut self, a: Var, rows: usize, cols: usize) -> Var {
        let value = self
            .value(a)
            .to_owned()
            .into_shape_with_order((rows, cols))
            .expect("reshape must preserve element count");
        self.push(value, Op::Reshape(a))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        debug_assert_eq!(self.value(a).dim(), self.value(b).dim());
        let value = self.value(a) + self.value(b);
        self.push(value, Op::Add(a, b))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        debug_assert_eq!(self.value(a).dim(), self.value(b).dim());
        let value = self.value(a) - self.value(b);
        self.push(value, Op::Sub(a, b))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        debug_assert_eq!(self.value(a).dim(), self.value(b).dim());
        let value = self.value(a) * self.value(b);
        self.push(value, Op::Mul(a, b))
    }

    pub fn add_col_broadcast(&mut self, a: Var, bias: Var) -> Var {
        debug_assert_eq!(self.value(bias).ncols(), 1);
        debug_assert_eq!(self.value(a).nrows(), self.value(bias).nrows());
        let value = self.value(a) + &self.value(bias).broadcast(self.value(a).dim()).unwrap();
        self.push(value, Op::AddColBroadcast(a, bias))
    }

    pub fn mul_row_broadcast(&mut self, a: Var, row: Var) -> Var {
        debug_assert_eq!(self.value(row).nrows(), 1);
        debug_assert_eq!(self.value(a).ncols(), self.value(row).ncols());
        let value = self.value(a) * &self.value(row).broadcast(self.value(a).dim()).unwrap();
        self.push(value, Op::MulRowBroadcast(a, row))
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        let value = self.value(a) * c;
        self.push(value, Op::Scale(a, c))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let value = self.value(a).mapv(|x| 1.0 / (1.0 + (-x).exp()));
        self.push(value, Op::Sigmoid(a))
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let value = self.value(a).mapv(f64::tanh);
        self.push(value, Op::Tanh(a))
    }

    pub fn exp(&mut self, a: Var) -> Var {
        let value = self.value(a).mapv(f64::exp);
        self.push(value, Op::Exp(a))
    }

    pub fn ln(&mut self, a: Var) -> Var {
        let value = self.value(a).mapv(f64::ln);
        self.push(value, Op::Ln(a))
    }

    pub fn sqrt(&mut self, a: Var) -> Var {
        let value = self.value(a).mapv(f64::sqrt);
        self.push(value, Op::Sqrt(a))
    }

    pub fn leaky_relu(&mut self, a: Var, slope: f64) -> Var {
        let value = self.value(a).mapv(|x| if x > 0.0 { x } else { slope * x });
        self.push(value, Op::LeakyRelu(a, slope))
    }

    pub fn slice_rows(&mut self, a: Var, start: usize, end: usize) -> Var {
        let value = self.value(a).slice(s![start..end, ..]).to_owned();
        self.push(value, Op::SliceRows(a, start, end))
    }

    pub fn concat_rows(&mut self, parts: &[Var]) -> Var {
        let views: Vec<_> = parts.iter().map(|&v| self.value(v).view()).collect();
        let value = concatenate(Axis(0), &views).expect("row concat shapes");
        self.push(value, Op::ConcatRows(parts.to_vec()))
    }

    pub fn slice_cols(&mut self, a: Var, start: usize, end: usize) -> Var {
        let value = self.value(a).slice(s![.., start..end]).to_owned();
        self.push(value, Op::SliceCols(a, start, end))
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Var {
        let views: Vec<_> = parts.iter().map(|&v| self.value(v).view()).collect();
        let value = concatenate(Axis(1), &views).expect("col concat shapes");
        self.push(value, Op::ConcatCols(parts.to_vec()))
    }

    pub fn sum_all(&mut self, a: Var) -> Var {
        let value = Array2::from_elem((1, 1), self.value(a).sum());
        self.push(value, Op::SumAll(a))
    }

    pub fn sum_cols(&mut self, a: Var) -> Var {
        let value = self
            .value(a)
            .sum_axis(Axis(1))
            .into_shape_with_order((self.value(a).nrows(), 1))
            .unwrap();
        self.push(value, Op::SumCols(a))
    }

    pub fn sum_rows(&mut self, a: Var) -> Var {
        let value = self
            .value(a)
            .sum_axis(Axis(0))
            .into_shape_with_order((1, self.value(a).ncols()))
            .unwrap();
        self.push(value, Op::SumRows(a))
    }

    /// Row-wise softmax over unmasked entries (mask 1 = live, 0 = excluded).
    /// Fully masked rows yield all zeros.
    pub fn masked_softmax_rows(&mut self, a: Var, mask: Array2<f64>) -> Var {
        let x = self.value(a);
        debug_assert_eq!(x.dim(), mask.dim());
        let (n, m) = x.dim();
        let mut y = Array2::zeros((n, m));
        for r in 0..n {
            let mut max = f64::NEG_INFINITY;
            for c in 0..m {
                if mask[[r, c]] != 0.0 {
                    max = max.max(x[[r, c]]);
                }
            }
            if max == f64::NEG_INFINITY {
                continue;
            }
            let mut sum = 0.0;
            for c in 0..m {
                if mask[[r, c]] != 0.0 {
                    let e = (x[[r, c]] - max).exp();
                    y[[r, c]] = e;
                    sum += e;
                }
            }
            if sum > 0.0 {
                for c in 0..m {
                    y[[r, c]] /= sum;
                }
            }
        }
        self.push(y, Op::MaskedSoftmaxRows(a, mask))
    }

    /// Column-wise log-sum-exp: (n, m) -> (1, m).
    pub fn logsumexp_cols(&mut self, a: Var) -> Var {
        let x = self.value(a);
        let (n, m) = x.dim();
        let mut y = Array2::zeros((1, m));
        for c in 0..m {
            let mut max = f64::NEG_INFINITY;
            for r in 0..n {
                max = max.max(x[[r, c]]);
            }
            let sum: f64 = (0..n).map(|r| (x[[r, c]] - max).exp()).sum();
            y[[0, c]] = max + sum.ln();
        }
        self.push(y, Op::LogSumExpCols(a))
    }

    /// Backpropagate from a scalar output, returning per-node gradients.
    pub fn backward(&self, loss: Var) -> Grads {
        assert_eq!(
            self.value(loss).dim(),
            (1, 1),
            "backward expects a scalar loss"
        );
        let mut grads: Vec<Option<Array2<f64>>> = vec![None; self.nodes.len()];
        grads[loss.idx()] = Some(Array2::from_elem((1, 1), 1.0));

        for idx in (0..=loss.idx()).rev() {
            let Some(grad) = grads[idx].take() else {
                continue;
            };
            let accumulate = |grads: &mut Vec<Option<Array2<f64>>>, var: Var, g: Array2<f64>| {
                match &mut grads[var.idx()] {
                    Some(existing) => *existing += &g,
                    slot @ None => *slot = Some(g),
                }
            };
            match &self.nodes[idx].op {
                Op::Constant | Op::Param(_) => {
                    grads[idx] = Some(grad);
                    continue;
                }
                Op::MatMul(a, b) => {
                    let ga = grad.dot(&self.value(*b).t());
                    let gb = self.value(*a).t().dot(&grad);
                    accumulate(&mut grads, *a, ga);
                    accumulate(&mut grads, *b, gb);
                }
                Op::Transpose(a) => accumulate(&mut grads, *a, grad.t().to_owned()),
                Op::Reshape(a) => {
                    let dim = self.value(*a).dim();
                    accumulate(&mut grads, *a, grad.into_shape_with_order(dim).unwrap());
                }
                Op::Add(a, b) => {
                    accumulate(&mut grads, *a, grad.clone());
                    accumulate(&mut grads, *b, grad);
                }
                Op::Sub(a, b) => {
                    accumulate(&mut grads, *a, grad.clone());
                    accumulate(&mut grads, *b, -grad);
                }
                Op::Mul(a, b) => {
                    let ga = &grad * self.value(*b);
                    let gb = &grad * self.value(*a);
                    accumulate(&mut grads, *a, ga);
                    accumulate(&mut grads, *b, gb);
                }
                Op::AddColBroadcast(a, bias) => {
                    let gb = grad
                        .sum_axis(Axis(1))
                        .into_shape_with_order((grad.nrows(), 1))
                        .unwrap();
                    accumulate(&mut grads, *a, grad);
                    accumulate(&mut grads, *bias, gb);
                }
                Op::MulRowBroadcast(a, row) => {
                    let rv = self.value(*row);
                    let ga = &grad * &rv.broadcast(grad.dim()).unwrap();
                    let gr = (&grad * self.value(*a))
                        .sum_axis(Axis(0))
                        .into_shape_with_order((1, grad.ncols()))
                        .unwrap();
                    accumulate(&mut grads, *a, ga);
                    accumulate(&mut grads, *row, gr);
                }
                Op::Scale(a, c) => accumulate(&mut grads, *a, grad * *c),
                Op::Sigmoid(a) => {
                    let y = &self.nodes[idx].value;
                    accumulate(&mut grads, *a, &grad * &(y * &(1.0 - y)));
                }
                Op::Tanh(a) => {
                    let y = &self.nodes[idx].value;
                    accumulate(&mut grads, *a, &grad * &(1.0 - y * y));
                }
                Op::Exp(a) => {
                    let y = &self.nodes[idx].value;
                    accumulate(&mut grads, *a, &grad * y);
                }
                Op::Ln(a) => {
                    let ga = &grad / self.value(*a);
                    accumulate(&mut grads, *a, ga);
                }
                Op::Sqrt(a) => {
                    // Subgradient 0 where the input is exactly 0.
                    let y = &self.nodes[idx].value;
                    let ga = ndarray::Zip::from(&grad)
                        .and(y)
                        .map_collect(|&g, &yv| if yv > 0.0 { 0.5 * g / yv } else { 0.0 });
                    accumulate(&mut grads, *a, ga);
                }
                Op::LeakyRelu(a, slope) => {
                    let x = self.value(*a);
                    let ga = ndarray::Zip::from(&grad)
                        .and(x)
                        .map_collect(|&g, &xv| if xv > 0.0 { g } else { slope * g });
                    accumulate(&mut grads, *a, ga);
                }
                Op::SliceRows(a, start, _end) => {
                    let mut ga = Array2::zeros(self.value(*a).dim());
                    ga.slice_mut(s![*start..*start + grad.nrows(), ..])
                        .assign(&grad);
                    accumulate(&mut grads, *a, ga);
                }
                Op::ConcatRows(parts) => {
                    let mut offset = 0;
                    for part in parts {
                        let rows = self.value(*part).nrows();
                        let gp = grad.slice(s![offset..offset + rows, ..]).to_owned();
                        accumulate(&mut grads, *part, gp);
                        offset += rows;
                    }
                }
                Op::SliceCols(a, start, _end) => {
                    let mut ga = Array2::zeros(self.value(*a).dim());
                    ga.slice_mut(s![.., *start..*start + grad.ncols()])
                        .assign(&grad);
                    accumulate(&mut grads, *a, ga);
                }
                Op::ConcatCols(parts) => {
                    let mut offset = 0;
                    for part in parts {
                        let cols = self.value(*part).ncols();
                        let gp = grad.slice(s![.., offset..offset + cols]).to_owned();
                        accumulate(&mut grads, *part, gp);
                        offset += cols;
                    }
                }
                Op::SumAll(a) => {
                    let g = grad[[0, 0]];
                    accumulate(&mut grads, *a, Array2::from_elem(self.value(*a).dim(), g));
                }
                Op::SumCols(a) => {
                    let dim = self.value(*a).dim();
                    let ga = grad.broadcast(dim).unwrap().to_owned();
                    accumulate(&mut grads, *a, ga);
                }
                Op::SumRows(a) => {
                    let dim = self.value(*a).dim();
                    let ga = grad.broadcast(dim).unwrap().to_owned();
                    accumulate(&mut grads, *a, ga);
                }
                Op::MaskedSoftmaxRows(a, _mask) => {
                    let y = &self.nodes[idx].value;
                    let (n, m) = y.dim();
                    let mut ga = Array2::zeros((n, m));
                    for r in 0..n {
                        let mut dot = 0.0;
                        for c in 0..m {
                            dot += grad[[r, c]] * y[[r, c]];
                        }
                        for c in 0..m {
                            ga[[r, c]] = y[[r, c]] * (grad[[r, c]] - dot);
                        }
                    }
                    accumulate(&mut grads, *a, ga);
                }
                Op::LogSumExpCols(a) => {
                    let x = self.value(*a);
                    let y = &self.nodes[idx].value;
                    let (n, m) = x.dim();
                    let mut ga = Array2::zeros((n, m));
                    for c in 0..m {
                        for r in 0..n {
                            ga[[r, c]] = (x[[r, c]] - y[[0, c]]).exp() * grad[[0, c]];
                        }
                    }
                    accumulate(&mut grads, *a, ga);
                }
            }
        }
        Grads { by_node: grads }
    }
}
