use crate::scalar::Scalar;

use super::tensor::{matmul_strided, Tensor};
use super::AutodiffError;

/// Handle to a node recorded in a [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Op<T> {
    Leaf,
    MatMul(Var, Var),
    Transpose(Var),
    Add(Var, Var),
    AddRow(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Scale(Var, T),
    AddScalar(Var, T),
    Concat(Vec<Var>),
    SliceCols(Var, usize),
    BroadcastRows(Var),
    Relu(Var),
    LeakyRelu(Var, T),
    Tanh(Var),
    Softmax(Var),
    LogSoftmax(Var),
    Mean(Var),
    Sum(Var),
    SumRows(Var),
    Abs(Var),
    Square(Var),
    Sqrt(Var),
    StraightThrough(Var),
}

impl<T> Op<T> {
    fn name(&self) -> &'static str {
        match self {
            Op::Leaf => "leaf",
            Op::MatMul(..) => "matmul",
            Op::Transpose(..) => "transpose",
            Op::Add(..) => "add",
            Op::AddRow(..) => "add_row",
            Op::Sub(..) => "sub",
            Op::Mul(..) => "mul",
            Op::Scale(..) => "scale",
            Op::AddScalar(..) => "add_scalar",
            Op::Concat(..) => "concat",
            Op::SliceCols(..) => "slice_cols",
            Op::BroadcastRows(..) => "broadcast_rows",
            Op::Relu(..) => "relu",
            Op::LeakyRelu(..) => "leaky_relu",
            Op::Tanh(..) => "tanh",
            Op::Softmax(..) => "softmax",
            Op::LogSoftmax(..) => "log_softmax",
            Op::Mean(..) => "mean",
            Op::Sum(..) => "sum",
            Op::SumRows(..) => "sum_rows",
            Op::Abs(..) => "abs",
            Op::Square(..) => "square",
            Op::Sqrt(..) => "sqrt",
            Op::StraightThrough(..) => "straight_through",
        }
    }

    fn parents(&self) -> Vec<Var> {
        match self {
            Op::Leaf => vec![],
            Op::MatMul(a, b) | Op::Add(a, b) | Op::AddRow(a, b) | Op::Sub(a, b) | Op::Mul(a, b) => {
                vec![*a, *b]
            }
            Op::Concat(vs) => vs.clone(),
            Op::Transpose(a)
            | Op::Scale(a, _)
            | Op::AddScalar(a, _)
            | Op::SliceCols(a, _)
            | Op::BroadcastRows(a)
            | Op::Relu(a)
            | Op::LeakyRelu(a, _)
            | Op::Tanh(a)
            | Op::Softmax(a)
            | Op::LogSoftmax(a)
            | Op::Mean(a)
            | Op::Sum(a)
            | Op::SumRows(a)
            | Op::Abs(a)
            | Op::Square(a)
            | Op::Sqrt(a)
            | Op::StraightThrough(a) => vec![*a],
        }
    }
}

#[derive(Clone, Debug)]
struct Node<T> {
    op: Op<T>,
    value: Tensor<T>,
    requires_grad: bool,
}

/// Tape of tensor operations supporting one reverse sweep per root.
///
/// Nodes are appended in evaluation order, so every parent id is smaller
/// than its child's id and the recorded graph is acyclic.
#[derive(Clone, Debug, Default)]
pub struct Graph<T> {
    nodes: Vec<Node<T>>,
}

/// Result of [`Graph::backward`]: one gradient slot per node.
#[derive(Clone, Debug)]
pub struct Gradients<T> {
    slots: Vec<Option<Tensor<T>>>,
    shapes: Vec<[usize; 2]>,
}

impl<T: Scalar> Gradients<T> {
    /// `∂root/∂var`; exactly zero when `var` does not influence the root.
    pub fn wrt(&self, var: Var) -> Tensor<T> {
        match &self.slots[var.0] {
            Some(g) => g.clone(),
            None => {
                let [r, c] = self.shapes[var.0];
                Tensor::zeros(r, c)
            }
        }
    }

    pub fn take(&mut self, var: Var) -> Tensor<T> {
        match self.slots[var.0].take() {
            Some(g) => g,
            None => {
                let [r, c] = self.shapes[var.0];
                Tensor::zeros(r, c)
            }
        }
    }
}

type OpResult = Result<Var, AutodiffError>;

impl<T: Scalar> Graph<T> {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Leaf that receives a gradient.
    pub fn param(&mut self, value: Tensor<T>) -> Var {
        self.push_unchecked(Op::Leaf, value, true)
    }

    /// Leaf treated as a constant.
    pub fn constant(&mut self, value: Tensor<T>) -> Var {
        self.push_unchecked(Op::Leaf, value, false)
    }

    pub fn value(&self, v: Var) -> &Tensor<T> {
        &self.nodes[v.0].value
    }

    pub fn shape(&self, v: Var) -> [usize; 2] {
        self.nodes[v.0].value.shape()
    }

    pub fn requires_grad(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    fn push_unchecked(&mut self, op: Op<T>, value: Tensor<T>, requires_grad: bool) -> Var {
        self.nodes.push(Node {
            op,
            value,
            requires_grad,
        });
        Var(self.nodes.len() - 1)
    }

    fn push(&mut self, op: Op<T>, value: Tensor<T>) -> OpResult {
        if !value.is_finite() {
            return Err(AutodiffError::NonFinite { op: op.name() });
        }
        let requires_grad = op.parents().iter().any(|p| self.nodes[p.0].requires_grad);
        Ok(self.push_unchecked(op, value, requires_grad))
    }

    fn same_shape(&self, op: &'static str, a: Var, b: Var) -> Result<(), AutodiffError> {
        let (sa, sb) = (self.shape(a), self.shape(b));
        if sa != sb {
            return Err(AutodiffError::ShapeMismatch {
                op,
                left: sa,
                right: sb,
            });
        }
        Ok(())
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> OpResult {
        let v = self.value(a).matmul(self.value(b))?;
        self.push(Op::MatMul(a, b), v)
    }

    pub fn transpose(&mut self, a: Var) -> OpResult {
        let v = self.value(a).transpose();
        self.push(Op::Transpose(a), v)
    }

    pub fn add(&mut self, a: Var, b: Var) -> OpResult {
        self.same_shape("add", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x + y);
        self.push(Op::Add(a, b), v)
    }

    /// Adds a `1×n` row to every row of an `m×n` tensor.
    pub fn add_row(&mut self, a: Var, row: Var) -> OpResult {
        let [m, n] = self.shape(a);
        let rs = self.shape(row);
        if rs != [1, n] {
            return Err(AutodiffError::ShapeMismatch {
                op: "add_row",
                left: [m, n],
                right: rs,
            });
        }
        let av = self.value(a);
        let rv = self.value(row);
        let v = Tensor::from_fn(m, n, |r, c| av.get(r, c) + rv.get(0, c));
        self.push(Op::AddRow(a, row), v)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> OpResult {
        self.same_shape("sub", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x - y);
        self.push(Op::Sub(a, b), v)
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: Var, b: Var) -> OpResult {
        self.same_shape("mul", a, b)?;
        let v = self.value(a).zip_map(self.value(b), |x, y| x * y);
        self.push(Op::Mul(a, b), v)
    }

    pub fn scale(&mut self, a: Var, k: T) -> OpResult {
        let v = self.value(a).map(|x| x * k);
        self.push(Op::Scale(a, k), v)
    }

    pub fn add_scalar(&mut self, a: Var, k: T) -> OpResult {
        let v = self.value(a).map(|x| x + k);
        self.push(Op::AddScalar(a, k), v)
    }

    /// Column-wise concatenation.
    pub fn concat(&mut self, parts: &[Var]) -> OpResult {
        let Some(&first) = parts.first() else {
            return Err(AutodiffError::EmptyConcat);
        };
        let rows = self.shape(first)[0];
        for &p in parts {
            let s = self.shape(p);
            if s[0] != rows {
                return Err(AutodiffError::ShapeMismatch {
                    op: "concat",
                    left: self.shape(first),
                    right: s,
                });
            }
        }
        let width: usize = parts.iter().map(|&p| self.shape(p)[1]).sum();
        let mut data = Vec::with_capacity(rows * width);
        for r in 0..rows {
            for &p in parts {
                data.extend_from_slice(self.value(p).row(r));
            }
        }
        let v = Tensor::new(rows, width, data)?;
        self.push(Op::Concat(parts.to_vec()), v)
    }

    /// Columns `start..end`.
    pub fn slice_cols(&mut self, a: Var, start: usize, end: usize) -> OpResult {
        let [m, n] = self.shape(a);
        if start > end || end > n {
            return Err(AutodiffError::ShapeMismatch {
                op: "slice_cols",
                left: [m, n],
                right: [start, end],
            });
        }
        let v = self.value(a).slice_cols(start, end);
        self.push(Op::SliceCols(a, start), v)
    }

    /// Repeats a `1×n` row `rows` times.
    pub fn broadcast_rows(&mut self, a: Var, rows: usize) -> OpResult {
        let [r, n] = self.shape(a);
        if r != 1 {
            return Err(AutodiffError::ShapeMismatch {
                op: "broadcast_rows",
                left: [r, n],
                right: [1, n],
            });
        }
        let row = self.value(a).row(0).to_vec();
        let v = Tensor::from_fn(rows, n, |_, c| row[c]);
        self.push(Op::BroadcastRows(a), v)
    }

    pub fn relu(&mut self, a: Var) -> OpResult {
        let v = self.value(a).map(|x| if x > T::zero() { x } else { T::zero() });
        self.push(Op::Relu(a), v)
    }

    pub fn leaky_relu(&mut self, a: Var, slope: T) -> OpResult {
        let v = self
            .value(a)
            .map(|x| if x > T::zero() { x } else { x * slope });
        self.push(Op::LeakyRelu(a, slope), v)
    }

    pub fn tanh(&mut self, a: Var) -> OpResult {
        let v = self.value(a).map(|x| x.tanh());
        self.push(Op::Tanh(a), v)
    }

    /// Row-wise softmax with max subtraction.
    pub fn softmax(&mut self, a: Var) -> OpResult {
        let v = softmax_rows(self.value(a));
        self.push(Op::Softmax(a), v)
    }

    /// Row-wise log-softmax.
    pub fn log_softmax(&mut self, a: Var) -> OpResult {
        let x = self.value(a);
        let [m, n] = x.shape();
        let mut out = Tensor::zeros(m, n);
        for r in 0..m {
            let row = x.row(r);
            let max = row.iter().copied().fold(T::neg_infinity(), T::max);
            let lse = row.iter().map(|&v| (v - max).exp()).sum::<T>().ln() + max;
            for c in 0..n {
                out.set(r, c, row[c] - lse);
            }
        }
        self.push(Op::LogSoftmax(a), out)
    }

    pub fn mean(&mut self, a: Var) -> OpResult {
        let x = self.value(a);
        if x.is_empty() {
            return Err(AutodiffError::EmptyReduction);
        }
        let n = T::from_usize(x.len()).expect("length fits in scalar");
        let v = Tensor::scalar(x.sum() / n);
        self.push(Op::Mean(a), v)
    }

    pub fn sum(&mut self, a: Var) -> OpResult {
        let v = Tensor::scalar(self.value(a).sum());
        self.push(Op::Sum(a), v)
    }

    /// `[m,n] → [m,1]`.
    pub fn sum_rows(&mut self, a: Var) -> OpResult {
        let x = self.value(a);
        let v = Tensor::from_fn(x.rows(), 1, |r, _| x.row(r).iter().copied().sum());
        self.push(Op::SumRows(a), v)
    }

    pub fn abs(&mut self, a: Var) -> OpResult {
        let v = self.value(a).map(|x| x.abs());
        self.push(Op::Abs(a), v)
    }

    pub fn square(&mut self, a: Var) -> OpResult {
        let v = self.value(a).map(|x| x * x);
        self.push(Op::Square(a), v)
    }

    /// Square root; the derivative at exactly 0 is taken as 0.
    pub fn sqrt(&mut self, a: Var) -> OpResult {
        let v = self.value(a).map(|x| x.sqrt());
        self.push(Op::Sqrt(a), v)
    }

    /// Forward value `hard`, backward identity into `soft`.
    pub fn straight_through(&mut self, soft: Var, hard: Tensor<T>) -> OpResult {
        if hard.shape() != self.shape(soft) {
            return Err(AutodiffError::ShapeMismatch {
                op: "straight_through",
                left: self.shape(soft),
                right: hard.shape(),
            });
        }
        self.push(Op::StraightThrough(soft), hard)
    }

    /// Smallest `|x|` over the inputs of every non-differentiable point
    /// (ReLU, LeakyReLU, abs) recorded so far; `None` if there are none.
    pub fn min_kink_distance(&self) -> Option<T> {
        let mut best: Option<T> = None;
        for node in &self.nodes {
            let input = match &node.op {
                Op::Relu(a) | Op::LeakyRelu(a, _) | Op::Abs(a) => *a,
                _ => continue,
            };
            for &x in self.nodes[input.0].value.data() {
                let d = x.abs();
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
            }
        }
        best
    }

    /// Sign of every kink input recorded so far, in node order. Two graphs
    /// with equal patterns lie on the same linear piece.
    pub fn activation_pattern(&self) -> Vec<bool> {
        let mut out = Vec::new();
        for node in &self.nodes {
            if let Op::Relu(a) | Op::LeakyRelu(a, _) | Op::Abs(a) = &node.op {
                out.extend(self.nodes[a.0].value.data().iter().map(|&x| x > T::zero()));
            }
        }
        out
    }

    /// Reverse sweep from a scalar root.
    pub fn backward(&self, root: Var) -> Result<Gradients<T>, AutodiffError> {
        let shape = self.shape(root);
        if shape != [1, 1] {
            return Err(AutodiffError::NonScalarRoot { shape });
        }
        let mut slots: Vec<Option<Tensor<T>>> = vec![None; root.0 + 1];
        slots[root.0] = Some(Tensor::scalar(T::one()));

        for id in (0..=root.0).rev() {
            let node = &self.nodes[id];
            if !node.requires_grad {
                continue;
            }
            let Some(upstream) = slots[id].take() else {
                continue;
            };
            for p in node.op.parents() {
                if p.0 >= id {
                    return Err(AutodiffError::Cycle { node: id });
                }
            }
            self.propagate(id, &upstream, &mut slots)?;
            slots[id] = Some(upstream);
        }

        slots.resize(self.nodes.len(), None);
        let shapes = self.nodes.iter().map(|n| n.value.shape()).collect();
        Ok(Gradients { slots, shapes })
    }

    fn accumulate(&self, slots: &mut [Option<Tensor<T>>], target: Var, grad: Tensor<T>) {
        if !self.nodes[target.0].requires_grad {
            return;
        }
        match &mut slots[target.0] {
            Some(existing) => existing.add_assign(&grad),
            slot @ None => *slot = Some(grad),
        }
    }

    fn propagate(
        &self,
        id: usize,
        up: &Tensor<T>,
        slots: &mut [Option<Tensor<T>>],
    ) -> Result<(), AutodiffError> {
        let node = &self.nodes[id];
        let zero = T::zero();
        match &node.op {
            Op::Leaf => {}
            Op::MatMul(a, b) => {
                if self.requires_grad(*a) {
                    let g = matmul_strided(up, false, self.value(*b), true)?;
                    self.accumulate(slots, *a, g);
                }
                if self.requires_grad(*b) {
                    let g = matmul_strided(self.value(*a), true, up, false)?;
                    self.accumulate(slots, *b, g);
                }
            }
            Op::Transpose(a) => self.accumulate(slots, *a, up.transpose()),
            Op::Add(a, b) => {
                self.accumulate(slots, *a, up.clone());
                self.accumulate(slots, *b, up.clone());
            }
            Op::AddRow(a, row) => {
                self.accumulate(slots, *a, up.clone());
                let [m, n] = up.shape();
                let g = Tensor::from_fn(1, n, |_, c| (0..m).map(|r| up.get(r, c)).sum());
                self.accumulate(slots, *row, g);
            }
            Op::Sub(a, b) => {
                self.accumulate(slots, *a, up.clone());
                self.accumulate(slots, *b, up.map(|x| -x));
            }
            Op::Mul(a, b) => {
                let (va, vb) = (self.value(*a), self.value(*b));
                if self.requires_grad(*a) {
                    self.accumulate(slots, *a, up.zip_map(vb, |u, y| u * y));
                }
                if self.requires_grad(*b) {
                    self.accumulate(slots, *b, up.zip_map(va, |u, x| u * x));
                }
            }
            Op::Scale(a, k) => {
                let k = *k;
                self.accumulate(slots, *a, up.map(|u| u * k));
            }
            Op::AddScalar(a, _) => self.accumulate(slots, *a, up.clone()),
            Op::Concat(parts) => {
                let mut offset = 0;
                for &p in parts {
                    let w = self.shape(p)[1];
                    self.accumulate(slots, p, up.slice_cols(offset, offset + w));
                    offset += w;
                }
            }
            Op::SliceCols(a, start) => {
                let [m, n] = self.shape(*a);
                let w = up.cols();
                let start = *start;
                let g = Tensor::from_fn(m, n, |r, c| {
                    if c >= start && c < start + w {
                        up.get(r, c - start)
                    } else {
                        zero
                    }
                });
                self.accumulate(slots, *a, g);
            }
            Op::BroadcastRows(a) => {
                let [m, n] = up.shape();
                let g = Tensor::from_fn(1, n, |_, c| (0..m).map(|r| up.get(r, c)).sum());
                self.accumulate(slots, *a, g);
            }
            Op::Relu(a) => {
                let g = up.zip_map(self.value(*a), |u, x| if x > zero { u } else { zero });
                self.accumulate(slots, *a, g);
            }
            Op::LeakyRelu(a, slope) => {
                let s = *slope;
                let g = up.zip_map(self.value(*a), |u, x| if x > zero { u } else { u * s });
                self.accumulate(slots, *a, g);
            }
            Op::Tanh(a) => {
                let g = up.zip_map(&node.value, |u, y| u * (T::one() - y * y));
                self.accumulate(slots, *a, g);
            }
            Op::Softmax(a) => {
                let y = &node.value;
                let [m, n] = y.shape();
                let mut g = Tensor::zeros(m, n);
                for r in 0..m {
                    let dot: T = (0..n).map(|c| up.get(r, c) * y.get(r, c)).sum();
                    for c in 0..n {
                        g.set(r, c, y.get(r, c) * (up.get(r, c) - dot));
                    }
                }
                self.accumulate(slots, *a, g);
            }
            Op::LogSoftmax(a) => {
                let y = &node.value;
                let [m, n] = y.shape();
                let mut g = Tensor::zeros(m, n);
                for r in 0..m {
                    let total: T = (0..n).map(|c| up.get(r, c)).sum();
                    for c in 0..n {
                        g.set(r, c, up.get(r, c) - y.get(r, c).exp() * total);
                    }
                }
                self.accumulate(slots, *a, g);
            }
            Op::Mean(a) => {
                let [m, n] = self.shape(*a);
                let k = up.item() / T::from_usize(m * n).expect("length fits in scalar");
                self.accumulate(slots, *a, Tensor::full(m, n, k));
            }
            Op::Sum(a) => {
                let [m, n] = self.shape(*a);
                self.accumulate(slots, *a, Tensor::full(m, n, up.item()));
            }
            Op::SumRows(a) => {
                let [m, n] = self.shape(*a);
                self.accumulate(slots, *a, Tensor::from_fn(m, n, |r, _| up.get(r, 0)));
            }
            Op::Abs(a) => {
                let g = up.zip_map(self.value(*a), |u, x| {
                    if x > zero {
                        u
                    } else if x < zero {
                        -u
                    } else {
                        zero
                    }
                });
                self.accumulate(slots, *a, g);
            }
            Op::Square(a) => {
                let two = T::one() + T::one();
                let g = up.zip_map(self.value(*a), |u, x| two * x * u);
                self.accumulate(slots, *a, g);
            }
            Op::Sqrt(a) => {
                let half = T::from_f64_lossy(0.5);
                let g = up.zip_map(&node.value, |u, y| if y > zero { u * half / y } else { zero });
                self.accumulate(slots, *a, g);
            }
            Op::StraightThrough(soft) => self.accumulate(slots, *soft, up.clone()),
        }
        Ok(())
    }
}

pub(crate) fn softmax_rows<T: Scalar>(x: &Tensor<T>) -> Tensor<T> {
    let [m, n] = x.shape();
    let mut out = Tensor::zeros(m, n);
    for r in 0..m {
        let row = x.row(r);
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let exps: Vec<T> = row.iter().map(|&v| (v - max).exp()).collect();
        let total: T = exps.iter().copied().sum();
        for (c, e) in exps.into_iter().enumerate() {
            out.set(r, c, e / total);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: usize, cols: usize, v: &[f64]) -> Tensor<f64> {
        Tensor::new(rows, cols, v.to_vec()).unwrap()
    }

    #[test]
    fn square_gradient_at_three() {
        let mut g = Graph::new();
        let x = g.param(Tensor::scalar(3.0));
        let y = g.square(x).unwrap();
        let grads = g.backward(y).unwrap();
        assert_eq!(grads.wrt(x).item(), 6.0);
    }

    #[test]
    fn disconnected_leaf_has_exact_zero_gradient() {
        let mut g = Graph::new();
        let x = g.param(t(1, 2, &[1.0, 2.0]));
        let w = g.param(t(2, 2, &[1.0, 2.0, 3.0, 4.0]));
        let y = g.sum(x).unwrap();
        let grads = g.backward(y).unwrap();
        assert!(grads.wrt(w).data().iter().all(|&v| v == 0.0));
        assert_eq!(grads.wrt(x).data(), &[1.0, 1.0]);
    }

    #[test]
    fn leaky_relu_uses_slope_on_negatives() {
        let mut g = Graph::new();
        let x = g.constant(t(1, 2, &[-1.0, 2.0]));
        let y = g.leaky_relu(x, 0.01).unwrap();
        assert_eq!(g.value(y).data(), &[-0.01, 2.0]);
    }

    #[test]
    fn relu_definition() {
        let mut g = Graph::new();
        let x = g.constant(t(1, 3, &[-3.0, 0.0, 5.0]));
        let y = g.relu(x).unwrap();
        assert_eq!(g.value(y).data(), &[0.0, 0.0, 5.0]);
    }

    #[test]
    fn non_scalar_root_is_rejected() {
        let mut g = Graph::new();
        let x = g.param(t(1, 2, &[1.0, 2.0]));
        assert!(matches!(
            g.backward(x),
            Err(AutodiffError::NonScalarRoot { shape: [1, 2] })
        ));
    }

    #[test]
    fn non_finite_values_are_errors() {
        let mut g = Graph::new();
        let x = g.constant(t(1, 1, &[-1.0]));
        assert!(matches!(
            g.sqrt(x),
            Err(AutodiffError::NonFinite { op: "sqrt" })
        ));
    }

    #[test]
    fn softmax_is_stable_for_large_logits() {
        let mut g = Graph::<f64>::new();
        let x = g.constant(t(1, 2, &[1000.0, 0.0]));
        let y = g.softmax(x).unwrap();
        assert_eq!(g.value(y).data(), &[1.0, 0.0]);
    }

    #[test]
    fn shared_subexpression_accumulates() {
        // y = x*x + x  → dy/dx = 2x + 1
        let mut g = Graph::new();
        let x = g.param(Tensor::scalar(2.0));
        let sq = g.mul(x, x).unwrap();
        let y = g.add(sq, x).unwrap();
        assert_eq!(g.backward(y).unwrap().wrt(x).item(), 5.0);
    }

    #[test]
    fn straight_through_passes_gradient_to_soft_branch() {
        let mut g = Graph::new();
        let x = g.param(t(1, 2, &[0.3, 0.7]));
        let y = g.straight_through(x, t(1, 2, &[0.0, 1.0])).unwrap();
        assert_eq!(g.value(y).data(), &[0.0, 1.0]);
        let w = g.constant(t(1, 2, &[2.0, 5.0]));
        let p = g.mul(y, w).unwrap();
        let s = g.sum(p).unwrap();
        assert_eq!(g.backward(s).unwrap().wrt(x).data(), &[2.0, 5.0]);
    }

    #[test]
    fn kink_distance_tracks_relu_inputs() {
        let mut g = Graph::new();
        let x = g.constant(t(1, 3, &[-0.5, 0.25, 2.0]));
        assert!(g.min_kink_distance().is_none());
        g.relu(x).unwrap();
        assert_eq!(g.min_kink_distance(), Some(0.25));
    }
}
