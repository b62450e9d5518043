//! Dense feed-forward networks.
//!
//! A network of architecture `(L, p)` maps `R^{p_0} -> R` through `L` hidden
//! layers. Its parameters live in one flat vector laid out as
//! `(vec(W_1), b_1, ..., vec(W_{L+1}), b_{L+1})`, where `W_j` is the
//! `p_j x p_{j-1}` weight matrix stored column by column.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::loss::Loss;

/// Element-wise activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    LeakyRelu,
    Sigmoid,
    Tanh,
    Softplus,
    Identity,
}

const LEAKY_SLOPE: f64 = 0.01;

impl Activation {
    pub const ALL: [Activation; 6] = [
        Activation::Relu,
        Activation::LeakyRelu,
        Activation::Sigmoid,
        Activation::Tanh,
        Activation::Softplus,
        Activation::Identity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::LeakyRelu => "leaky_relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::Softplus => "softplus",
            Activation::Identity => "identity",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.id() == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown activation `{id}`")))
    }

    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::LeakyRelu => {
                if x > 0.0 {
                    x
                } else {
                    LEAKY_SLOPE * x
                }
            }
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Tanh => x.tanh(),
            Activation::Softplus => x.max(0.0) + (-x.abs()).exp().ln_1p(),
            Activation::Identity => x,
        }
    }

    /// Derivative, taking the left derivative at kinks (so ReLU'(0) = 0).
    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if x > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Sigmoid => {
                let s = self.eval(x);
                s * (1.0 - s)
            }
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            Activation::Softplus => Activation::Sigmoid.eval(x),
            Activation::Identity => 1.0,
        }
    }

    /// Lipschitz constant `C_sigma`.
    pub fn lipschitz(self) -> f64 {
        match self {
            Activation::Sigmoid => 0.25,
            _ => 1.0,
        }
    }

    /// Whether `sigma(z) = z` (to 1e-12) on a uniform grid over `[a, b]`.
    pub fn fixes_segment(self, a: f64, b: f64, grid: usize) -> Result<bool> {
        if !(0.0 <= a && a < b && b <= 1.0) || grid < 2 {
            return Err(Error::InvalidArgument(format!(
                "segment [{a}, {b}] with {grid} points is not a proper subinterval of [0, 1]"
            )));
        }
        let step = (b - a) / (grid - 1) as f64;
        Ok((0..grid).all(|k| {
            let z = a + step * k as f64;
            (self.eval(z) - z).abs() <= 1e-12
        }))
    }
}

/// Free-function form of [`Activation::fixes_segment`].
pub fn check_fixed_segment(activation: Activation, a: f64, b: f64, grid: usize) -> Result<bool> {
    activation.fixes_segment(a, b, grid)
}

/// Depth and width vector `p = (p_0, ..., p_{L+1})` with `p_{L+1} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    widths: Vec<usize>,
    activation: Activation,
}

impl Architecture {
    pub fn new(widths: Vec<usize>, activation: Activation) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::Architecture("need at least input and output widths".into()));
        }
        if widths.iter().any(|&w| w == 0) {
            return Err(Error::Architecture(format!("zero width in {widths:?}")));
        }
        if *widths.last().unwrap() != 1 {
            return Err(Error::Architecture(format!("output width must be 1, got {widths:?}")));
        }
        Ok(Self { widths, activation })
    }

    /// `depth` hidden layers of equal `width`.
    pub fn dense(input_dim: usize, depth: usize, width: usize, activation: Activation) -> Result<Self> {
        let mut widths = vec![input_dim];
        widths.extend(std::iter::repeat_n(width, depth));
        widths.push(1);
        Self::new(widths, activation)
    }

    pub fn depth(&self) -> usize {
        self.widths.len() - 2
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Largest hidden width, 0 when there is no hidden layer.
    pub fn width(&self) -> usize {
        self.widths[1..self.widths.len() - 1].iter().copied().max().unwrap_or(0)
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn param_count(&self) -> usize {
        param_count_of(&self.widths)
    }
}

pub fn param_count(arch: &Architecture) -> usize {
    arch.param_count()
}

fn param_count_of(widths: &[usize]) -> usize {
    widths.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
}

/// One affine map `x -> W x + b`, with `W` given as rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn shape(&self) -> Result<(usize, usize)> {
        let rows = self.weights.len();
        let cols = self.weights.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("empty weight matrix".into()));
        }
        if self.weights.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged weight matrix".into()));
        }
        if self.bias.len() != rows {
            return Err(Error::Shape(format!("bias of length {} for {} rows", self.bias.len(), rows)));
        }
        Ok((rows, cols))
    }
}

/// Flattens layers into the parameter vector (column-major weights, then bias).
pub fn vectorize(layers: &[Layer]) -> Result<Vec<f64>> {
    let mut theta = Vec::new();
    let mut prev_rows: Option<usize> = None;
    for (j, layer) in layers.iter().enumerate() {
        let (rows, cols) = layer.shape()?;
        if let Some(p) = prev_rows {
            if p != cols {
                return Err(Error::Shape(format!(
                    "layer {} expects {} inputs but layer {} has {} outputs",
                    j + 1,
                    cols,
                    j,
                    p
                )));
            }
        }
        for c in 0..cols {
            theta.extend(layer.weights.iter().map(|row| row[c]));
        }
        theta.extend_from_slice(&layer.bias);
        prev_rows = Some(rows);
    }
    Ok(theta)
}

/// Inverse of [`vectorize`] for the width vector `widths`.
pub fn devectorize(theta: &[f64], widths: &[usize]) -> Result<Vec<Layer>> {
    let expected = param_count_of(widths);
    if theta.len() != expected {
        return Err(Error::Shape(format!("theta has length {}, architecture needs {}", theta.len(), expected)));
    }
    let mut off = 0;
    let layers = widths
        .windows(2)
        .map(|w| {
            let (cols, rows) = (w[0], w[1]);
            let block = &theta[off..off + rows * cols];
            let weights = (0..rows).map(|r| (0..cols).map(|c| block[c * rows + r]).collect()).collect();
            let bias = theta[off + rows * cols..off + rows * (cols + 1)].to_vec();
            off += rows * (cols + 1);
            Layer { weights, bias }
        })
        .collect();
    Ok(layers)
}

/// Bounds defining `H_sigma(L, N, B, F[, S])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassConstraints {
    pub max_width: usize,
    pub param_bound: f64,
    pub output_bound: f64,
    pub sparsity: Option<usize>,
}

impl ClassConstraints {
    pub fn new(max_width: usize, param_bound: f64, output_bound: f64, sparsity: Option<usize>) -> Result<Self> {
        if max_width == 0 || !(param_bound > 0.0) || !(output_bound > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "constraints need N >= 1, B > 0, F > 0 (got N={max_width}, B={param_bound}, F={output_bound})"
            )));
        }
        Ok(Self { max_width, param_bound, output_bound, sparsity })
    }

    /// Checks the parameter-side constraints (width, sup-norm, sparsity).
    /// The output bound is enforced by clamping at evaluation time.
    pub fn admits(&self, params: &NetworkParams) -> bool {
        params.arch.width() <= self.max_width
            && sup_norm(&params.theta) <= self.param_bound
            && self.sparsity.is_none_or(|s| count_nonzero(&params.theta) <= s)
    }
}

pub fn sup_norm(theta: &[f64]) -> f64 {
    theta.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn count_nonzero(theta: &[f64]) -> usize {
    theta.iter().filter(|v| **v != 0.0).count()
}

/// An architecture together with its parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    arch: Architecture,
    theta: Vec<f64>,
}

impl NetworkParams {
    pub fn new(arch: Architecture, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != arch.param_count() {
            return Err(Error::Shape(format!(
                "theta has length {}, architecture needs {}",
                theta.len(),
                arch.param_count()
            )));
        }
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("theta has non-finite entries".into()));
        }
        Ok(Self { arch, theta })
    }

    pub fn zeros(arch: Architecture) -> Self {
        let theta = vec![0.0; arch.param_count()];
        Self { arch, theta }
    }

    pub fn from_layers(layers: &[Layer], activation: Activation) -> Result<Self> {
        let theta = vectorize(layers)?;
        let mut widths = vec![layers.first().ok_or_else(|| Error::Shape("no layers".into()))?.shape()?.1];
        widths.extend(layers.iter().map(|l| l.weights.len()));
        Self::new(Architecture::new(widths, activation)?, theta)
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_theta(self) -> Vec<f64> {
        self.theta
    }

    pub fn layers(&self) -> Vec<Layer> {
        devectorize(&self.theta, self.arch.widths()).expect("length checked at construction")
    }

    /// Evaluates the network at `x`, clamping the output to `[-F, F]` when given.
    pub fn forward(&self, x: &[f64], clamp: Option<f64>) -> Result<f64> {
        if x.len() != self.arch.input_dim() {
            return Err(Error::Dimension { expected: self.arch.input_dim(), got: x.len() });
        }
        let mut ws = Workspace::new(&self.arch);
        let raw = ws.forward(&self.arch, &self.theta, x)?;
        Ok(apply_clamp(raw, clamp))
    }

    /// Mean loss over `data` and its gradient with respect to `theta`.
    pub fn loss_and_gradient(&self, data: &Dataset, loss: &Loss, clamp: Option<f64>) -> Result<(f64, Vec<f64>)> {
        check_dims(&self.arch, data)?;
        let mut ws = Workspace::new(&self.arch);
        let mut grad = vec![0.0; self.theta.len()];
        let value = ws.loss_and_gradient(&self.arch, &self.theta, data, 0..data.len(), loss, clamp, &mut grad)?;
        Ok((value, grad))
    }
}

/// Gradient of the mean loss over `data` with respect to the flat parameters.
pub fn grad(params: &NetworkParams, data: &Dataset, loss: &Loss, clamp: Option<f64>) -> Result<Vec<f64>> {
    params.loss_and_gradient(data, loss, clamp).map(|(_, g)| g)
}

/// Clips to `[-B, B]`, then keeps the `S` largest magnitudes (lowest index wins ties).
pub fn project_class(params: &NetworkParams, constraints: &ClassConstraints) -> NetworkParams {
    let mut theta = params.theta.clone();
    project_in_place(&mut theta, constraints.param_bound, constraints.sparsity);
    NetworkParams { arch: params.arch.clone(), theta }
}

pub(crate) fn project_in_place(theta: &mut [f64], bound: f64, sparsity: Option<usize>) {
    for v in theta.iter_mut() {
        *v = v.clamp(-bound, bound);
    }
    let Some(s) = sparsity else { return };
    if count_nonzero(theta) <= s {
        return;
    }
    let mut order: Vec<usize> = (0..theta.len()).collect();
    let by_rank = |a: &usize, b: &usize| {
        theta[*b].abs().total_cmp(&theta[*a].abs()).then(a.cmp(b))
    };
    if s > 0 {
        order.select_nth_unstable_by(s - 1, by_rank);
    }
    for &i in &order[s..] {
        theta[i] = 0.0;
    }
}

#[inline]
pub(crate) fn apply_clamp(raw: f64, clamp: Option<f64>) -> f64 {
    match clamp {
        Some(f) => raw.clamp(-f, f),
        None => raw,
    }
}

fn check_dims(arch: &Architecture, data: &Dataset) -> Result<()> {
    if data.dim() != arch.input_dim() {
        return Err(Error::Dimension { expected: arch.input_dim(), got: data.dim() });
    }
    Ok(())
}

/// Reusable buffers for forward and reverse passes.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
    delta: Vec<f64>,
    delta_prev: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(arch: &Architecture) -> Self {
        let w = arch.widths();
        let max = w.iter().copied().max().unwrap_or(1);
        Self {
            pre: w[1..].iter().map(|&k| vec![0.0; k]).collect(),
            post: w[..w.len() - 1].iter().map(|&k| vec![0.0; k]).collect(),
            delta: vec![0.0; max],
            delta_prev: vec![0.0; max],
        }
    }

    /// Unclamped output; caches pre- and post-activations for `backward`.
    pub(crate) fn forward(&mut self, arch: &Architecture, theta: &[f64], x: &[f64]) -> Result<f64> {
        let widths = arch.widths();
        let act = arch.activation();
        let hidden = arch.depth();
        self.post[0].copy_from_slice(x);
        let mut off = 0;
        for j in 1..widths.len() {
            let (pin, pout) = (widths[j - 1], widths[j]);
            let w = &theta[off..off + pin * pout];
            let b = &theta[off + pin * pout..off + pout * (pin + 1)];
            off += pout * (pin + 1);
            let split = j.min(self.post.len());
            let (before, after) = self.post.split_at_mut(split);
            let input = &before[j - 1];
            let z = &mut self.pre[j - 1];
            z.copy_from_slice(b);
            for (c, &a) in input.iter().enumerate() {
                if a != 0.0 {
                    for (zr, &wr) in z.iter_mut().zip(&w[c * pout..(c + 1) * pout]) {
                        *zr += wr * a;
                    }
                }
            }
            if z.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { layer: j });
            }
            if j <= hidden {
                for (o, &zr) in after[0].iter_mut().zip(z.iter()) {
                    *o = act.eval(zr);
                }
            }
        }
        Ok(self.pre[hidden][0])
    }

    /// Hidden-layer pre-activations of the last `forward`.
    pub(crate) fn hidden_pre(&self) -> impl Iterator<Item = f64> + '_ {
        self.pre[..self.pre.len() - 1].iter().flatten().copied()
    }

    /// Adds `d(output)/d(theta) * dout` into `grad`, using the last `forward`.
    pub(crate) fn backward(&mut self, arch: &Architecture, theta: &[f64], dout: f64, grad: &mut [f64]) {
        let widths = arch.widths();
        let act = arch.activation();
        let mut offsets = Vec::with_capacity(widths.len() - 1);
        let mut off = 0;
        for w in widths.windows(2) {
            offsets.push(off);
            off += w[1] * (w[0] + 1);
        }
        self.delta[0] = dout;
        for j in (1..widths.len()).rev() {
            let (pin, pout) = (widths[j - 1], widths[j]);
            let woff = offsets[j - 1];
            let boff = woff + pin * pout;
            let input = &self.post[j - 1];
            let delta = &self.delta[..pout];
            for (c, &a) in input.iter().enumerate() {
                if a != 0.0 {
                    for (g, &d) in grad[woff + c * pout..woff + (c + 1) * pout].iter_mut().zip(delta) {
                        *g += d * a;
                    }
                }
            }
            for (g, &d) in grad[boff..boff + pout].iter_mut().zip(delta) {
                *g += d;
            }
            if j > 1 {
                let w = &theta[woff..woff + pin * pout];
                let z_prev = &self.pre[j - 2];
                for c in 0..pin {
                    let s: f64 = w[c * pout..(c + 1) * pout].iter().zip(delta).map(|(w, d)| w * d).sum();
                    self.delta_prev[c] = s * act.derivative(z_prev[c]);
                }
                std::mem::swap(&mut self.delta, &mut self.delta_prev);
            }
        }
    }

    /// Mean loss over `rows` of `data`; accumulates the mean gradient into `grad`
    /// (which is zeroed first).
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn loss_and_gradient(
        &mut self,
        arch: &Architecture,
        theta: &[f64],
        data: &Dataset,
        rows: impl ExactSizeIterator<Item = usize>,
        loss: &Loss,
        clamp: Option<f64>,
        grad: &mut [f64],
    ) -> Result<f64> {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let m = rows.len();
        if m == 0 {
            return Ok(0.0);
        }
        let scale = 1.0 / m as f64;
        let mut total = 0.0;
        for i in rows {
            let raw = self.forward(arch, theta, data.x(i))?;
            let pred = apply_clamp(raw, clamp);
            let y = data.y(i);
            total += loss.eval(pred, y)?;
            let inside = clamp.is_none_or(|f| raw.abs() <= f);
            if inside {
                let d = loss.grad(pred, y)? * scale;
                if d != 0.0 {
                    self.backward(arch, theta, d, grad);
                }
            }
        }
        Ok(total * scale)
    }

    pub(crate) fn mean_loss(
        &mut self,
        arch: &Architecture,
        theta: &[f64],
        data: &Dataset,
        loss: &Loss,
        clamp: Option<f64>,
    ) -> Result<f64> {
        let mut total = 0.0;
        for (x, y) in data.iter() {
            let pred = apply_clamp(self.forward(arch, theta, x)?, clamp);
            total += loss.eval(pred, y)?;
        }
        Ok(if data.is_empty() { 0.0 } else { total / data.len() as f64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_neuron(w: f64, b: f64) -> NetworkParams {
        // p = (1, 1, 1): hidden neuron w*x + b, output 1*h + 0.
        NetworkParams::new(Architecture::new(vec![1, 1, 1], Activation::Relu).unwrap(), vec![w, b, 1.0, 0.0])
            .unwrap()
    }

    #[test]
    fn param_counts() {
        let a = |w: Vec<usize>| Architecture::new(w, Activation::Relu).unwrap().param_count();
        assert_eq!(a(vec![2, 3, 1]), 13);
        assert_eq!(a(vec![1, 1, 1]), 4);
        assert_eq!(a(vec![4, 5, 5, 1]), 61);
    }

    #[test]
    fn architecture_rejects_bad_widths() {
        assert!(Architecture::new(vec![2, 0, 1], Activation::Relu).is_err());
        assert!(Architecture::new(vec![2, 3, 2], Activation::Relu).is_err());
        assert!(Architecture::new(vec![2], Activation::Relu).is_err());
    }

    #[test]
    fn vectorize_is_column_major() {
        let layer = Layer { weights: vec![vec![1.0, 2.0], vec![3.0, 4.0]], bias: vec![5.0, 6.0] };
        assert_eq!(vectorize(&[layer.clone()]).unwrap(), vec![1.0, 3.0, 2.0, 4.0, 5.0, 6.0]);
        let back = devectorize(&[1.0, 3.0, 2.0, 4.0, 5.0, 6.0], &[2, 2]).unwrap();
        assert_eq!(back, vec![layer]);
    }

    #[test]
    fn devectorize_rejects_wrong_length() {
        assert!(devectorize(&[0.0; 5], &[2, 2]).is_err());
        let arch = Architecture::new(vec![2, 3, 1], Activation::Relu).unwrap();
        assert!(NetworkParams::new(arch, vec![0.0; 12]).is_err());
    }

    #[test]
    fn vectorize_rejects_inconsistent_layers() {
        let l1 = Layer { weights: vec![vec![1.0]; 3], bias: vec![0.0; 3] };
        let l2 = Layer { weights: vec![vec![1.0; 2]], bias: vec![0.0] };
        assert!(vectorize(&[l1, l2]).is_err());
        let bad_bias = Layer { weights: vec![vec![1.0]], bias: vec![0.0, 1.0] };
        assert!(vectorize(&[bad_bias]).is_err());
    }

    #[test]
    fn forward_examples() {
        let id = single_neuron(1.0, 0.0);
        assert_eq!(id.forward(&[0.3], None).unwrap(), 0.3);
        let shifted = single_neuron(1.0, -0.5);
        assert_eq!(shifted.forward(&[0.2], None).unwrap(), 0.0);
        assert_eq!(shifted.forward(&[1.0], Some(0.4)).unwrap(), 0.4);
        assert!(shifted.forward(&[1.0, 2.0], None).is_err());
    }

    #[test]
    fn forward_reports_non_finite_layer() {
        let p = single_neuron(f64::MAX, f64::MAX);
        match p.forward(&[2.0], None) {
            Err(Error::NonFinite { layer }) => assert_eq!(layer, 1),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn interpolating_network_has_zero_gradient() {
        let p = single_neuron(1.0, 0.0);
        let data = Dataset::from_rows(&[vec![0.2], vec![0.7]], vec![0.2, 0.7]).unwrap();
        let g = grad(&p, &data, &Loss::Squared, None).unwrap();
        assert!(g.iter().all(|v| *v == 0.0), "{g:?}");
    }

    #[test]
    fn projection_examples() {
        let arch = Architecture::new(vec![1, 1], Activation::Relu).unwrap();
        // p = (1, 1) has two parameters; use a 3-parameter check through project_in_place.
        let mut theta = vec![3.0, -0.5, 0.1];
        project_in_place(&mut theta, 1.0, Some(2));
        assert_eq!(theta, vec![1.0, -0.5, 0.0]);

        let p = NetworkParams::new(arch, vec![0.5, -0.25]).unwrap();
        let c = ClassConstraints::new(1, 1.0, 1.0, Some(2)).unwrap();
        assert_eq!(project_class(&p, &c), p);
    }

    #[test]
    fn projection_ties_keep_lowest_index() {
        let mut theta = vec![0.5, -0.5, 0.5, 0.2];
        project_in_place(&mut theta, 1.0, Some(2));
        assert_eq!(theta, vec![0.5, -0.5, 0.0, 0.0]);
        let mut all = vec![1.0, 2.0];
        project_in_place(&mut all, 5.0, Some(0));
        assert_eq!(all, vec![0.0, 0.0]);
    }

    #[test]
    fn fixed_segment_checks() {
        assert!(Activation::Relu.fixes_segment(0.1, 0.9, 101).unwrap());
        assert!(!Activation::Sigmoid.fixes_segment(0.1, 0.9, 101).unwrap());
        assert!(!Activation::Tanh.fixes_segment(0.1, 0.9, 101).unwrap());
        assert!(Activation::Identity.fixes_segment(0.0, 1.0, 11).unwrap());
        assert!(Activation::Relu.fixes_segment(0.5, 0.2, 11).is_err());
    }

    #[test]
    fn relu_kink_derivative_is_zero() {
        assert_eq!(Activation::Relu.derivative(0.0), 0.0);
        assert_eq!(Activation::from_id("tanh").unwrap(), Activation::Tanh);
        assert!(Activation::from_id("gelu").is_err());
    }
}
