//! Single-hidden-layer sigmoid network trained by full-batch backpropagation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cost {
    /// Mean over samples of `-(y ln a + (1-y) ln(1-a))`, summed over outputs.
    CrossEntropy,
    /// Mean over samples of `0.5 * sum (a - y)^2`.
    SumSquaredError,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: Vec<f64>,
}

impl Sample {
    pub fn new(input: Vec<f64>, target: Vec<f64>) -> Self {
        Sample { input, target }
    }
}

/// Weights are row-major: `w_hidden[h * inputs + i]`, `w_out[o * hidden + h]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
    pub w_hidden: Vec<f64>,
    pub b_hidden: Vec<f64>,
    pub w_out: Vec<f64>,
    pub b_out: Vec<f64>,
}

/// Intermediate activations of one forward pass.
struct Trace {
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

impl Mlp {
    pub fn zeros(inputs: usize, hidden: usize, outputs: usize) -> Self {
        Mlp {
            inputs,
            hidden,
            outputs,
            w_hidden: vec![0.0; hidden * inputs],
            b_hidden: vec![0.0; hidden],
            w_out: vec![0.0; outputs * hidden],
            b_out: vec![0.0; outputs],
        }
    }

    /// Every weight and bias drawn uniformly from `[-scale, scale]`.
    pub fn uniform<R: Rng + ?Sized>(
        inputs: usize,
        hidden: usize,
        outputs: usize,
        scale: f64,
        rng: &mut R,
    ) -> Self {
        let mut net = Self::zeros(inputs, hidden, outputs);
        for w in net.params_mut() {
            *w = rng.gen_range(-scale..=scale);
        }
        net
    }

    pub fn param_count(&self) -> usize {
        self.w_hidden.len() + self.b_hidden.len() + self.w_out.len() + self.b_out.len()
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w_hidden
            .iter_mut()
            .chain(self.b_hidden.iter_mut())
            .chain(self.w_out.iter_mut())
            .chain(self.b_out.iter_mut())
    }

    /// Flat parameter vector in the order hidden weights, hidden biases,
    /// output weights, output biases.
    pub fn params(&self) -> Vec<f64> {
        self.w_hidden
            .iter()
            .chain(&self.b_hidden)
            .chain(&self.w_out)
            .chain(&self.b_out)
            .copied()
            .collect()
    }

    pub fn set_params(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count());
        for (w, &v) in self.params_mut().zip(flat) {
            *w = v;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.params().iter().all(|w| w.is_finite())
    }

    fn trace(&self, input: &[f64]) -> Trace {
        debug_assert_eq!(input.len(), self.inputs);
        let hidden: Vec<f64> = (0..self.hidden)
            .map(|h| {
                let row = &self.w_hidden[h * self.inputs..(h + 1) * self.inputs];
                let z: f64 = row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + self.b_hidden[h];
                sigmoid(z)
            })
            .collect();
        let logits = (0..self.outputs)
            .map(|o| {
                let row = &self.w_out[o * self.hidden..(o + 1) * self.hidden];
                row.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>() + self.b_out[o]
            })
            .collect();
        Trace { hidden, logits }
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        self.trace(input).logits.into_iter().map(sigmoid).collect()
    }

    /// Convenience for single-output networks.
    pub fn forward1(&self, input: &[f64]) -> f64 {
        debug_assert_eq!(self.outputs, 1);
        sigmoid(self.trace(input).logits[0])
    }

    pub fn cost(&self, data: &[Sample], cost: Cost) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        let total: f64 = data
            .iter()
            .map(|s| {
                let logits = self.trace(&s.input).logits;
                logits
                    .iter()
                    .zip(&s.target)
                    .map(|(&z, &y)| match cost {
                        // ln a = -softplus(-z), ln(1-a) = -softplus(z)
                        Cost::CrossEntropy => y * softplus(-z) + (1.0 - y) * softplus(z),
                        Cost::SumSquaredError => 0.5 * (sigmoid(z) - y).powi(2),
                    })
                    .sum::<f64>()
            })
            .sum();
        total / data.len() as f64
    }

    /// Gradient of [`Mlp::cost`] with respect to [`Mlp::params`].
    #[allow(clippy::needless_range_loop)]
    pub fn gradient(&self, data: &[Sample], cost: Cost) -> Vec<f64> {
        let mut g = Mlp::zeros(self.inputs, self.hidden, self.outputs);
        if data.is_empty() {
            return g.params();
        }
        let n = data.len() as f64;
        let mut delta_out = vec![0.0; self.outputs];
        for s in data {
            let t = self.trace(&s.input);
            for o in 0..self.outputs {
                let a = sigmoid(t.logits[o]);
                let diff = a - s.target[o];
                delta_out[o] = match cost {
                    Cost::CrossEntropy => diff,
                    Cost::SumSquaredError => diff * a * (1.0 - a),
                } / n;
                g.b_out[o] += delta_out[o];
                for h in 0..self.hidden {
                    g.w_out[o * self.hidden + h] += delta_out[o] * t.hidden[h];
                }
            }
            for h in 0..self.hidden {
                let back: f64 = (0..self.outputs)
                    .map(|o| delta_out[o] * self.w_out[o * self.hidden + h])
                    .sum();
                let a = t.hidden[h];
                let delta = back * a * (1.0 - a);
                g.b_hidden[h] += delta;
                for (i, x) in s.input.iter().enumerate() {
                    g.w_hidden[h * self.inputs + i] += delta * x;
                }
            }
        }
        g.params()
    }

    /// One gradient-descent step; returns the cost before the step.
    pub fn step(&mut self, data: &[Sample], cost: Cost, learning_rate: f64) -> f64 {
        let before = self.cost(data, cost);
        let grad = self.gradient(data, cost);
        for (w, g) in self.params_mut().zip(grad) {
            *w -= learning_rate * g;
        }
        before
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub error_limit: f64,
    pub max_iterations: usize,
    pub learning_rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainReport {
    pub iterations: usize,
    pub final_cost: f64,
}

/// Full-batch gradient descent until the cost reaches `error_limit` or the
/// iteration budget runs out.
pub fn train_backprop(
    net: &mut Mlp,
    data: &[Sample],
    cost: Cost,
    config: TrainConfig,
) -> Result<TrainReport> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut iterations = 0;
    loop {
        let current = net.cost(data, cost);
        if !current.is_finite() || !net.is_finite() {
            return Err(Error::Numerical(format!("cost became {current} after {iterations} iterations")));
        }
        if current <= config.error_limit || iterations >= config.max_iterations {
            return Ok(TrainReport {
                iterations,
                final_cost: current,
            });
        }
        net.step(data, cost, config.learning_rate);
        iterations += 1;
    }
}
