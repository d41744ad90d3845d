//! Model-free baseline: a small network mapping a state to one Q estimate per
//! action slot, trained online against a perfect opponent.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::sample_index;
use crate::error::{Error, Result};
use crate::game::{apply_move, is_terminal, legal_moves, random_start, Move, Position, RuleSet};
use crate::metrics::move_accuracy;
use crate::mlp::{Cost, Mlp, Sample};
use crate::oracle::{perfect_move, LabelGrid};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// `(row / rows, col / cols)`.
    #[default]
    Norm,
    /// One input per cell, row-major.
    OneHot,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Norm => "norm",
            Encoding::OneHot => "onehot",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm" => Ok(Encoding::Norm),
            "onehot" => Ok(Encoding::OneHot),
            other => Err(Error::Config(format!("unknown encoding '{other}'"))),
        }
    }
}

pub fn encode_state(pos: Position, dims: (usize, usize), encoding: Encoding) -> Result<Vec<f64>> {
    let (rows, cols) = dims;
    if pos.row >= rows || pos.col >= cols {
        return Err(Error::OutOfBounds { pos, rows, cols });
    }
    Ok(match encoding {
        Encoding::Norm => vec![pos.row as f64 / rows as f64, pos.col as f64 / cols as f64],
        Encoding::OneHot => {
            let mut v = vec![0.0; rows * cols];
            v[pos.row * cols + pos.col] = 1.0;
            v
        }
    })
}

/// Every move that can occur on the board: rows, then columns, then
/// diagonals, each by increasing amount.
pub fn action_slots(rows: usize, cols: usize) -> Vec<Move> {
    let row = (1..rows).map(Move::row);
    let col = (1..cols).map(Move::col);
    let diag = (1..rows.min(cols)).map(Move::diagonal);
    row.chain(col).chain(diag).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QNetParams {
    pub beta: f64,
    pub lambda: f64,
    /// Step applied to the chosen slot's target.
    pub target_rate: f64,
    /// Gradient step of the single backprop iteration.
    pub learning_rate: f64,
    pub hidden: usize,
    pub init_scale: f64,
    pub encoding: Encoding,
    pub replay: bool,
    pub replay_capacity: usize,
    pub replay_batch: usize,
}

impl Default for QNetParams {
    fn default() -> Self {
        QNetParams {
            beta: 0.7,
            lambda: 1.0,
            target_rate: 0.01,
            learning_rate: 0.01,
            hidden: 15,
            init_scale: 0.5,
            encoding: Encoding::Norm,
            replay: false,
            replay_capacity: 1000,
            replay_batch: 32,
        }
    }
}

impl QNetParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.beta > 0.0
            && self.lambda.is_finite()
            && self.target_rate > 0.0
            && self.learning_rate > 0.0
            && self.hidden > 0
            && self.replay_capacity > 0
            && self.replay_batch > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid q-network parameters {self:?}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QNet {
    pub net: Mlp,
    pub rows: usize,
    pub cols: usize,
    pub encoding: Encoding,
    slots: Vec<Move>,
}

impl QNet {
    pub fn new<R: Rng + ?Sized>(rows: usize, cols: usize, params: &QNetParams, rng: &mut R) -> Self {
        let slots = action_slots(rows, cols);
        let inputs = match params.encoding {
            Encoding::Norm => 2,
            Encoding::OneHot => rows * cols,
        };
        QNet {
            net: Mlp::uniform(inputs, params.hidden, slots.len(), params.init_scale, rng),
            rows,
            cols,
            encoding: params.encoding,
            slots,
        }
    }

    /// Wraps an existing network; its shape must match the board.
    pub fn from_net(net: Mlp, rows: usize, cols: usize, encoding: Encoding) -> Result<Self> {
        let slots = action_slots(rows, cols);
        let inputs = match encoding {
            Encoding::Norm => 2,
            Encoding::OneHot => rows * cols,
        };
        if net.inputs != inputs || net.outputs != slots.len() {
            return Err(Error::Config(format!(
                "network shape {}x{} does not fit a {rows}x{cols} board",
                net.inputs, net.outputs
            )));
        }
        Ok(QNet {
            net,
            rows,
            cols,
            encoding,
            slots,
        })
    }

    pub fn slots(&self) -> &[Move] {
        &self.slots
    }

    pub fn slot_of(&self, mv: Move) -> Option<usize> {
        self.slots.iter().position(|&m| m == mv)
    }

    pub fn encode(&self, pos: Position) -> Result<Vec<f64>> {
        encode_state(pos, (self.rows, self.cols), self.encoding)
    }

    /// Raw estimates for every slot.
    pub fn estimates(&self, pos: Position) -> Result<Vec<f64>> {
        Ok(self.net.forward(&self.encode(pos)?))
    }

    /// Legal moves at `pos` paired with their slot indices.
    fn legal_slots(&self, rules: RuleSet, pos: Position) -> Vec<(Move, usize)> {
        legal_moves(rules, pos)
            .into_iter()
            .map(|mv| (mv, self.slot_of(mv).expect("move fits the board")))
            .collect()
    }

    /// Boltzmann distribution over the legal slots at `pos`.
    pub fn probs(&self, rules: RuleSet, pos: Position, beta: f64) -> Result<Vec<(Move, f64)>> {
        let q = self.estimates(pos)?;
        let legal = self.legal_slots(rules, pos);
        if legal.is_empty() {
            return Err(Error::TerminalState);
        }
        let top = legal.iter().map(|&(_, i)| beta * q[i]).fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = legal.iter().map(|&(_, i)| (beta * q[i] - top).exp()).collect();
        let total: f64 = weights.iter().sum();
        Ok(legal.iter().zip(weights).map(|(&(mv, _), w)| (mv, w / total)).collect())
    }

    /// Legal moves sharing the highest estimate.
    pub fn greedy_moves(&self, rules: RuleSet, pos: Position) -> Result<Vec<Move>> {
        let q = self.estimates(pos)?;
        let legal = self.legal_slots(rules, pos);
        let best = legal.iter().map(|&(_, i)| q[i]).fold(f64::NEG_INFINITY, f64::max);
        Ok(legal.into_iter().filter(|&(_, i)| q[i] == best).map(|(mv, _)| mv).collect())
    }

    fn best_estimate(&self, rules: RuleSet, pos: Position) -> Result<f64> {
        let q = self.estimates(pos)?;
        Ok(self
            .legal_slots(rules, pos)
            .iter()
            .map(|&(_, i)| q[i])
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Bounded store of past training samples.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    samples: VecDeque<Sample>,
    capacity: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        ReplayBuffer {
            samples: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn push(&mut self, s: Sample) {
        if self.samples.len() == self.capacity {
            self.samples.pop_front();
        }
        self.samples.push_back(s);
    }

    pub fn draw<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> Vec<Sample> {
        let n = batch.min(self.samples.len());
        sample(rng, self.samples.len(), n)
            .into_iter()
            .map(|i| self.samples[i].clone())
            .collect()
    }
}

/// Plays one game from a random start and trains after every learner move.
/// Returns whether the learner won.
pub fn qnet_step<R: Rng + ?Sized>(
    qnet: &mut QNet,
    rules: RuleSet,
    params: &QNetParams,
    grid: &LabelGrid,
    mut replay: Option<&mut ReplayBuffer>,
    rng: &mut R,
) -> Result<bool> {
    let mut state = random_start(qnet.rows, qnet.cols, rng);
    loop {
        let mut targets = qnet.estimates(state)?;
        let probs = qnet.probs(rules, state, params.beta)?;
        let action = probs[sample_index(probs.iter().map(|p| p.1), rng)].0;
        let mut next = apply_move(rules, state, action)?;
        let (reward, done, won) = if is_terminal(next) {
            (1.0, true, true)
        } else {
            let reply = perfect_move(rules, next, grid, rng)?.expect("non-terminal");
            next = apply_move(rules, next, reply)?;
            if is_terminal(next) {
                (-1.0, true, false)
            } else {
                (params.lambda * qnet.best_estimate(rules, next)?, false, false)
            }
        };
        let slot = qnet.slot_of(action).expect("move fits the board");
        targets[slot] += params.target_rate * (reward - targets[slot]);
        let fresh = Sample::new(qnet.encode(state)?, targets);
        let batch = match replay.as_deref_mut() {
            Some(buffer) => {
                buffer.push(fresh);
                buffer.draw(params.replay_batch, rng)
            }
            None => vec![fresh],
        };
        qnet.net.step(&batch, Cost::SumSquaredError, params.learning_rate);
        if !qnet.net.is_finite() {
            return Err(Error::Numerical("q-network weights became non-finite".into()));
        }
        if done {
            return Ok(won);
        }
        state = next;
    }
}

/// Mean over oracle-hot cells of the fraction of greedy moves landing cold.
pub fn qnet_policy_accuracy(qnet: &QNet, grid: &LabelGrid) -> f64 {
    move_accuracy(grid, |pos| qnet.greedy_moves(grid.rules(), pos).unwrap_or_default())
}
