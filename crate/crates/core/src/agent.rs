//! Tabular Q-learning with Boltzmann exploration, greedy self-play and the
//! model-confidence gate.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{apply_move, is_terminal, legal_moves, random_start, Move, Position, RuleSet};
use crate::model::{model_move, Model};
use crate::qtable::QTable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentParams {
    /// Learning rate.
    pub alpha: f64,
    /// Discount.
    pub lambda: f64,
    /// Inverse temperature of the Boltzmann distribution.
    pub beta: f64,
    /// Ceiling on how often the model is consulted.
    pub limit: f64,
    /// Steepness of the confidence curve.
    pub zeta: f64,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams {
            alpha: 0.1,
            lambda: 1.0,
            beta: 0.7,
            limit: 0.25,
            zeta: 7.0,
        }
    }
}

impl AgentParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.alpha <= 1.0
            && self.beta > 0.0
            && (0.0..=1.0).contains(&self.limit)
            && self.zeta > 0.0
            && self.lambda.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid agent parameters {self:?}")))
        }
    }
}

/// Best value over the legal moves at `pos`; 0 at the terminal.
pub fn max_q(q: &QTable, rules: RuleSet, pos: Position) -> f64 {
    legal_moves(rules, pos)
        .into_iter()
        .map(|mv| q.get(pos, mv))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .unwrap_or(0.0)
}

/// Applies one temporal-difference update and returns the TD error.
pub fn q_update(
    q: &mut QTable,
    rules: RuleSet,
    s: Position,
    a: Move,
    reward: f64,
    s_next: Position,
    params: &AgentParams,
) -> Result<f64> {
    apply_move(rules, s, a)?;
    let old = q.get(s, a);
    let td = reward + params.lambda * max_q(q, rules, s_next) - old;
    q.set(s, a, old + params.alpha * td);
    Ok(td)
}

/// Softmax over the legal moves at `s`, in [`legal_moves`] order.
pub fn boltzmann_probs(q: &QTable, rules: RuleSet, s: Position, beta: f64) -> Result<Vec<(Move, f64)>> {
    let moves = legal_moves(rules, s);
    if moves.is_empty() {
        return Err(Error::TerminalState);
    }
    let scores: Vec<f64> = moves.iter().map(|&mv| beta * q.get(s, mv)).collect();
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|z| (z - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(moves.into_iter().zip(weights.into_iter().map(|w| w / total)).collect())
}

/// Samples an index from a discrete distribution.
pub(crate) fn sample_index<R: Rng + ?Sized>(probs: impl IntoIterator<Item = f64>, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probs.into_iter().enumerate() {
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Probability of following the model: `max(0, L - exp(-zeta * perf))`.
pub fn model_confidence(perf: f64, params: &AgentParams) -> f64 {
    (params.limit - (-params.zeta * perf).exp()).max(0.0)
}

pub fn select_action<R: Rng + ?Sized>(
    q: &QTable,
    rules: RuleSet,
    s: Position,
    model: Option<&Model>,
    params: &AgentParams,
    rng: &mut R,
) -> Result<Move> {
    if is_terminal(s) {
        return Err(Error::TerminalState);
    }
    if let Some(model) = model {
        let gate = model_confidence(model.perf, params);
        if gate > 0.0 && rng.gen::<f64>() < gate {
            return model_move(model, s, rules, rng);
        }
    }
    let probs = boltzmann_probs(q, rules, s, params.beta)?;
    let i = sample_index(probs.iter().map(|&(_, p)| p), rng);
    Ok(probs[i].0)
}

/// Moves sharing the maximal Q-value at `s`.
pub fn greedy_moves(q: &QTable, rules: RuleSet, s: Position) -> Vec<Move> {
    let moves = legal_moves(rules, s);
    let best = moves
        .iter()
        .map(|&mv| q.get(s, mv))
        .fold(f64::NEG_INFINITY, f64::max);
    moves.into_iter().filter(|&mv| q.get(s, mv) == best).collect()
}

/// Argmax of Q at `s`, ties broken uniformly.
pub fn greedy_move<R: Rng + ?Sized>(q: &QTable, rules: RuleSet, s: Position, rng: &mut R) -> Result<Move> {
    greedy_moves(q, rules, s)
        .choose(rng)
        .copied()
        .ok_or(Error::TerminalState)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GameStats {
    pub learner_moves: usize,
    pub learner_won: bool,
    pub sum_sq_td: f64,
}

/// One self-play game from a random start. The opponent plays greedily from
/// the same table; the learner's Q is updated after every exchange.
pub fn play_training_game<R: Rng + ?Sized>(
    q: &mut QTable,
    rules: RuleSet,
    model: Option<&Model>,
    params: &AgentParams,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<GameStats> {
    let mut stats = GameStats::default();
    let mut state = random_start(rows, cols, rng);
    while !is_terminal(state) {
        let action = select_action(q, rules, state, model, params, rng)?;
        let mut next = apply_move(rules, state, action)?;
        let reward = if is_terminal(next) {
            stats.learner_won = true;
            1.0
        } else {
            let reply = greedy_move(q, rules, next, rng)?;
            next = apply_move(rules, next, reply)?;
            if is_terminal(next) {
                -1.0
            } else {
                0.0
            }
        };
        let td = q_update(q, rules, state, action, reward, next, params)?;
        stats.learner_moves += 1;
        stats.sum_sq_td += td * td;
        state = next;
    }
    Ok(stats)
}
