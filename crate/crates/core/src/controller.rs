//! The outer learning loop: Q-agent training biased by the best model,
//! periodic model building, drop detection and model memory.
//!
//! The controller never sees which game is being played. Rules are passed
//! through only so the environment can enumerate legal moves.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{play_training_game, AgentParams};
use crate::error::{Error, Result};
use crate::game::RuleSet;
use crate::model::{build_model, evaluate_model, Dims, Model, ModelConfig};
use crate::qtable::QTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerConfig {
    /// Board the Q-agent trains on.
    pub train_dims: Dims,
    /// Board models are scored on.
    pub eval_dims: Dims,
    /// Drop threshold on `current / mean(history)`.
    pub delta: f64,
    /// Number of recent scores kept for the drop test.
    pub history_window: usize,
    /// Drops are only tested once the history mean reaches this level.
    pub drop_floor: f64,
    /// Minimum re-scored perf for a remembered model to be adopted.
    pub recall_threshold: f64,
    pub memory_capacity: usize,
    pub agent: AgentParams,
    pub model: ModelConfig,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            train_dims: (12, 12),
            eval_dims: (50, 50),
            delta: 0.9,
            history_window: 10,
            drop_floor: 0.8,
            recall_threshold: 0.8,
            memory_capacity: 16,
            agent: AgentParams::default(),
            model: ModelConfig::default(),
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        let dims_ok = |d: Dims| d.0 >= 2 && d.1 >= 2;
        if !dims_ok(self.train_dims) || !dims_ok(self.eval_dims) {
            return Err(Error::Config(format!(
                "boards must be at least 2x2 (train {:?}, eval {:?})",
                self.train_dims, self.eval_dims
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta {} outside (0, 1)", self.delta)));
        }
        if !(0.0..=1.0).contains(&self.drop_floor) {
            return Err(Error::Config(format!("drop floor {} outside [0, 1]", self.drop_floor)));
        }
        if self.history_window == 0 || self.memory_capacity == 0 {
            return Err(Error::Config("history window and memory capacity must be positive".into()));
        }
        self.agent.validate()?;
        self.model.validate()
    }
}

/// `true` when `current / mean(last window of history) < delta`.
pub fn detect_performance_drop(current: f64, history: &[f64], delta: f64, window: usize) -> bool {
    history_mean(history, window).is_some_and(|mean| mean > 0.0 && current / mean < delta)
}

fn history_mean(history: &[f64], window: usize) -> Option<f64> {
    let recent = &history[history.len().saturating_sub(window)..];
    if recent.is_empty() {
        None
    } else {
        Some(recent.iter().sum::<f64>() / recent.len() as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StoredModel {
    pub model: Model,
    pub perf_history: Vec<f64>,
}

/// Bounded FIFO store of retired models.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelMemory {
    stored: VecDeque<StoredModel>,
    capacity: usize,
}

impl ModelMemory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        ModelMemory {
            stored: VecDeque::new(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.stored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stored.is_empty()
    }

    pub fn models(&self) -> impl Iterator<Item = &StoredModel> {
        self.stored.iter()
    }

    /// Stores a snapshot. A model already in memory is refreshed in place.
    pub fn add(&mut self, model: Model, perf_history: Vec<f64>) {
        if let Some(existing) = self.stored.iter_mut().find(|s| s.model.net == model.net) {
            existing.perf_history = perf_history;
            return;
        }
        if self.stored.len() == self.capacity {
            self.stored.pop_front();
        }
        self.stored.push_back(StoredModel { model, perf_history });
    }
}

/// Re-scores every stored model except `skip` under the current game and
/// returns the best one, carrying its new score, if it reaches `threshold`.
#[allow(clippy::too_many_arguments)]
pub fn remember_model<R: Rng + ?Sized>(
    memory: &ModelMemory,
    skip: Option<&Model>,
    q: &QTable,
    rules: RuleSet,
    trials: usize,
    eval_dims: Dims,
    threshold: f64,
    rng: &mut R,
) -> Option<Model> {
    let mut best: Option<Model> = None;
    for stored in memory.models() {
        if skip.is_some_and(|m| m.net == stored.model.net) {
            continue;
        }
        let perf = evaluate_model(&stored.model, q, rules, trials, eval_dims, rng);
        if best.as_ref().is_none_or(|b| perf > b.perf) {
            let mut m = stored.model.clone();
            m.perf = perf;
            best = Some(m);
        }
    }
    best.filter(|m| m.perf >= threshold)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ControllerState {
    pub best_model: Option<Model>,
    /// Score of the best model when it was adopted; 0 without a model.
    pub best_perf: f64,
    /// Recent re-evaluations of the current best model.
    pub perf_history: Vec<f64>,
}

impl ControllerState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Latest measured score of the current best model.
    pub fn perceived_perf(&self) -> f64 {
        self.perf_history.last().copied().unwrap_or(0.0)
    }

    fn adopt(&mut self, model: Option<Model>) {
        self.best_perf = model.as_ref().map_or(0.0, |m| m.perf);
        self.perf_history = model.as_ref().map(|m| vec![m.perf]).unwrap_or_default();
        self.best_model = model;
    }
}

/// What happened during one period.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepReport {
    /// Re-evaluation of the incumbent at the start of the period.
    pub reevaluated: Option<f64>,
    pub drop_detected: bool,
    pub recalled: bool,
    pub q_reset: bool,
    pub new_model_perf: f64,
    pub replaced: bool,
}

pub fn learn_step<R: Rng + ?Sized>(
    state: &mut ControllerState,
    q: &mut QTable,
    memory: &mut ModelMemory,
    rules: RuleSet,
    games: usize,
    config: &ControllerConfig,
    rng: &mut R,
) -> Result<StepReport> {
    let mut report = StepReport::default();
    let trials = config.model.eval_trials;

    if let Some(best) = &state.best_model {
        let current = evaluate_model(best, q, rules, trials, config.eval_dims, rng);
        report.reevaluated = Some(current);
        let established = history_mean(&state.perf_history, config.history_window)
            .is_some_and(|mean| mean >= config.drop_floor);
        if established && detect_performance_drop(current, &state.perf_history, config.delta, config.history_window) {
            report.drop_detected = true;
            let mut history = std::mem::take(&mut state.perf_history);
            history.push(current);
            memory.add(best.clone(), history);
            let recalled = remember_model(
                memory,
                Some(best),
                q,
                rules,
                trials,
                config.eval_dims,
                config.recall_threshold,
                rng,
            );
            report.recalled = recalled.is_some();
            state.adopt(recalled);
            q.clear();
            report.q_reset = true;
        } else {
            state.perf_history.push(current);
            let excess = state.perf_history.len().saturating_sub(config.history_window);
            state.perf_history.drain(..excess);
        }
    }

    let (rows, cols) = config.train_dims;
    for _ in 0..games {
        play_training_game(q, rules, state.best_model.as_ref(), &config.agent, rows, cols, rng)?;
    }

    let candidate = build_model(q, rules, config.train_dims, config.eval_dims, &config.model, rng);
    report.new_model_perf = candidate.perf;
    if candidate.perf >= state.best_perf {
        report.replaced = true;
        state.adopt(Some(candidate));
    }
    Ok(report)
}
