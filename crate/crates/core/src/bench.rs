//! Experiment drivers, flat settings files and CSV records.
//!
//! Every accuracy reported here is scored against an oracle grid. Files are
//! written whole through a temporary sibling and a rename.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{max_q, play_training_game, AgentParams};
use crate::controller::{learn_step, ControllerConfig, ControllerState, ModelMemory};
use crate::error::{Error, Result};
use crate::game::{Position, RuleSet};
use crate::metrics::{model_classification_accuracy, model_move_accuracy, q_move_accuracy, random_move_accuracy};
use crate::model::{Model, ModelConfig};
use crate::oracle::{solve_retrograde, LabelGrid};
use crate::qnet::{qnet_policy_accuracy, qnet_step, Encoding, QNet, QNetParams, ReplayBuffer};
use crate::qtable::QTable;

/// Every tunable of every experiment, as one flat table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    pub game: RuleSet,
    pub train_rows: usize,
    pub train_cols: usize,
    pub eval_rows: usize,
    pub eval_cols: usize,
    pub periods: usize,
    pub games_per_period: usize,

    pub alpha: f64,
    pub lambda: f64,
    pub beta: f64,
    pub limit: f64,
    pub zeta: f64,

    pub epsilon: f64,
    pub sample_size: Option<usize>,
    pub hidden: usize,
    pub input_scale: f64,
    pub init_scale: f64,
    pub error_limit_min: f64,
    pub error_limit_max: f64,
    pub iterations_min: usize,
    pub iterations_max: usize,
    pub learning_rate: f64,
    pub eval_trials: usize,

    pub delta: f64,
    pub history_window: usize,
    pub drop_floor: f64,
    pub recall_threshold: f64,
    pub memory_capacity: usize,

    /// Perceived perf at which the rule cycle moves to the next game.
    pub switch_threshold: f64,
    /// Periods every phase lasts at least, so a rule change can show up in
    /// the re-evaluated perf before the next switch.
    pub phase_min: usize,
    /// Periods after which a phase of the rule cycle is abandoned.
    pub phase_limit: usize,
    pub games_wythoff: usize,
    pub games_nim: usize,
    pub games_euclid: usize,

    pub q_rows: usize,
    pub q_cols: usize,
    pub q_games_per_period: usize,

    pub qnet_rows: usize,
    pub qnet_cols: usize,
    pub qnet_games_per_period: usize,
    pub qnet_target_rate: f64,
    pub qnet_learning_rate: f64,
    pub qnet_encoding: Encoding,
    pub qnet_replay: bool,
    pub replay_capacity: usize,
    pub replay_batch: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let agent = AgentParams::default();
        let model = ModelConfig::default();
        let controller = ControllerConfig::default();
        let qnet = QNetParams::default();
        Settings {
            game: RuleSet::Wythoff,
            train_rows: controller.train_dims.0,
            train_cols: controller.train_dims.1,
            eval_rows: controller.eval_dims.0,
            eval_cols: controller.eval_dims.1,
            periods: 40,
            games_per_period: 2000,
            alpha: agent.alpha,
            lambda: agent.lambda,
            beta: agent.beta,
            limit: agent.limit,
            zeta: agent.zeta,
            epsilon: model.epsilon,
            sample_size: model.sample_size,
            hidden: model.hidden,
            input_scale: model.input_scale,
            init_scale: model.init_scale,
            error_limit_min: model.error_limit_min,
            error_limit_max: model.error_limit_max,
            iterations_min: model.iterations_min,
            iterations_max: model.iterations_max,
            learning_rate: model.learning_rate,
            eval_trials: model.eval_trials,
            delta: controller.delta,
            history_window: controller.history_window,
            drop_floor: controller.drop_floor,
            recall_threshold: controller.recall_threshold,
            memory_capacity: controller.memory_capacity,
            switch_threshold: 0.9,
            phase_min: 2,
            phase_limit: 60,
            games_wythoff: 2500,
            games_nim: 2500,
            games_euclid: 2500,
            q_rows: 50,
            q_cols: 50,
            q_games_per_period: 5000,
            qnet_rows: 12,
            qnet_cols: 12,
            qnet_games_per_period: 1000,
            qnet_target_rate: qnet.target_rate,
            qnet_learning_rate: qnet.learning_rate,
            qnet_encoding: qnet.encoding,
            qnet_replay: qnet.replay,
            replay_capacity: qnet.replay_capacity,
            replay_batch: qnet.replay_batch,
        }
    }
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self> {
        let settings: Settings = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        settings.validate()?;
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_toml(&text)
    }

    /// Applies `key=value` overrides. Values are read as TOML, falling back
    /// to a plain string so `game=nim` works unquoted.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut table = toml::Table::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override '{item}' is not key=value")))?;
            let key = key.trim();
            let raw = raw.trim();
            let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(raw.to_string()));
            table.insert(key.to_string(), value);
        }
        let settings: Settings = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        settings.validate()?;
        Ok(settings)
    }

    pub fn agent(&self) -> AgentParams {
        AgentParams {
            alpha: self.alpha,
            lambda: self.lambda,
            beta: self.beta,
            limit: self.limit,
            zeta: self.zeta,
        }
    }

    pub fn controller(&self) -> ControllerConfig {
        ControllerConfig {
            train_dims: (self.train_rows, self.train_cols),
            eval_dims: (self.eval_rows, self.eval_cols),
            delta: self.delta,
            history_window: self.history_window,
            drop_floor: self.drop_floor,
            recall_threshold: self.recall_threshold,
            memory_capacity: self.memory_capacity,
            agent: self.agent(),
            model: ModelConfig {
                epsilon: self.epsilon,
                sample_size: self.sample_size,
                hidden: self.hidden,
                input_scale: self.input_scale,
                init_scale: self.init_scale,
                error_limit_min: self.error_limit_min,
                error_limit_max: self.error_limit_max,
                iterations_min: self.iterations_min,
                iterations_max: self.iterations_max,
                learning_rate: self.learning_rate,
                eval_trials: self.eval_trials,
            },
        }
    }

    pub fn qnet_params(&self) -> QNetParams {
        QNetParams {
            beta: self.beta,
            lambda: self.lambda,
            target_rate: self.qnet_target_rate,
            learning_rate: self.qnet_learning_rate,
            hidden: self.hidden,
            init_scale: QNetParams::default().init_scale,
            encoding: self.qnet_encoding,
            replay: self.qnet_replay,
            replay_capacity: self.replay_capacity,
            replay_batch: self.replay_batch,
        }
    }

    pub fn games_for(&self, rules: RuleSet) -> usize {
        match rules {
            RuleSet::Wythoff => self.games_wythoff,
            RuleSet::Nim => self.games_nim,
            RuleSet::Euclid => self.games_euclid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.controller().validate()?;
        self.qnet_params().validate()?;
        let boards = [(self.q_rows, self.q_cols), (self.qnet_rows, self.qnet_cols)];
        if boards.iter().any(|&(r, c)| r < 2 || c < 2) {
            return Err(Error::Config("every board must be at least 2x2".into()));
        }
        if !(0.0..=1.0).contains(&self.switch_threshold) || self.phase_min == 0 || self.phase_limit < self.phase_min {
            return Err(Error::Config("switch threshold outside [0, 1] or bad phase bounds".into()));
        }
        Ok(())
    }

    /// One-line `# seed=... key=value ...` header for CSV files.
    pub fn describe(&self, seed: u64) -> String {
        let table = toml::Table::try_from(self).expect("settings serialize");
        let mut line = format!("# seed={seed}");
        for (key, value) in &table {
            let _ = write!(line, " {key}={value}");
        }
        line
    }
}

/// Game in force from each listed period onwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchedule {
    base: RuleSet,
    changes: Vec<(usize, RuleSet)>,
}

impl RuleSchedule {
    pub fn single(rules: RuleSet) -> Self {
        RuleSchedule {
            base: rules,
            changes: Vec::new(),
        }
    }

    /// Lines of `period_index,game_name`; blank lines and `#` comments are
    /// skipped. Indices must increase. Periods before the first entry use
    /// `base`.
    pub fn parse(text: &str, base: RuleSet) -> Result<Self> {
        let mut changes: Vec<(usize, RuleSet)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: String| Error::Config(format!("schedule line {}: {what}", n + 1));
            let (idx, name) = line
                .split_once(',')
                .ok_or_else(|| bad("expected period_index,game_name".into()))?;
            let idx: usize = idx.trim().parse().map_err(|_| bad(format!("bad period index '{idx}'")))?;
            let rules: RuleSet = name.trim().parse().map_err(|e: Error| bad(e.to_string()))?;
            if changes.last().is_some_and(|&(prev, _)| prev >= idx) {
                return Err(bad("period indices must increase".into()));
            }
            changes.push((idx, rules));
        }
        Ok(RuleSchedule { base, changes })
    }

    pub fn load(path: &Path, base: RuleSet) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse(&text, base).map_err(|e| Error::file(path, e))
    }

    pub fn rules_at(&self, period: usize) -> RuleSet {
        self.changes
            .iter()
            .take_while(|&&(idx, _)| idx <= period)
            .last()
            .map_or(self.base, |&(_, rules)| rules)
    }
}

/// One period of an HQN run.
#[derive(Clone, Debug, PartialEq)]
pub struct HqnRecord {
    pub period: usize,
    /// Games played so far, this period included.
    pub games: usize,
    /// Position in the rule cycle; 0 outside it.
    pub phase: usize,
    pub rules: RuleSet,
    pub best_perf: f64,
    pub perceived_perf: f64,
    /// Classification accuracy of the best model on the evaluation board.
    pub model_accuracy: f64,
    /// Move accuracy of the best model on the evaluation board.
    pub move_accuracy: f64,
    pub drop_detected: bool,
    pub recalled: bool,
    pub replaced: bool,
    pub wallclock_ms: u128,
}

pub struct HqnRun {
    pub records: Vec<HqnRecord>,
    pub state: ControllerState,
    pub q: QTable,
    pub memory: ModelMemory,
}

impl HqnRun {
    pub fn best_model(&self) -> Option<&Model> {
        self.state.best_model.as_ref()
    }
}

/// Oracle grids, solved once per game.
struct Grids {
    dims: (usize, usize),
    solved: HashMap<RuleSet, LabelGrid>,
}

impl Grids {
    fn new(dims: (usize, usize)) -> Self {
        Grids {
            dims,
            solved: HashMap::new(),
        }
    }

    fn get(&mut self, rules: RuleSet) -> Result<&LabelGrid> {
        if !self.solved.contains_key(&rules) {
            let grid = solve_retrograde(rules, self.dims.0, self.dims.1)?;
            self.solved.insert(rules, grid);
        }
        Ok(&self.solved[&rules])
    }
}

/// Runs periods until `next` returns `None`. `next` sees the controller
/// state before each period and names the game, the games to play and the
/// cycle phase.
fn drive<R, F>(settings: &Settings, rng: &mut R, mut next: F) -> Result<HqnRun>
where
    R: Rng + ?Sized,
    F: FnMut(usize, &ControllerState) -> Option<(RuleSet, usize, usize)>,
{
    settings.validate()?;
    let config = settings.controller();
    let mut grids = Grids::new(config.eval_dims);
    let mut state = ControllerState::new();
    let mut q = QTable::new();
    let mut memory = ModelMemory::new(config.memory_capacity);
    let mut records = Vec::new();
    let mut games = 0;
    let start = Instant::now();
    let mut period = 0;
    while let Some((rules, period_games, phase)) = next(period, &state) {
        let report = learn_step(&mut state, &mut q, &mut memory, rules, period_games, &config, rng)?;
        games += period_games;
        let grid = grids.get(rules)?;
        let fallback;
        let model = match &state.best_model {
            Some(m) => m,
            None => {
                fallback = Model::null(rules, config.train_dims, config.eval_dims, config.model.hidden);
                &fallback
            }
        };
        records.push(HqnRecord {
            period,
            games,
            phase,
            rules,
            best_perf: state.best_perf,
            perceived_perf: state.perceived_perf(),
            model_accuracy: model_classification_accuracy(model, grid),
            move_accuracy: model_move_accuracy(model, grid),
            drop_detected: report.drop_detected,
            recalled: report.recalled,
            replaced: report.replaced,
            wallclock_ms: start.elapsed().as_millis(),
        });
        log::info!(
            "period {period} {} best {:.3} perceived {:.3} move accuracy {:.3}",
            rules.name(),
            state.best_perf,
            state.perceived_perf(),
            records.last().map_or(0.0, |r| r.move_accuracy)
        );
        period += 1;
    }
    Ok(HqnRun {
        records,
        state,
        q,
        memory,
    })
}

/// `settings.periods` periods of `settings.games_per_period` games each.
pub fn run_hqn<R: Rng + ?Sized>(settings: &Settings, schedule: &RuleSchedule, rng: &mut R) -> Result<HqnRun> {
    drive(settings, rng, |period, _| {
        (period < settings.periods).then(|| (schedule.rules_at(period), settings.games_per_period, 0))
    })
}

/// Wythoff, Nim, Euclid, twice.
pub const DOUBLE_CYCLE: [RuleSet; 6] = [
    RuleSet::Wythoff,
    RuleSet::Nim,
    RuleSet::Euclid,
    RuleSet::Wythoff,
    RuleSet::Nim,
    RuleSet::Euclid,
];

/// Plays `games` in order, moving on once the perceived perf reaches the
/// switch threshold after at least `phase_min` periods, or the phase limit
/// runs out. Stops after the last phase.
pub fn run_rule_cycle<R: Rng + ?Sized>(settings: &Settings, games: &[RuleSet], rng: &mut R) -> Result<HqnRun> {
    if games.is_empty() {
        return Err(Error::Config("rule cycle needs at least one game".into()));
    }
    let mut phase = 0;
    let mut in_phase = 0;
    drive(settings, rng, |_, state| {
        let done = in_phase >= settings.phase_min && state.perceived_perf() >= settings.switch_threshold;
        if done || in_phase == settings.phase_limit {
            if in_phase == settings.phase_limit {
                log::warn!("phase {phase} hit the limit of {} periods", settings.phase_limit);
            }
            phase += 1;
            in_phase = 0;
        }
        let rules = *games.get(phase)?;
        in_phase += 1;
        Some((rules, settings.games_for(rules), phase))
    })
}

/// Index of the first period of each phase after the first.
pub fn switch_periods(records: &[HqnRecord]) -> Vec<usize> {
    records
        .windows(2)
        .filter(|w| w[0].phase != w[1].phase)
        .map(|w| w[1].period)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Hqn,
    Q,
    Qnet,
}

impl AgentKind {
    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Hqn => "hqn",
            AgentKind::Q => "q",
            AgentKind::Qnet => "qnet",
        }
    }
}

/// One period of one agent in a comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub period: usize,
    pub games: usize,
    pub wallclock_ms: u128,
    pub agent: AgentKind,
    pub rules: RuleSet,
    /// Self-assessed score: model perf for the HQN, share of training games
    /// won for the others.
    pub best_perf: f64,
    /// Classification accuracy; only the HQN has a classifier.
    pub model_accuracy: Option<f64>,
    pub move_accuracy: f64,
}

impl From<&HqnRecord> for ExperimentRecord {
    fn from(r: &HqnRecord) -> Self {
        ExperimentRecord {
            period: r.period,
            games: r.games,
            wallclock_ms: r.wallclock_ms,
            agent: AgentKind::Hqn,
            rules: r.rules,
            best_perf: r.best_perf,
            model_accuracy: Some(r.model_accuracy),
            move_accuracy: r.move_accuracy,
        }
    }
}

/// Tabular Q-learning on the `q_rows x q_cols` board.
pub fn run_q<R: Rng + ?Sized>(settings: &Settings, rng: &mut R) -> Result<(Vec<ExperimentRecord>, QTable)> {
    settings.validate()?;
    let rules = settings.game;
    let (rows, cols) = (settings.q_rows, settings.q_cols);
    let grid = solve_retrograde(rules, rows, cols)?;
    let params = settings.agent();
    let mut q = QTable::new();
    let mut records = Vec::new();
    let start = Instant::now();
    for period in 0..settings.periods {
        let mut won = 0;
        for _ in 0..settings.q_games_per_period {
            won += play_training_game(&mut q, rules, None, &params, rows, cols, rng)?.learner_won as usize;
        }
        records.push(ExperimentRecord {
            period,
            games: (period + 1) * settings.q_games_per_period,
            wallclock_ms: start.elapsed().as_millis(),
            agent: AgentKind::Q,
            rules,
            best_perf: won as f64 / settings.q_games_per_period.max(1) as f64,
            model_accuracy: None,
            move_accuracy: q_move_accuracy(&q, &grid),
        });
    }
    Ok((records, q))
}

/// The Q-network baseline on the `qnet_rows x qnet_cols` board.
pub fn run_qnet<R: Rng + ?Sized>(settings: &Settings, rng: &mut R) -> Result<(Vec<ExperimentRecord>, QNet)> {
    settings.validate()?;
    let rules = settings.game;
    let (rows, cols) = (settings.qnet_rows, settings.qnet_cols);
    let grid = solve_retrograde(rules, rows, cols)?;
    let params = settings.qnet_params();
    let mut qnet = QNet::new(rows, cols, &params, rng);
    let mut buffer = ReplayBuffer::new(params.replay_capacity);
    let mut records = Vec::new();
    let start = Instant::now();
    for period in 0..settings.periods {
        let mut won = 0;
        for _ in 0..settings.qnet_games_per_period {
            let replay = if params.replay { Some(&mut buffer) } else { None };
            won += qnet_step(&mut qnet, rules, &params, &grid, replay, rng)? as usize;
        }
        records.push(ExperimentRecord {
            period,
            games: (period + 1) * settings.qnet_games_per_period,
            wallclock_ms: start.elapsed().as_millis(),
            agent: AgentKind::Qnet,
            rules,
            best_perf: won as f64 / settings.qnet_games_per_period.max(1) as f64,
            model_accuracy: None,
            move_accuracy: qnet_policy_accuracy(&qnet, &grid),
        });
    }
    Ok((records, qnet))
}

/// All three agents under their own budgets, one after another.
pub fn run_comparison<R: Rng + ?Sized>(settings: &Settings, rng: &mut R) -> Result<Vec<ExperimentRecord>> {
    let hqn = run_hqn(settings, &RuleSchedule::single(settings.game), rng)?;
    let mut records: Vec<ExperimentRecord> = hqn.records.iter().map(ExperimentRecord::from).collect();
    records.extend(run_q(settings, rng)?.0);
    records.extend(run_qnet(settings, rng)?.0);
    Ok(records)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub dim: usize,
    pub classification_accuracy: f64,
    pub move_accuracy: f64,
    pub random_baseline: f64,
}

/// Scores a model on `D x D` boards of its own game.
pub fn run_dimension_sweep(model: &Model, dims: &[usize]) -> Result<Vec<SweepRow>> {
    dims.iter()
        .map(|&dim| {
            let grid = solve_retrograde(model.game, dim, dim)?;
            Ok(SweepRow {
                dim,
                classification_accuracy: model_classification_accuracy(model, &grid),
                move_accuracy: model_move_accuracy(model, &grid),
                random_baseline: random_move_accuracy(&grid),
            })
        })
        .collect()
}

/// Per-cell values in `[0, 1]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapGrid {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

/// Darkest first: cold cells render as dense glyphs.
pub const RAMP: [char; 10] = ['@', '%', '#', '*', '+', '=', '-', ':', '.', ' '];

impl HeatmapGrid {
    pub fn from_model(model: &Model, rows: usize, cols: usize) -> Self {
        HeatmapGrid {
            rows,
            cols,
            values: model.output_grid(rows, cols),
        }
    }

    /// Expected value of each state, clipped to `[0, 1]`.
    pub fn from_qtable(q: &QTable, rules: RuleSet, rows: usize, cols: usize) -> Self {
        let values = (0..rows * cols)
            .map(|i| max_q(q, rules, Position::new(i / cols, i % cols)).clamp(0.0, 1.0))
            .collect();
        HeatmapGrid { rows, cols, values }
    }

    /// 1 for hot, 0 for cold.
    pub fn from_labels(grid: &LabelGrid) -> Self {
        let values = grid
            .positions()
            .map(|p| if grid.is_cold(p) { 0.0 } else { 1.0 })
            .collect();
        HeatmapGrid {
            rows: grid.rows(),
            cols: grid.cols(),
            values,
        }
    }

    pub fn value(&self, pos: Position) -> f64 {
        self.values[pos.row * self.cols + pos.col]
    }

    pub fn to_csv(&self, comment: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{comment}");
        let header: Vec<String> = (0..self.cols).map(|c| format!("c{c}")).collect();
        let _ = writeln!(out, "row,{}", header.join(","));
        for r in 0..self.rows {
            let cells: Vec<String> = self.values[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|v| v.to_string())
                .collect();
            let _ = writeln!(out, "{r},{}", cells.join(","));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.values[r * self.cols + c];
                let level = ((v * 10.0).floor() as usize).min(9);
                out.push(RAMP[level]);
            }
            out.push('\n');
        }
        out
    }
}

/// Writes the grid as CSV at `path` and as text beside it with a `.txt`
/// extension.
pub fn emit_heatmap(grid: &HeatmapGrid, path: &Path, comment: &str) -> Result<()> {
    if grid.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("heatmap holds non-finite values".into()));
    }
    write_atomic(path, &grid.to_csv(comment))?;
    write_atomic(&path.with_extension("txt"), &grid.to_text())
}

pub const HQN_HEADER: &str = "period,games,best_perf,model_accuracy,move_accuracy,rules";
pub const CYCLE_HEADER: &str =
    "period,games,phase,rules,best_perf,perceived_perf,model_accuracy,move_accuracy,drop_detected,recalled";
pub const EXPERIMENT_HEADER: &str = "period,games,wallclock_ms,agent,rules,best_perf,model_accuracy,move_accuracy";
pub const SWEEP_HEADER: &str = "dim,classification_accuracy,move_accuracy,random_baseline";

pub fn hqn_csv(records: &[HqnRecord], comment: &str) -> String {
    let mut out = format!("{comment}\n{HQN_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.period,
            r.games,
            r.best_perf,
            r.model_accuracy,
            r.move_accuracy,
            r.rules.name()
        );
    }
    out
}

pub fn cycle_csv(records: &[HqnRecord], comment: &str) -> String {
    let mut out = format!("{comment}\n{CYCLE_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.period,
            r.games,
            r.phase,
            r.rules.name(),
            r.best_perf,
            r.perceived_perf,
            r.model_accuracy,
            r.move_accuracy,
            r.drop_detected,
            r.recalled
        );
    }
    out
}

/// Classification accuracy is left empty for agents without a classifier.
pub fn experiment_csv(records: &[ExperimentRecord], comment: &str) -> String {
    let mut out = format!("{comment}\n{EXPERIMENT_HEADER}\n");
    for r in records {
        let model_accuracy = r.model_accuracy.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.period,
            r.games,
            r.wallclock_ms,
            r.agent.name(),
            r.rules.name(),
            r.best_perf,
            model_accuracy,
            r.move_accuracy
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow], comment: &str) -> String {
    let mut out = format!("{comment}\n{SWEEP_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.dim, r.classification_accuracy, r.move_accuracy, r.random_baseline
        );
    }
    out
}

/// Writes to a temporary file in the target directory, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::file(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::file(path, e))?;
    tmp.persist(path).map_err(|e| Error::file(path, e.error))?;
    Ok(())
}
