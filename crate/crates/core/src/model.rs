//! The upper layer of the hierarchy: a small hot/cold classifier distilled
//! from the Q-table and scored by playing against the Q-agent.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{greedy_move, max_q};
use crate::error::{Error, Result};
use crate::game::{apply_move, is_terminal, legal_moves, random_start, Move, Position, RuleSet};
use crate::mlp::{train_backprop, Cost, Mlp, Sample, TrainConfig};
use crate::qtable::QTable;

/// Board dimensions as `(rows, cols)`.
pub type Dims = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Confidence threshold for the hot/cold cut.
    pub epsilon: f64,
    /// Upper bound on drawn dataset entries; `None` keeps every candidate.
    pub sample_size: Option<usize>,
    pub hidden: usize,
    /// Coordinates are divided by this before reaching the network.
    pub input_scale: f64,
    /// Half-width of the uniform weight initialisation.
    pub init_scale: f64,
    pub error_limit_min: f64,
    pub error_limit_max: f64,
    pub iterations_min: usize,
    pub iterations_max: usize,
    pub learning_rate: f64,
    /// Games played when scoring a model.
    pub eval_trials: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            epsilon: 0.2,
            sample_size: None,
            hidden: 15,
            input_scale: 1.0,
            init_scale: 2.0,
            error_limit_min: 0.01,
            error_limit_max: 0.1,
            iterations_min: 500,
            iterations_max: 5000,
            learning_rate: 0.5,
            eval_trials: 100,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.epsilon > 0.0
            && self.epsilon < 0.5
            && self.sample_size != Some(0)
            && self.hidden > 0
            && self.input_scale > 0.0
            && self.error_limit_min <= self.error_limit_max
            && self.iterations_min <= self.iterations_max
            && self.learning_rate > 0.0
            && self.eval_trials > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid model settings {self:?}")))
        }
    }
}

/// A trained classifier: output near 0 means cold, near 1 hot.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub net: Mlp,
    /// Win ratio against the greedy Q opponent, in `[0, 1]`.
    pub perf: f64,
    /// Game the training data came from. Bookkeeping only.
    pub game: RuleSet,
    pub train_dims: Dims,
    pub eval_dims: Dims,
    /// Inputs are `(row / scale, col / scale)` on every board.
    pub scale: f64,
}

impl Model {
    /// Constant-output model used when no dataset could be extracted.
    pub fn null(game: RuleSet, train_dims: Dims, eval_dims: Dims, hidden: usize) -> Self {
        Model {
            net: Mlp::zeros(2, hidden, 1),
            perf: 0.0,
            game,
            train_dims,
            eval_dims,
            scale: 1.0,
        }
    }

    pub fn encode(&self, pos: Position) -> [f64; 2] {
        encode(pos, self.scale)
    }

    pub fn output(&self, pos: Position) -> f64 {
        self.net.forward1(&self.encode(pos))
    }

    /// Model output on every cell of a board, row-major.
    pub fn output_grid(&self, rows: usize, cols: usize) -> Vec<f64> {
        (0..rows * cols)
            .map(|i| self.output(Position::new(i / cols, i % cols)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let doc = ModelFile {
            game: self.game,
            train_dims: [self.train_dims.0, self.train_dims.1],
            eval_dims: [self.eval_dims.0, self.eval_dims.1],
            normalization: self.scale,
            layer_sizes: [self.net.inputs, self.net.hidden, self.net.outputs],
            w_hidden: self.net.w_hidden.clone(),
            b_hidden: self.net.b_hidden.clone(),
            w_out: self.net.w_out.clone(),
            b_out: self.net.b_out.clone(),
            perf: self.perf,
        };
        serde_json::to_string_pretty(&doc).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let [inputs, hidden, outputs] = doc.layer_sizes;
        let net = Mlp {
            inputs,
            hidden,
            outputs,
            w_hidden: doc.w_hidden,
            b_hidden: doc.b_hidden,
            w_out: doc.w_out,
            b_out: doc.b_out,
        };
        let shapes_ok = inputs == 2
            && outputs == 1
            && net.w_hidden.len() == hidden * inputs
            && net.b_hidden.len() == hidden
            && net.w_out.len() == outputs * hidden
            && net.b_out.len() == outputs;
        if !shapes_ok {
            return Err(Error::Config("model weight shapes do not match layer sizes".into()));
        }
        if !(0.0..=1.0).contains(&doc.perf) || doc.normalization.is_nan() || doc.normalization <= 0.0 {
            return Err(Error::Config("model perf or normalization out of range".into()));
        }
        Ok(Model {
            net,
            perf: doc.perf,
            game: doc.game,
            train_dims: (doc.train_dims[0], doc.train_dims[1]),
            eval_dims: (doc.eval_dims[0], doc.eval_dims[1]),
            scale: doc.normalization,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_json(&text).map_err(|e| Error::file(path, e))
    }
}

/// On-disk layout of a model. Floats use the shortest representation that
/// parses back to the identical `f64`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    game: RuleSet,
    train_dims: [usize; 2],
    eval_dims: [usize; 2],
    normalization: f64,
    layer_sizes: [usize; 3],
    w_hidden: Vec<f64>,
    b_hidden: Vec<f64>,
    w_out: Vec<f64>,
    b_out: Vec<f64>,
    perf: f64,
}

pub fn encode(pos: Position, scale: f64) -> [f64; 2] {
    [pos.row as f64 / scale, pos.col as f64 / scale]
}

/// Value of the best move out of `s`.
pub fn expected_value(q: &QTable, rules: RuleSet, s: Position) -> Result<f64> {
    if is_terminal(s) {
        return Err(Error::TerminalState);
    }
    Ok(max_q(q, rules, s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HotColdDataset {
    /// Normalized input, label (0 cold, 1 hot), and the source position.
    pub entries: Vec<([f64; 2], u8, Position)>,
}

impl HotColdDataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hot_count(&self) -> usize {
        self.entries.iter().filter(|e| e.1 == 1).count()
    }

    pub fn is_single_class(&self) -> bool {
        let hot = self.hot_count();
        hot == 0 || hot == self.len()
    }

    pub fn samples(&self) -> Vec<Sample> {
        self.entries
            .iter()
            .map(|(x, y, _)| Sample::new(x.to_vec(), vec![*y as f64]))
            .collect()
    }
}

/// States whose expected value is at most `epsilon` are cold, those above
/// `1 - epsilon` hot; the rest are left out. Up to `sample_size` entries are
/// drawn without replacement.
pub fn extract_dataset<R: Rng + ?Sized>(
    q: &QTable,
    rules: RuleSet,
    dims: Dims,
    scale: f64,
    epsilon: f64,
    sample_size: usize,
    rng: &mut R,
) -> Result<HotColdDataset> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Config(format!("epsilon {epsilon} outside (0, 0.5)")));
    }
    let mut candidates = Vec::new();
    for r in 0..dims.0 {
        for c in 0..dims.1 {
            let pos = Position::new(r, c);
            if is_terminal(pos) {
                continue;
            }
            let e = max_q(q, rules, pos);
            let label = if e <= epsilon {
                0
            } else if e > 1.0 - epsilon {
                1
            } else {
                continue;
            };
            candidates.push((encode(pos, scale), label, pos));
        }
    }
    if candidates.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = sample_size.min(candidates.len());
    let entries: Vec<_> = candidates.choose_multiple(rng, n).copied().collect();
    let data = HotColdDataset { entries };
    if data.is_single_class() {
        log::warn!("hot/cold dataset of {} entries has a single class", data.len());
    }
    Ok(data)
}

/// Moves with the lowest model output among the successors of `s`.
pub fn coldest_moves(model: &Model, s: Position, rules: RuleSet) -> Vec<Move> {
    let scored: Vec<(Move, f64)> = legal_moves(rules, s)
        .into_iter()
        .map(|mv| (mv, model.output(mv.target(s).expect("legal move"))))
        .collect();
    let best = scored.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    scored.into_iter().filter(|m| m.1 == best).map(|m| m.0).collect()
}

/// The move the model recommends: toward the successor it rates most cold.
pub fn model_move<R: Rng + ?Sized>(model: &Model, s: Position, rules: RuleSet, rng: &mut R) -> Result<Move> {
    coldest_moves(model, s, rules)
        .choose(rng)
        .copied()
        .ok_or(Error::TerminalState)
}

/// Fraction of games the model wins moving first against a greedy player
/// reading `q`, from random starts on an `eval_dims` board.
pub fn evaluate_model<R: Rng + ?Sized>(
    model: &Model,
    q: &QTable,
    rules: RuleSet,
    trials: usize,
    eval_dims: Dims,
    rng: &mut R,
) -> f64 {
    assert!(trials > 0);
    let mut wins = 0;
    for _ in 0..trials {
        let mut pos = random_start(eval_dims.0, eval_dims.1, rng);
        loop {
            let mv = model_move(model, pos, rules, rng).expect("non-terminal");
            pos = apply_move(rules, pos, mv).expect("legal");
            if is_terminal(pos) {
                wins += 1;
                break;
            }
            let reply = greedy_move(q, rules, pos, rng).expect("non-terminal");
            pos = apply_move(rules, pos, reply).expect("legal");
            if is_terminal(pos) {
                break;
            }
        }
    }
    wins as f64 / trials as f64
}

/// Extract, fit and score a fresh model. Failures yield a null model with
/// perf 0 rather than an error.
pub fn build_model<R: Rng + ?Sized>(
    q: &QTable,
    rules: RuleSet,
    train_dims: Dims,
    eval_dims: Dims,
    config: &ModelConfig,
    rng: &mut R,
) -> Model {
    let scale = config.input_scale;
    let null = || Model::null(rules, train_dims, eval_dims, config.hidden);
    let data = match extract_dataset(q, rules, train_dims, scale, config.epsilon, config.sample_size.unwrap_or(usize::MAX), rng) {
        Ok(d) => d,
        Err(_) => return null(),
    };
    let mut net = Mlp::uniform(2, config.hidden, 1, config.init_scale, rng);
    let train = TrainConfig {
        error_limit: rng.gen_range(config.error_limit_min..=config.error_limit_max),
        max_iterations: rng.gen_range(config.iterations_min..=config.iterations_max),
        learning_rate: config.learning_rate,
    };
    if let Err(e) = train_backprop(&mut net, &data.samples(), Cost::CrossEntropy, train) {
        log::debug!("discarding model: {e}");
        return null();
    }
    let mut model = Model {
        net,
        perf: 0.0,
        game: rules,
        train_dims,
        eval_dims,
        scale,
    };
    model.perf = evaluate_model(&model, q, rules, config.eval_trials, eval_dims, rng);
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expected_value_is_max() {
        let mut q = QTable::new();
        let s = Position::new(1, 2);
        assert_eq!(expected_value(&q, RuleSet::Wythoff, s).unwrap(), 0.0);
        q.set(s, Move::row(1), 0.3);
        q.set(s, Move::col(1), -0.2);
        q.set(s, Move::col(2), 0.9);
        assert_eq!(expected_value(&q, RuleSet::Wythoff, s).unwrap(), 0.9);
        assert!(expected_value(&q, RuleSet::Wythoff, Position::ORIGIN).is_err());
    }

    #[test]
    fn untrained_table_gives_single_class_cold() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let q = QTable::new();
        let d = extract_dataset(&q, RuleSet::Wythoff, (12, 12), 12.0, 0.2, 1000, &mut rng).unwrap();
        assert_eq!(d.len(), 143);
        assert_eq!(d.hot_count(), 0);
        assert!(d.is_single_class());
        let d = extract_dataset(&q, RuleSet::Wythoff, (12, 12), 12.0, 0.2, 78, &mut rng).unwrap();
        assert_eq!(d.len(), 78);
    }

    #[test]
    fn intermediate_values_are_excluded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut q = QTable::new();
        // every state on a 2x2 board gets an intermediate value
        for pos in [Position::new(0, 1), Position::new(1, 0), Position::new(1, 1)] {
            for mv in legal_moves(RuleSet::Wythoff, pos) {
                q.set(pos, mv, 0.5);
            }
        }
        let err = extract_dataset(&q, RuleSet::Wythoff, (2, 2), 2.0, 0.2, 10, &mut rng).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset));
        assert!(extract_dataset(&q, RuleSet::Wythoff, (2, 2), 2.0, 0.6, 10, &mut rng).is_err());
    }

    #[test]
    fn constant_model_moves_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model = Model::null(RuleSet::Wythoff, (12, 12), (50, 50), 15);
        let s = Position::new(2, 2);
        assert_eq!(coldest_moves(&model, s, RuleSet::Wythoff).len(), 6);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            seen.insert(model_move(&model, s, RuleSet::Wythoff, &mut rng).unwrap());
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut model = Model::null(RuleSet::Euclid, (12, 12), (50, 50), 15);
        model.net = Mlp::uniform(2, 15, 1, 3.0, &mut rng);
        model.perf = 0.93;
        let back = Model::from_json(&model.to_json()).unwrap();
        assert_eq!(back, model);
        for _ in 0..100 {
            let p = Position::new(rng.gen_range(0..300), rng.gen_range(0..300));
            assert_eq!(back.output(p).to_bits(), model.output(p).to_bits());
        }
    }

    #[test]
    fn json_rejects_bad_shapes() {
        let model = Model::null(RuleSet::Nim, (12, 12), (50, 50), 15);
        let text = model.to_json().replace("\"layer_sizes\": [\n    2,\n    15,", "\"layer_sizes\": [\n    2,\n    14,");
        assert!(Model::from_json(&text).is_err());
        assert!(Model::from_json("{}").is_err());
    }
}
