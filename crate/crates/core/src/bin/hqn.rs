use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hqn::bench::{self, HeatmapGrid, RuleSchedule, Settings};
use hqn::metrics::{model_classification_accuracy, model_move_accuracy, random_move_accuracy};
use hqn::model::{evaluate_model, Model};
use hqn::oracle::solve_retrograde;
use hqn::qnet::Encoding;
use hqn::qtable::QTable;
use hqn::{Error, Result, RuleSet};

#[derive(Parser)]
#[command(name = "hqn", version, about = "Hierarchical Q-Network lab on Wythoff, Nim and Euclid")]
struct Cli {
    /// RNG seed; required by every training and evaluation command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML settings file; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override any setting, e.g. `--set delta=0.8`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Board {
    #[arg(long)]
    game: Option<RuleSet>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Oracle hot/cold grid as CSV.
    Solve {
        #[command(flatten)]
        board: Board,
    },
    /// Tabular Q-agent without a model.
    TrainQ {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        periods: Option<usize>,
        #[arg(long)]
        games_per_period: Option<usize>,
        /// Also write the final Q-table here.
        #[arg(long)]
        save_qtable: Option<PathBuf>,
    },
    /// Q-network baseline.
    TrainQnet {
        #[command(flatten)]
        board: Board,
        /// Total games, rounded up to whole periods.
        #[arg(long)]
        games: Option<usize>,
        #[arg(long)]
        encoding: Option<Encoding>,
        #[arg(long)]
        replay: bool,
    },
    /// Model-based learner.
    TrainHqn {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        periods: Option<usize>,
        #[arg(long)]
        games_per_period: Option<usize>,
        #[arg(long)]
        eval_rows: Option<usize>,
        #[arg(long)]
        eval_cols: Option<usize>,
        /// Lines of `period,game`.
        #[arg(long)]
        rule_schedule: Option<PathBuf>,
        /// Also write the final best model here.
        #[arg(long)]
        save_model: Option<PathBuf>,
    },
    /// Oracle accuracy of a saved model, plus its perf against a Q-table.
    EvalModel {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Opponent for the perf score; untrained when absent.
        #[arg(long)]
        qtable: Option<PathBuf>,
    },
    /// Accuracy of a saved model across square boards.
    DimensionSweep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "10,25,50,100,200,300")]
        dims: Vec<usize>,
    },
    /// Wythoff, Nim, Euclid, twice over.
    RuleCycle,
    /// HQN, Q-agent and Q-network under their own budgets.
    Compare,
    /// Grid of model outputs, Q-table values or oracle labels.
    Heatmap {
        #[command(flatten)]
        board: Board,
        #[arg(long, conflicts_with_all = ["qtable", "oracle"])]
        model: Option<PathBuf>,
        #[arg(long, conflicts_with = "oracle")]
        qtable: Option<PathBuf>,
        #[arg(long)]
        oracle: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let base = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let mut settings = base.with_overrides(&cli.overrides)?;
    let out = cli.out.clone();
    let needs_seed = !matches!(cli.command, Command::Solve { .. } | Command::Heatmap { .. });
    let seed = match (cli.seed, needs_seed) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(Error::Config("--seed is required".into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    match cli.command {
        Command::Solve { board } => {
            let grid = solve_retrograde(
                board.game.unwrap_or(settings.game),
                board.rows.unwrap_or(settings.eval_rows),
                board.cols.unwrap_or(settings.eval_cols),
            )?;
            emit(out.as_deref(), &grid.to_csv())
        }
        Command::TrainQ {
            board,
            periods,
            games_per_period,
            save_qtable,
        } => {
            settings.game = board.game.unwrap_or(settings.game);
            settings.q_rows = board.rows.unwrap_or(settings.q_rows);
            settings.q_cols = board.cols.unwrap_or(settings.q_cols);
            settings.periods = periods.unwrap_or(settings.periods);
            settings.q_games_per_period = games_per_period.unwrap_or(settings.q_games_per_period);
            let (records, q) = bench::run_q(&settings, &mut rng)?;
            if let Some(path) = save_qtable {
                bench::write_atomic(&path, &q.to_csv())?;
            }
            emit(out.as_deref(), &bench::experiment_csv(&records, &settings.describe(seed)))
        }
        Command::TrainQnet {
            board,
            games,
            encoding,
            replay,
        } => {
            settings.game = board.game.unwrap_or(settings.game);
            settings.qnet_rows = board.rows.unwrap_or(settings.qnet_rows);
            settings.qnet_cols = board.cols.unwrap_or(settings.qnet_cols);
            settings.qnet_encoding = encoding.unwrap_or(settings.qnet_encoding);
            settings.qnet_replay |= replay;
            if let Some(games) = games {
                settings.periods = games.div_ceil(settings.qnet_games_per_period.max(1));
            }
            let (records, _) = bench::run_qnet(&settings, &mut rng)?;
            emit(out.as_deref(), &bench::experiment_csv(&records, &settings.describe(seed)))
        }
        Command::TrainHqn {
            board,
            periods,
            games_per_period,
            eval_rows,
            eval_cols,
            rule_schedule,
            save_model,
        } => {
            settings.game = board.game.unwrap_or(settings.game);
            settings.train_rows = board.rows.unwrap_or(settings.train_rows);
            settings.train_cols = board.cols.unwrap_or(settings.train_cols);
            settings.periods = periods.unwrap_or(settings.periods);
            settings.games_per_period = games_per_period.unwrap_or(settings.games_per_period);
            settings.eval_rows = eval_rows.unwrap_or(settings.eval_rows);
            settings.eval_cols = eval_cols.unwrap_or(settings.eval_cols);
            let schedule = match &rule_schedule {
                Some(path) => RuleSchedule::load(path, settings.game)?,
                None => RuleSchedule::single(settings.game),
            };
            let run = bench::run_hqn(&settings, &schedule, &mut rng)?;
            if let Some(path) = save_model {
                let model = run
                    .best_model()
                    .ok_or_else(|| Error::Numerical("no model was adopted".into()))?;
                bench::write_atomic(&path, &model.to_json())?;
            }
            emit(out.as_deref(), &bench::hqn_csv(&run.records, &settings.describe(seed)))
        }
        Command::EvalModel {
            model,
            rows,
            cols,
            qtable,
        } => {
            let model = Model::load(&model)?;
            let (rows, cols) = (rows.unwrap_or(model.eval_dims.0), cols.unwrap_or(model.eval_dims.1));
            let q = match &qtable {
                Some(path) => QTable::load(path)?,
                None => QTable::new(),
            };
            let grid = solve_retrograde(model.game, rows, cols)?;
            let perf = evaluate_model(&model, &q, model.game, settings.eval_trials, (rows, cols), &mut rng);
            let csv = format!(
                "{}\ngame,rows,cols,classification_accuracy,move_accuracy,random_baseline,perf\n{},{},{},{},{},{},{}\n",
                settings.describe(seed),
                model.game.name(),
                rows,
                cols,
                model_classification_accuracy(&model, &grid),
                model_move_accuracy(&model, &grid),
                random_move_accuracy(&grid),
                perf
            );
            emit(out.as_deref(), &csv)
        }
        Command::DimensionSweep { model, dims } => {
            let model = Model::load(&model)?;
            let rows = bench::run_dimension_sweep(&model, &dims)?;
            emit(out.as_deref(), &bench::sweep_csv(&rows, &settings.describe(seed)))
        }
        Command::RuleCycle => {
            let run = bench::run_rule_cycle(&settings, &bench::DOUBLE_CYCLE, &mut rng)?;
            emit(out.as_deref(), &bench::cycle_csv(&run.records, &settings.describe(seed)))
        }
        Command::Compare => {
            let records = bench::run_comparison(&settings, &mut rng)?;
            emit(out.as_deref(), &bench::experiment_csv(&records, &settings.describe(seed)))
        }
        Command::Heatmap {
            board,
            model,
            qtable,
            oracle,
        } => {
            let out = out.ok_or_else(|| Error::Config("heatmap needs --out".into()))?;
            let game = board.game.unwrap_or(settings.game);
            let (grid, source) = if let Some(path) = model {
                let model = Model::load(&path)?;
                let rows = board.rows.unwrap_or(model.eval_dims.0);
                let cols = board.cols.unwrap_or(model.eval_dims.1);
                (HeatmapGrid::from_model(&model, rows, cols), format!("model {}", path.display()))
            } else {
                let rows = board.rows.unwrap_or(settings.eval_rows);
                let cols = board.cols.unwrap_or(settings.eval_cols);
                if let Some(path) = qtable {
                    let q = QTable::load(&path)?;
                    (HeatmapGrid::from_qtable(&q, game, rows, cols), format!("qtable {}", path.display()))
                } else if oracle {
                    let labels = solve_retrograde(game, rows, cols)?;
                    (HeatmapGrid::from_labels(&labels), format!("oracle {}", game.name()))
                } else {
                    return Err(Error::Config("heatmap needs --model, --qtable or --oracle".into()));
                }
            };
            bench::emit_heatmap(&grid, &out, &format!("# source={source}"))
        }
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => bench::write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
