//! Text heatmaps of the oracle, a Q-table and the model as training goes on.
//! Dark cells are cold.
//!
//! cargo run --release --example heatmap -- [out_dir]

use std::path::PathBuf;

use hqn::bench::{emit_heatmap, HeatmapGrid, Settings};
use hqn::controller::{learn_step, ControllerState, ModelMemory};
use hqn::oracle::solve_retrograde;
use hqn::qtable::QTable;
use hqn::RuleSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let n = 30;
    let oracle = HeatmapGrid::from_labels(&solve_retrograde(RuleSet::Wythoff, n, n)?);
    println!("oracle\n{}", oracle.to_text());

    let config = Settings::default().controller();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut state = ControllerState::new();
    let mut q = QTable::new();
    let mut memory = ModelMemory::new(config.memory_capacity);
    for period in 1..=20 {
        learn_step(&mut state, &mut q, &mut memory, RuleSet::Wythoff, 2000, &config, &mut rng)?;
        if period % 5 != 0 {
            continue;
        }
        if let Some(model) = &state.best_model {
            let grid = HeatmapGrid::from_model(model, n, n);
            println!("model after period {period}, perf {:.2}\n{}", model.perf, grid.to_text());
            if let Some(dir) = &out {
                emit_heatmap(&grid, &dir.join(format!("model_{period}.csv")), &format!("# period={period}"))?;
            }
        }
    }
    let qmap = HeatmapGrid::from_qtable(&q, RuleSet::Wythoff, 12, 12);
    println!("best Q value per cell on the training board\n{}", qmap.to_text());
    Ok(())
}
