//! How far a model trained on 12x12 generalizes to larger boards.
//!
//! cargo run --release --example dimension_sweep -- [model.json]
//!
//! Without a model file, one is trained first.

use hqn::bench::{run_dimension_sweep, run_hqn, RuleSchedule, Settings};
use hqn::model::Model;
use hqn::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let model = match std::env::args().nth(1) {
        Some(path) => Model::load(path.as_ref())?,
        None => {
            let settings = Settings::default();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let run = run_hqn(&settings, &RuleSchedule::single(settings.game), &mut rng)?;
            run.best_model().cloned().ok_or_else(|| Error::Numerical("no model".into()))?
        }
    };
    println!("model perf {:.2}", model.perf);
    println!("  dim  class_acc  move_acc  random");
    for row in run_dimension_sweep(&model, &[10, 25, 50, 100, 200, 300])? {
        println!(
            "{:>5} {:>10.3} {:>9.3} {:>7.3}",
            row.dim, row.classification_accuracy, row.move_accuracy, row.random_baseline
        );
    }
    Ok(())
}
