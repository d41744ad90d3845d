//! The model-based learner on Wythoff: a Q-agent on 12x12 whose experience
//! is distilled into a hot/cold network that is scored on 50x50.
//!
//! cargo run --release --example train_hqn -- [periods] [model.json]

use hqn::bench::{run_hqn, write_atomic, RuleSchedule, Settings};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let mut args = std::env::args().skip(1);
    let settings = Settings {
        periods: args.next().and_then(|a| a.parse().ok()).unwrap_or(25),
        ..Settings::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let run = run_hqn(&settings, &RuleSchedule::single(settings.game), &mut rng)?;
    println!("period  games  best_perf  class_acc  move_acc");
    for r in &run.records {
        println!(
            "{:>6} {:>6} {:>10.2} {:>10.3} {:>9.3}{}",
            r.period,
            r.games,
            r.best_perf,
            r.model_accuracy,
            r.move_accuracy,
            if r.replaced { "  new model" } else { "" }
        );
    }
    if let (Some(path), Some(model)) = (args.next(), run.best_model()) {
        write_atomic(path.as_ref(), &model.to_json())?;
        println!("model written to {path}");
    }
    Ok(())
}
