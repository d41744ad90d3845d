//! The Q-network baseline against perfect play, compared with random moves.
//!
//! cargo run --release --example qnet_baseline -- [games] [norm|onehot] [replay]

use hqn::bench::{run_qnet, Settings};
use hqn::metrics::{random_move_accuracy, two_proportion_p_value};
use hqn::oracle::solve_retrograde;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let games: usize = args.first().and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let mut settings = Settings::default();
    if let Some(encoding) = args.get(1) {
        settings.qnet_encoding = encoding.parse()?;
    }
    settings.qnet_replay = args.get(2).is_some_and(|a| a == "replay");
    settings.periods = games.div_ceil(settings.qnet_games_per_period);

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (records, _) = run_qnet(&settings, &mut rng)?;
    for r in &records {
        println!("{:>6} games: won {:.3} of training games, move accuracy {:.3}", r.games, r.best_perf, r.move_accuracy);
    }

    let grid = solve_retrograde(settings.game, settings.qnet_rows, settings.qnet_cols)?;
    let hot = grid.hot_positions().count() as f64;
    let random = random_move_accuracy(&grid);
    let last = records.last().map_or(random, |r| r.move_accuracy);
    let p = two_proportion_p_value(last * hot, hot, random * hot, hot);
    println!("random baseline {random:.3}, final {last:.3}, p = {p:.3}");
    Ok(())
}
