// Plain tabular Q-learning in self-play, scored against the oracle.
//
// cargo run --release --example train_q_agent -- [rows] [games]

use hqn::agent::{play_training_game, AgentParams};
use hqn::metrics::{q_move_accuracy, random_move_accuracy};
use hqn::oracle::solve_retrograde;
use hqn::qtable::QTable;
use hqn::RuleSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(5);
    let games = args.next().flatten().unwrap_or(50_000);

    let grid = solve_retrograde(RuleSet::Wythoff, n, n)?;
    let params = AgentParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut q = QTable::new();
    println!("random play scores {:.3}", random_move_accuracy(&grid));
    let chunk = (games / 10).max(1);
    for played in (chunk..=games).step_by(chunk) {
        for _ in 0..chunk {
            play_training_game(&mut q, RuleSet::Wythoff, None, &params, n, n, &mut rng)?;
        }
        println!("{played:>7} games: move accuracy {:.3}", q_move_accuracy(&q, &grid));
    }
    println!("{} states visited", q.visited_states());
    Ok(())
}
