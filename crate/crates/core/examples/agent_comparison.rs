//! HQN, the tabular Q-agent and the Q-network, each under its own budget,
//! all scored by oracle move accuracy.
//!
//! cargo run --release --example agent_comparison -- [periods]

use hqn::bench::{run_comparison, AgentKind, Settings};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let settings = Settings {
        periods: std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20),
        ..Settings::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let records = run_comparison(&settings, &mut rng)?;
    for agent in [AgentKind::Hqn, AgentKind::Q, AgentKind::Qnet] {
        let curve: Vec<String> = records
            .iter()
            .filter(|r| r.agent == agent)
            .map(|r| format!("{:.2}", r.move_accuracy))
            .collect();
        println!("{:>4}: {}", agent.name(), curve.join(" "));
    }
    Ok(())
}
