//! Wythoff, Nim, Euclid and round again. Rule changes show up as drops in
//! the perceived perf, and the second time round the model memory supplies
//! a fitting model straight away.
//!
//! cargo run --release --example rule_cycle -- [seed]

use hqn::bench::{run_rule_cycle, switch_periods, Settings, DOUBLE_CYCLE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hqn::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let settings = Settings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = run_rule_cycle(&settings, &DOUBLE_CYCLE, &mut rng)?;
    let switches = switch_periods(&run.records);
    for r in &run.records {
        let mut notes = Vec::new();
        if switches.contains(&r.period) {
            notes.push(format!("switch to {}", r.rules));
        }
        if r.drop_detected {
            notes.push("drop".to_string());
        }
        if r.recalled {
            notes.push("recalled".to_string());
        }
        println!(
            "{:>3} {:<8} perceived {:.2}  oracle {:.3}  {}",
            r.period,
            r.rules.name(),
            r.perceived_perf,
            r.move_accuracy,
            notes.join(", ")
        );
    }
    println!("{} models in memory", run.memory.len());
    Ok(())
}
