//! Checks shared by the standalone suites and the acceptance run.

#![allow(dead_code)]

use hqn::agent::{boltzmann_probs, greedy_moves, model_confidence, play_training_game, AgentParams};
use hqn::game::legal_moves;
use hqn::mlp::{Cost, Mlp, Sample};
use hqn::oracle::is_cold_closed_form;
use hqn::qnet::{Encoding, QNet};
use hqn::qtable::QTable;
use hqn::{Position, RuleSet};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 1000;

/// Largest relative gap between backprop and central differences over
/// `instances` random nets and datasets.
pub fn max_gradient_error(cost: Cost, instances: u64) -> f64 {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs = rng.gen_range(1..=4);
        let hidden = rng.gen_range(1..=8);
        let outputs = rng.gen_range(1..=3);
        let net = Mlp::uniform(inputs, hidden, outputs, 1.0, &mut rng);
        let data: Vec<Sample> = (0..rng.gen_range(1..=6))
            .map(|_| {
                Sample::new(
                    (0..inputs).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                    (0..outputs).map(|_| rng.gen_range(0.0..1.0)).collect(),
                )
            })
            .collect();
        let analytic = net.gradient(&data, cost);
        let params = net.params();
        for (i, &g) in analytic.iter().enumerate() {
            let mut probe = net.clone();
            let mut p = params.clone();
            p[i] = params[i] + h;
            probe.set_params(&p);
            let up = probe.cost(&data, cost);
            p[i] = params[i] - h;
            probe.set_params(&p);
            let down = probe.cost(&data, cost);
            let numeric = (up - down) / (2.0 * h);
            let scale = g.abs().max(numeric.abs());
            if scale > 1e-7 {
                worst = worst.max((g - numeric).abs() / scale);
            }
        }
    }
    worst
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn rules() -> impl Strategy<Value = RuleSet> {
    prop_oneof![Just(RuleSet::Wythoff), Just(RuleSet::Nim), Just(RuleSet::Euclid)]
}

fn position(max: usize) -> impl Strategy<Value = Position> {
    (0..=max, 0..=max)
        .prop_filter("terminal", |&(r, c)| (r, c) != (0, 0))
        .prop_map(|(r, c)| Position::new(r, c))
}

/// A table with random values on every legal move out of `pos`.
fn random_table(rules: RuleSet, pos: Position, seed: u64) -> QTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = QTable::new();
    for mv in legal_moves(rules, pos) {
        q.set(pos, mv, rng.gen_range(-1.0..=1.0));
    }
    q
}

pub type Outcome = Result<(), String>;

fn finish(result: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Outcome {
    result.map_err(|e| e.to_string())
}

pub fn softmax_normalization() -> Outcome {
    finish(runner().run(
        &(rules(), position(30), any::<u64>(), 0.01f64..5.0),
        |(rules, pos, seed, beta)| {
            let q = random_table(rules, pos, seed);
            let probs = boltzmann_probs(&q, rules, pos, beta).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let total: f64 = probs.iter().map(|p| p.1).sum();
            prop_assert!((total - 1.0).abs() < 1e-9, "sum {total}");
            prop_assert!(probs.iter().all(|p| p.1 > 0.0));
            prop_assert_eq!(probs.len(), legal_moves(rules, pos).len());
            Ok(())
        },
    ))
}

pub fn q_boundedness() -> Outcome {
    finish(runner().run(
        &(rules(), 2usize..8, 2usize..8, any::<u64>(), 0.01f64..=1.0),
        |(rules, rows, cols, seed, alpha)| {
            let params = AgentParams {
                alpha,
                ..AgentParams::default()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut q = QTable::new();
            for _ in 0..20 {
                play_training_game(&mut q, rules, None, &params, rows, cols, &mut rng)
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
            }
            for (pos, mv, v) in q.entries() {
                prop_assert!((-1.0..=1.0).contains(&v), "Q{pos}{mv} = {v}");
            }
            Ok(())
        },
    ))
}

pub fn confidence_ceiling() -> Outcome {
    finish(runner().run(&(0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..50.0), |(perf, limit, zeta)| {
        let params = AgentParams {
            limit,
            zeta,
            ..AgentParams::default()
        };
        let c = model_confidence(perf, &params);
        prop_assert!((0.0..=limit).contains(&c), "confidence {c} with limit {limit}");
        Ok(())
    }))
}

pub fn cold_to_cold_impossible() -> Outcome {
    finish(runner().run(&(rules(), position(200)), |(rules, pos)| {
        if is_cold_closed_form(rules, pos) {
            for mv in legal_moves(rules, pos) {
                let next = mv.target(pos).expect("legal");
                prop_assert!(!is_cold_closed_form(rules, next), "{pos} -> {next} under {rules}");
            }
        } else {
            // every hot cell has a way into a cold one
            let escapes = legal_moves(rules, pos)
                .into_iter()
                .any(|mv| is_cold_closed_form(rules, mv.target(pos).expect("legal")));
            prop_assert!(escapes, "hot {pos} without a cold successor under {rules}");
        }
        Ok(())
    }))
}

pub fn argmax_invariance() -> Outcome {
    finish(runner().run(
        &(rules(), position(20), any::<u64>(), 0.01f64..10.0, -5.0f64..5.0),
        |(rules, pos, seed, scale, shift)| {
            let q = random_table(rules, pos, seed);
            let mut moved = QTable::new();
            for mv in legal_moves(rules, pos) {
                moved.set(pos, mv, scale * q.get(pos, mv) + shift);
            }
            prop_assert_eq!(greedy_moves(&q, rules, pos), greedy_moves(&moved, rules, pos));

            // the same holds for the Q-network's output biases
            let (rows, cols) = (pos.row + 1, pos.col + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let slots = hqn::qnet::action_slots(rows.max(2), cols.max(2)).len();
            let net = Mlp::uniform(2, 5, slots, 1.0, &mut rng);
            let qnet = QNet::from_net(net.clone(), rows.max(2), cols.max(2), Encoding::Norm)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let mut shifted = net;
            shifted.b_out.iter_mut().for_each(|b| *b += shift);
            let shifted = QNet::from_net(shifted, rows.max(2), cols.max(2), Encoding::Norm)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let a = qnet.greedy_moves(rules, pos).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let b = shifted.greedy_moves(rules, pos).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(a, b);
            Ok(())
        },
    ))
}

pub fn all_properties() -> Vec<(&'static str, Outcome)> {
    vec![
        ("softmax normalization", softmax_normalization()),
        ("Q-value boundedness", q_boundedness()),
        ("model confidence ceiling", confidence_ceiling()),
        ("cold-to-cold impossibility", cold_to_cold_impossible()),
        ("argmax shift/scale invariance", argmax_invariance()),
    ]
}
