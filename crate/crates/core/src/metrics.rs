//! Oracle-scored accuracies and the statistics used to compare agents.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::agent::greedy_moves;
use crate::game::{legal_moves, Move, Position};
use crate::model::Model;
use crate::oracle::LabelGrid;
use crate::qtable::QTable;

/// Mean over oracle-hot cells of the fraction of the policy's preferred
/// moves (ties included) that land on a cold cell.
pub fn move_accuracy<F>(grid: &LabelGrid, mut preferred: F) -> f64
where
    F: FnMut(Position) -> Vec<Move>,
{
    let mut total = 0.0;
    let mut hot = 0usize;
    for pos in grid.hot_positions() {
        let moves = preferred(pos);
        hot += 1;
        if moves.is_empty() {
            continue;
        }
        let good = moves
            .iter()
            .filter(|mv| grid.is_cold(mv.target(pos).expect("legal move")))
            .count();
        total += good as f64 / moves.len() as f64;
    }
    if hot == 0 {
        1.0
    } else {
        total / hot as f64
    }
}

/// Accuracy of the greedy policy read from a Q-table.
pub fn q_move_accuracy(q: &QTable, grid: &LabelGrid) -> f64 {
    move_accuracy(grid, |pos| greedy_moves(q, grid.rules(), pos))
}

/// Accuracy of the model's most-cold move.
pub fn model_move_accuracy(model: &Model, grid: &LabelGrid) -> f64 {
    let (rows, cols) = (grid.rows(), grid.cols());
    let out = model.output_grid(rows, cols);
    move_accuracy(grid, |pos| {
        let scored: Vec<(Move, f64)> = legal_moves(grid.rules(), pos)
            .into_iter()
            .map(|mv| {
                let t = mv.target(pos).expect("legal move");
                (mv, out[t.row * cols + t.col])
            })
            .collect();
        let best = scored.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        scored.into_iter().filter(|m| m.1 == best).map(|m| m.0).collect()
    })
}

/// Fraction of non-terminal cells where `output >= 0.5` matches "hot".
pub fn model_classification_accuracy(model: &Model, grid: &LabelGrid) -> f64 {
    let mut right = 0usize;
    let mut n = 0usize;
    for pos in grid.positions().filter(|&p| p != Position::ORIGIN) {
        n += 1;
        if (model.output(pos) >= 0.5) == !grid.is_cold(pos) {
            right += 1;
        }
    }
    if n == 0 {
        1.0
    } else {
        right as f64 / n as f64
    }
}

/// Expected accuracy of a uniformly random mover.
pub fn random_move_accuracy(grid: &LabelGrid) -> f64 {
    move_accuracy(grid, |pos| legal_moves(grid.rules(), pos))
}

/// Two-sided p-value of the pooled two-proportion z-test.
pub fn two_proportion_p_value(successes1: f64, n1: f64, successes2: f64, n2: f64) -> f64 {
    let p1 = successes1 / n1;
    let p2 = successes2 / n2;
    let pooled = (successes1 + successes2) / (n1 + n2);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)).sqrt();
    if se == 0.0 {
        return if p1 == p2 { 1.0 } else { 0.0 };
    }
    let z = ((p1 - p2) / se).abs();
    let normal = Normal::standard();
    2.0 * (1.0 - normal.cdf(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::RuleSet;
    use crate::oracle::{perfect_move, solve_retrograde};

    #[test]
    fn perfect_policy_scores_one() {
        let grid = solve_retrograde(RuleSet::Wythoff, 20, 20).unwrap();
        let acc = move_accuracy(&grid, |pos| {
            legal_moves(RuleSet::Wythoff, pos)
                .into_iter()
                .filter(|mv| grid.is_cold(mv.target(pos).unwrap()))
                .collect()
        });
        assert_eq!(acc, 1.0);
        let mut rng = rand::thread_rng();
        let acc = move_accuracy(&grid, |pos| {
            vec![perfect_move(RuleSet::Wythoff, pos, &grid, &mut rng).unwrap().unwrap()]
        });
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn untrained_q_matches_random_baseline() {
        let grid = solve_retrograde(RuleSet::Wythoff, 12, 12).unwrap();
        let q = QTable::new();
        let base = random_move_accuracy(&grid);
        assert!((q_move_accuracy(&q, &grid) - base).abs() < 1e-12);
        assert!(base > 0.0 && base < 0.3);
    }

    #[test]
    fn proportion_test() {
        assert!((two_proportion_p_value(50.0, 100.0, 50.0, 100.0) - 1.0).abs() < 1e-12);
        // pooled p = 0.5, z = 2.83
        let p = two_proportion_p_value(60.0, 100.0, 40.0, 100.0);
        assert!((p - 0.00468).abs() < 1e-4, "{p}");
        assert!(two_proportion_p_value(10.0, 100.0, 12.0, 100.0) > 0.5);
    }
}
