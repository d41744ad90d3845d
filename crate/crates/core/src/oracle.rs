//! Exact hot/cold labels: retrograde solving plus the closed forms for each
//! game, and a perfect-play move generator built on a solved grid.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{legal_moves, Move, Position, RuleSet};

/// Default cap on solved cells.
pub const DEFAULT_CELL_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Hot,
    Cold,
}

/// Solved board. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelGrid {
    rules: RuleSet,
    rows: usize,
    cols: usize,
    cold: Vec<bool>,
}

impl LabelGrid {
    pub fn rules(&self) -> RuleSet {
        self.rules
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, pos: Position) -> bool {
        pos.row < self.rows && pos.col < self.cols
    }

    pub fn label(&self, pos: Position) -> Option<Label> {
        self.contains(pos).then(|| {
            if self.cold[pos.row * self.cols + pos.col] {
                Label::Cold
            } else {
                Label::Hot
            }
        })
    }

    /// Panics when `pos` is off the board.
    pub fn is_cold(&self, pos: Position) -> bool {
        assert!(self.contains(pos), "{pos} outside {}x{}", self.rows, self.cols);
        self.cold[pos.row * self.cols + pos.col]
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        let cols = self.cols;
        (0..self.rows * cols).map(move |i| Position::new(i / cols, i % cols))
    }

    pub fn hot_positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.positions().filter(|&p| !self.is_cold(p))
    }

    pub fn cold_positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.positions().filter(|&p| self.is_cold(p))
    }

    /// CSV rendering: a header, the dimensions, then one line per row with
    /// 0 for cold and 1 for hot.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# solve game={} rows={} cols={}", self.rules, self.rows, self.cols);
        out.push_str("rows,cols,game\n");
        let _ = writeln!(out, "{},{},{}", self.rows, self.cols, self.rules);
        for r in 0..self.rows {
            let line: Vec<&str> = (0..self.cols)
                .map(|c| if self.cold[r * self.cols + c] { "0" } else { "1" })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn solve_retrograde(rules: RuleSet, rows: usize, cols: usize) -> Result<LabelGrid> {
    solve_retrograde_with_limit(rules, rows, cols, DEFAULT_CELL_LIMIT)
}

pub fn solve_retrograde_with_limit(
    rules: RuleSet,
    rows: usize,
    cols: usize,
    limit: u64,
) -> Result<LabelGrid> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!("empty board {rows}x{cols}")));
    }
    let cells = rows as u64 * cols as u64;
    if cells > limit {
        return Err(Error::ResourceLimit { cells, limit });
    }
    let mut cold = vec![false; rows * cols];
    // Every successor lies in an earlier row, or earlier in the same row,
    // so row-major order visits successors first.
    for r in 0..rows {
        for c in 0..cols {
            let pos = Position::new(r, c);
            let any_cold_successor = legal_moves(rules, pos).into_iter().any(|mv| {
                let t = mv.target(pos).expect("legal move");
                cold[t.row * cols + t.col]
            });
            cold[r * cols + c] = !any_cold_successor;
        }
    }
    Ok(LabelGrid {
        rules,
        rows,
        cols,
        cold,
    })
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `floor(k * phi)` in exact integer arithmetic.
///
/// `k * phi = (k + sqrt(5 k^2)) / 2` and `sqrt(5 k^2)` is irrational for
/// `k > 0`, so its fractional part never pushes the half past an integer.
pub fn floor_k_phi(k: u64) -> u64 {
    let k = k as u128;
    ((k + isqrt(5 * k * k)) / 2) as u64
}

/// The `k`-th cold pair of Wythoff's game and its mirror image.
pub fn wythoff_cold_pair(k: u64) -> (Position, Position) {
    let r = floor_k_phi(k);
    // floor(k phi^2) = floor(k phi) + k
    let c = r + k;
    let p = Position::new(r as usize, c as usize);
    (p, p.transpose())
}

/// Closed-form cold test for each game.
pub fn is_cold_closed_form(rules: RuleSet, pos: Position) -> bool {
    let a = pos.min_coord() as u128;
    let b = pos.max_coord() as u128;
    match rules {
        RuleSet::Wythoff => floor_k_phi((b - a) as u64) as u128 == a,
        RuleSet::Nim => a == b,
        // cold iff b / a < phi, i.e. (2b - a)^2 < 5 a^2 for a >= 1. Equality
        // is impossible since phi is irrational.
        RuleSet::Euclid => {
            if a == 0 {
                b == 0
            } else {
                let lhs = 2 * b - a;
                lhs * lhs < 5 * a * a
            }
        }
    }
}

/// Cold test for k-pile Nim: the xor of all piles is zero.
pub fn nim_xor_cold(piles: &[u64]) -> bool {
    assert!(!piles.is_empty(), "need at least one pile");
    piles.iter().fold(0, |acc, &p| acc ^ p) == 0
}

/// Retrograde labels for k-pile Nim on a box `0..dims[0] x ... x 0..dims[k-1]`.
/// Cells are indexed in row-major (last pile fastest) order; `true` is cold.
pub fn solve_nim_piles(dims: &[usize]) -> Vec<bool> {
    assert!(!dims.is_empty() && dims.iter().all(|&d| d > 0));
    let total: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len() - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut cold = vec![false; total];
    // Any reduction lowers the flat index, so increasing index order works.
    for idx in 0..total {
        let mut any_cold = false;
        'piles: for (axis, &stride) in strides.iter().enumerate() {
            let pile = (idx / stride) % dims[axis];
            for take in 1..=pile {
                if cold[idx - take * stride] {
                    any_cold = true;
                    break 'piles;
                }
            }
        }
        cold[idx] = !any_cold;
    }
    cold
}

/// A move to a cold successor when one exists (uniform among them),
/// otherwise any legal move. `None` at the terminal.
pub fn perfect_move<R: Rng + ?Sized>(
    rules: RuleSet,
    pos: Position,
    grid: &LabelGrid,
    rng: &mut R,
) -> Result<Option<Move>> {
    if !grid.contains(pos) {
        return Err(Error::OutOfBounds {
            pos,
            rows: grid.rows(),
            cols: grid.cols(),
        });
    }
    let moves = legal_moves(rules, pos);
    if moves.is_empty() {
        return Ok(None);
    }
    let winning: Vec<Move> = moves
        .iter()
        .copied()
        .filter(|mv| grid.is_cold(mv.target(pos).expect("legal move")))
        .collect();
    let pool = if winning.is_empty() { &moves } else { &winning };
    Ok(pool.choose(rng).copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::apply_move;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    /// Plain recursive minimax, independent of the row-major solver.
    fn mover_wins(rules: RuleSet, pos: Position, memo: &mut HashMap<Position, bool>) -> bool {
        if let Some(&w) = memo.get(&pos) {
            return w;
        }
        let win = legal_moves(rules, pos)
            .into_iter()
            .any(|mv| !mover_wins(rules, apply_move(rules, pos, mv).unwrap(), memo));
        memo.insert(pos, win);
        win
    }

    fn cold_set(grid: &LabelGrid) -> BTreeSet<(usize, usize)> {
        grid.cold_positions().map(|p| (p.row, p.col)).collect()
    }

    #[test]
    fn wythoff_three_by_three() {
        let grid = solve_retrograde(RuleSet::Wythoff, 3, 3).unwrap();
        let expected: BTreeSet<_> = [(0, 0), (1, 2), (2, 1)].into_iter().collect();
        assert_eq!(cold_set(&grid), expected);
        let mut memo = HashMap::new();
        for p in grid.positions() {
            assert_eq!(grid.is_cold(p), !mover_wins(RuleSet::Wythoff, p, &mut memo), "{p}");
        }
    }

    #[test]
    fn minimax_agrees_on_all_games() {
        for rules in RuleSet::ALL {
            let grid = solve_retrograde(rules, 25, 19).unwrap();
            let mut memo = HashMap::new();
            for p in grid.positions() {
                assert_eq!(grid.is_cold(p), !mover_wins(rules, p, &mut memo), "{rules} {p}");
            }
        }
    }

    #[test]
    fn nim_cold_on_diagonal() {
        let grid = solve_retrograde(RuleSet::Nim, 4, 4).unwrap();
        let expected: BTreeSet<_> = (0..4).map(|k| (k, k)).collect();
        assert_eq!(cold_set(&grid), expected);
    }

    #[test]
    fn euclid_small_board() {
        let grid = solve_retrograde(RuleSet::Euclid, 4, 4).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for p in grid.positions() {
            let (a, b) = (p.min_coord() as f64, p.max_coord() as f64);
            let expected = p == Position::ORIGIN || (a > 0.0 && a > b / phi);
            assert_eq!(grid.is_cold(p), expected, "{p}");
        }
        assert!(grid.is_cold(Position::new(2, 3)));
        assert!(!grid.is_cold(Position::new(1, 2)));
        assert!(!grid.is_cold(Position::new(0, 3)));
    }

    #[test]
    fn cold_pairs() {
        assert_eq!(wythoff_cold_pair(0), (Position::new(0, 0), Position::new(0, 0)));
        assert_eq!(wythoff_cold_pair(1), (Position::new(1, 2), Position::new(2, 1)));
        assert_eq!(wythoff_cold_pair(4), (Position::new(6, 10), Position::new(10, 6)));
        let grid = solve_retrograde(RuleSet::Wythoff, 11, 11).unwrap();
        for k in 0..=4 {
            let (p, q) = wythoff_cold_pair(k);
            assert!(grid.is_cold(p) && grid.is_cold(q));
        }
    }

    #[test]
    fn floor_phi_matches_big_float_reference() {
        // (k + sqrt(5k^2)) / 2 with the root bracketed from both sides.
        for k in [1u64, 2, 3, 1000, 999_999, 1_000_000, 123_456_789] {
            let r = floor_k_phi(k) as u128;
            let k = k as u128;
            // r <= k phi < r + 1  <=>  (2r - k)^2 <= 5k^2 < (2r + 2 - k)^2
            assert!(2 * r >= k);
            assert!((2 * r - k).pow(2) <= 5 * k * k);
            assert!(5 * k * k < (2 * r + 2 - k).pow(2));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(is_cold_closed_form(RuleSet::Nim, Position::new(7, 7)));
        assert!(is_cold_closed_form(RuleSet::Wythoff, Position::new(3, 5)));
        assert!(is_cold_closed_form(RuleSet::Euclid, Position::new(2, 3)));
        assert!(!is_cold_closed_form(RuleSet::Euclid, Position::new(1, 2)));
        for rules in RuleSet::ALL {
            assert!(is_cold_closed_form(rules, Position::ORIGIN));
        }
    }

    #[test]
    fn xor_rule() {
        assert!(nim_xor_cold(&[5, 5]));
        assert!(nim_xor_cold(&[1, 2, 3]));
        assert!(!nim_xor_cold(&[1, 2, 4]));
        let cold = solve_nim_piles(&[4, 4, 4]);
        for (idx, &c) in cold.iter().enumerate() {
            let piles = [(idx / 16) as u64, (idx / 4 % 4) as u64, (idx % 4) as u64];
            assert_eq!(c, nim_xor_cold(&piles), "{piles:?}");
        }
    }

    #[test]
    fn perfect_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let grid = solve_retrograde(RuleSet::Wythoff, 5, 5).unwrap();
        let mv = perfect_move(RuleSet::Wythoff, Position::new(1, 1), &grid, &mut rng).unwrap();
        assert_eq!(mv, Some(Move::diagonal(1)));
        let nim = solve_retrograde(RuleSet::Nim, 5, 5).unwrap();
        let mv = perfect_move(RuleSet::Nim, Position::new(3, 1), &nim, &mut rng).unwrap();
        assert_eq!(mv, Some(Move::row(2)));
        // a cold start: any legal move, all lead to hot cells
        for _ in 0..20 {
            let mv = perfect_move(RuleSet::Wythoff, Position::new(1, 2), &grid, &mut rng)
                .unwrap()
                .unwrap();
            let t = mv.target(Position::new(1, 2)).unwrap();
            assert!(!grid.is_cold(t));
        }
        assert_eq!(perfect_move(RuleSet::Wythoff, Position::ORIGIN, &grid, &mut rng).unwrap(), None);
        assert!(matches!(
            perfect_move(RuleSet::Wythoff, Position::new(5, 0), &grid, &mut rng),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn resource_limit() {
        let err = solve_retrograde_with_limit(RuleSet::Nim, 100, 100, 9_999).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { cells: 10_000, .. }));
    }

    #[test]
    fn csv_layout() {
        let grid = solve_retrograde(RuleSet::Nim, 2, 3).unwrap();
        let csv = grid.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(&lines[1..], &["rows,cols,game", "2,3,nim", "0,1,1", "1,0,1"]);
    }
}
