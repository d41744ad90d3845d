//! Board positions, moves and the three rule sets.
//!
//! A position stores the distance to the goal corner along each axis, so
//! every move decreases at least one coordinate and `(0, 0)` is the only
//! terminal state.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const ORIGIN: Position = Position { row: 0, col: 0 };

    pub const fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }

    pub fn transpose(self) -> Self {
        Position::new(self.col, self.row)
    }

    pub fn min_coord(self) -> usize {
        self.row.min(self.col)
    }

    pub fn max_coord(self) -> usize {
        self.row.max(self.col)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for Position {
    fn from((row, col): (usize, usize)) -> Self {
        Position::new(row, col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleSet {
    Wythoff,
    Nim,
    Euclid,
}

impl RuleSet {
    pub const ALL: [RuleSet; 3] = [RuleSet::Wythoff, RuleSet::Nim, RuleSet::Euclid];

    pub fn name(self) -> &'static str {
        match self {
            RuleSet::Wythoff => "wythoff",
            RuleSet::Nim => "nim",
            RuleSet::Euclid => "euclid",
        }
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wythoff" => Ok(RuleSet::Wythoff),
            "nim" => Ok(RuleSet::Nim),
            "euclid" => Ok(RuleSet::Euclid),
            other => Err(Error::Config(format!("unknown game `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Row,
    Col,
    Diagonal,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Row => "row",
            MoveKind::Col => "col",
            MoveKind::Diagonal => "diagonal",
        }
    }
}

impl FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "row" => Ok(MoveKind::Row),
            "col" => Ok(MoveKind::Col),
            "diagonal" => Ok(MoveKind::Diagonal),
            other => Err(Error::Config(format!("unknown move kind `{other}`"))),
        }
    }
}

/// A reduction of one or both coordinates. `amount` is always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub amount: usize,
}

impl Move {
    pub const fn row(amount: usize) -> Self {
        Move { kind: MoveKind::Row, amount }
    }

    pub const fn col(amount: usize) -> Self {
        Move { kind: MoveKind::Col, amount }
    }

    pub const fn diagonal(amount: usize) -> Self {
        Move { kind: MoveKind::Diagonal, amount }
    }

    /// Successor without any legality check beyond non-negativity.
    pub fn target(self, pos: Position) -> Option<Position> {
        if self.amount == 0 {
            return None;
        }
        match self.kind {
            MoveKind::Row => pos.row.checked_sub(self.amount).map(|r| Position::new(r, pos.col)),
            MoveKind::Col => pos.col.checked_sub(self.amount).map(|c| Position::new(pos.row, c)),
            MoveKind::Diagonal => Some(Position::new(
                pos.row.checked_sub(self.amount)?,
                pos.col.checked_sub(self.amount)?,
            )),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.name(), self.amount)
    }
}

/// Legal moves in a fixed order: row amounts ascending, then column, then
/// diagonal. Empty exactly at the origin.
pub fn legal_moves(rules: RuleSet, pos: Position) -> Vec<Move> {
    let mut out = Vec::with_capacity(pos.row + pos.col + pos.min_coord());
    legal_moves_into(rules, pos, &mut out);
    out
}

/// Same as [`legal_moves`] but reuses the caller's buffer.
pub fn legal_moves_into(rules: RuleSet, pos: Position, out: &mut Vec<Move>) {
    out.clear();
    let step = match rules {
        RuleSet::Wythoff | RuleSet::Nim => 1,
        // With a zero coordinate the multiple-of-minimum rule is vacuous;
        // the other pile is reduced freely so the origin stays reachable.
        RuleSet::Euclid => pos.min_coord().max(1),
    };
    out.extend((step..=pos.row).step_by(step).map(Move::row));
    out.extend((step..=pos.col).step_by(step).map(Move::col));
    if rules == RuleSet::Wythoff {
        out.extend((1..=pos.min_coord()).map(Move::diagonal));
    }
}

pub fn is_legal(rules: RuleSet, pos: Position, mv: Move) -> bool {
    if mv.target(pos).is_none() {
        return false;
    }
    match (rules, mv.kind) {
        (RuleSet::Wythoff, _) => true,
        (_, MoveKind::Diagonal) => false,
        (RuleSet::Nim, _) => true,
        (RuleSet::Euclid, _) => {
            let m = pos.min_coord();
            m == 0 || mv.amount.is_multiple_of(m)
        }
    }
}

pub fn apply_move(rules: RuleSet, pos: Position, mv: Move) -> Result<Position> {
    if !is_legal(rules, pos, mv) {
        return Err(Error::IllegalMove { pos, mv });
    }
    // is_legal guarantees the target exists
    Ok(mv.target(pos).expect("legal move has a target"))
}

pub fn is_terminal(pos: Position) -> bool {
    pos == Position::ORIGIN
}

/// Uniform start position on a `rows` x `cols` board, never the origin.
pub fn random_start<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Position {
    assert!(rows * cols >= 2, "board must have a non-terminal cell");
    let idx = rng.gen_range(1..rows * cols);
    Position::new(idx / cols, idx % cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn set(moves: Vec<Move>) -> BTreeSet<Move> {
        moves.into_iter().collect()
    }

    #[test]
    fn unit_square_moves() {
        let p = Position::new(1, 1);
        assert_eq!(
            set(legal_moves(RuleSet::Wythoff, p)),
            set(vec![Move::row(1), Move::col(1), Move::diagonal(1)])
        );
        assert_eq!(
            set(legal_moves(RuleSet::Nim, p)),
            set(vec![Move::row(1), Move::col(1)])
        );
    }

    #[test]
    fn euclid_moves_are_multiples_of_min() {
        let moves = set(legal_moves(RuleSet::Euclid, Position::new(2, 5)));
        assert_eq!(moves, set(vec![Move::row(2), Move::col(2), Move::col(4)]));
        // axis positions fall back to free reductions
        let moves = legal_moves(RuleSet::Euclid, Position::new(0, 3));
        assert_eq!(moves, vec![Move::col(1), Move::col(2), Move::col(3)]);
    }

    #[test]
    fn apply_examples() {
        let p = Position::new(3, 5);
        assert_eq!(apply_move(RuleSet::Wythoff, p, Move::diagonal(3)).unwrap(), Position::new(0, 2));
        assert_eq!(apply_move(RuleSet::Wythoff, p, Move::col(5)).unwrap(), Position::new(3, 0));
        assert_eq!(
            apply_move(RuleSet::Wythoff, Position::new(1, 1), Move::diagonal(1)).unwrap(),
            Position::ORIGIN
        );
    }

    #[test]
    fn illegal_moves_rejected() {
        let p = Position::new(3, 5);
        assert!(matches!(
            apply_move(RuleSet::Nim, p, Move::diagonal(1)),
            Err(Error::IllegalMove { .. })
        ));
        assert!(apply_move(RuleSet::Wythoff, p, Move::row(4)).is_err());
        assert!(apply_move(RuleSet::Euclid, p, Move::col(4)).is_err());
        assert!(apply_move(RuleSet::Wythoff, p, Move::row(0)).is_err());
    }

    #[test]
    fn terminal_only_at_origin() {
        assert!(is_terminal(Position::new(0, 0)));
        assert!(!is_terminal(Position::new(0, 1)));
        assert!(!is_terminal(Position::new(7, 4)));
        for rules in RuleSet::ALL {
            assert!(legal_moves(rules, Position::ORIGIN).is_empty());
            assert!(!legal_moves(rules, Position::new(0, 1)).is_empty());
        }
    }

    #[test]
    fn random_start_covers_small_board_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 4];
        let n = 30_000;
        for _ in 0..n {
            let p = random_start(2, 2, &mut rng);
            counts[p.row * 2 + p.col] += 1;
        }
        assert_eq!(counts[0], 0);
        for &c in &counts[1..] {
            let freq = c as f64 / n as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.015, "freq {freq}");
        }
    }

    #[test]
    fn random_start_replays_with_seed() {
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..50).map(|_| random_start(12, 12, &mut rng)).collect()
        };
        let b: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            (0..50).map(|_| random_start(12, 12, &mut rng)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn rules_parse_round_trip() {
        for rules in RuleSet::ALL {
            assert_eq!(rules.name().parse::<RuleSet>().unwrap(), rules);
        }
        assert!("chess".parse::<RuleSet>().is_err());
    }
}
