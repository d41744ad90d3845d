//! Sparse state-action value store.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::{Move, MoveKind, Position};

/// Values for every conceivable move out of one position, indexed by amount.
/// Sized for Wythoff, whose move set contains those of Nim and Euclid.
#[derive(Clone, Debug, PartialEq)]
struct Slots {
    row: Vec<f64>,
    col: Vec<f64>,
    diag: Vec<f64>,
}

impl Slots {
    fn new(pos: Position) -> Self {
        Slots {
            row: vec![0.0; pos.row],
            col: vec![0.0; pos.col],
            diag: vec![0.0; pos.min_coord()],
        }
    }

    fn slot(&self, mv: Move) -> Option<&f64> {
        let v = match mv.kind {
            MoveKind::Row => &self.row,
            MoveKind::Col => &self.col,
            MoveKind::Diagonal => &self.diag,
        };
        v.get(mv.amount.checked_sub(1)?)
    }

    fn slot_mut(&mut self, mv: Move) -> Option<&mut f64> {
        let v = match mv.kind {
            MoveKind::Row => &mut self.row,
            MoveKind::Col => &mut self.col,
            MoveKind::Diagonal => &mut self.diag,
        };
        v.get_mut(mv.amount.checked_sub(1)?)
    }
}

/// Q-values keyed by (position, move); unvisited pairs read as 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QTable {
    values: HashMap<Position, Slots>,
}

pub const CSV_HEADER: &str = "row,col,move_kind,move_amount,q_value";

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, pos: Position, mv: Move) -> f64 {
        self.values
            .get(&pos)
            .and_then(|s| s.slot(mv))
            .copied()
            .unwrap_or(0.0)
    }

    /// Panics if `mv` overshoots the board edge.
    pub fn set(&mut self, pos: Position, mv: Move, value: f64) {
        let slot = self
            .values
            .entry(pos)
            .or_insert_with(|| Slots::new(pos))
            .slot_mut(mv)
            .unwrap_or_else(|| panic!("{mv} does not fit at {pos}"));
        *slot = value;
    }

    pub fn clear(&mut self) {
        self.values.clear();
    }

    pub fn visited_states(&self) -> usize {
        self.values.len()
    }

    /// All nonzero entries in a stable order.
    pub fn entries(&self) -> Vec<(Position, Move, f64)> {
        let mut out = Vec::new();
        for (&pos, slots) in &self.values {
            let kinds = [
                (MoveKind::Row, &slots.row),
                (MoveKind::Col, &slots.col),
                (MoveKind::Diagonal, &slots.diag),
            ];
            for (kind, vals) in kinds {
                for (i, &v) in vals.iter().enumerate() {
                    if v != 0.0 {
                        out.push((pos, Move { kind, amount: i + 1 }, v));
                    }
                }
            }
        }
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    /// Values are written with 17 significant digits, which round-trips
    /// every `f64` exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for (pos, mv, v) in self.entries() {
            let _ = writeln!(out, "{},{},{},{},{:.16e}", pos.row, pos.col, mv.kind.name(), mv.amount, v);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut q = QTable::new();
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::Config(format!(
                    "expected Q-table header `{CSV_HEADER}`, found {other:?}"
                )))
            }
        }
        for (i, line) in lines.enumerate() {
            let bad = |what: &str| Error::Config(format!("Q-table line {}: {what}", i + 2));
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let row = fields[0].parse().map_err(|_| bad("row"))?;
            let col = fields[1].parse().map_err(|_| bad("col"))?;
            let kind: MoveKind = fields[2].parse().map_err(|_| bad("move_kind"))?;
            let amount: usize = fields[3].parse().map_err(|_| bad("move_amount"))?;
            let value: f64 = fields[4].parse().map_err(|_| bad("q_value"))?;
            let pos = Position::new(row, col);
            let mv = Move { kind, amount };
            if mv.target(pos).is_none() {
                return Err(bad("move leaves the board"));
            }
            q.set(pos, mv, value);
        }
        Ok(q)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_csv(&text).map_err(|e| Error::file(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_zero_and_set() {
        let mut q = QTable::new();
        let p = Position::new(3, 4);
        assert_eq!(q.get(p, Move::row(2)), 0.0);
        q.set(p, Move::diagonal(3), -0.25);
        assert_eq!(q.get(p, Move::diagonal(3)), -0.25);
        assert_eq!(q.get(p, Move::diagonal(2)), 0.0);
        // amounts past the edge read as zero instead of panicking
        assert_eq!(q.get(p, Move::row(9)), 0.0);
        assert_eq!(q.entries().len(), 1);
    }

    #[test]
    fn rejects_bad_csv() {
        assert!(QTable::from_csv("a,b,c\n").is_err());
        let text = format!("{CSV_HEADER}\n1,1,row,5,0.5\n");
        assert!(QTable::from_csv(&text).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_lossless(entries in prop::collection::vec(
            (0usize..20, 1usize..20, 0u8..3, any::<f64>().prop_filter("finite", |v| v.is_finite())),
            0..40,
        )) {
            let mut q = QTable::new();
            for (row, col, kind, v) in entries {
                let pos = Position::new(row + 1, col);
                let mv = match kind {
                    0 => Move::row(1 + row % pos.row),
                    1 => Move::col(1 + row % col),
                    _ if pos.min_coord() > 0 => Move::diagonal(1),
                    _ => Move::row(1),
                };
                q.set(pos, mv, v);
            }
            let back = QTable::from_csv(&q.to_csv()).unwrap();
            prop_assert_eq!(back.entries(), q.entries());
        }
    }
}
