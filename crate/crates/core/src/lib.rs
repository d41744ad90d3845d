//! Hierarchical Q-Network laboratory on impartial games.
//!
//! The crate pairs every learner with an exact oracle: Wythoff's game, Nim
//! and Euclid are solved by retrograde analysis, so Q-tables, learned
//! hot/cold models and the Q-network baseline can all be scored against
//! ground truth.
//!
//! - [`game`]: positions, moves and the three rule sets
//! - [`oracle`]: retrograde labels, closed forms and perfect play
//! - [`agent`] and [`qtable`]: tabular Q-learning with the model gate
//! - [`mlp`] and [`model`]: the hot/cold model network
//! - [`controller`]: the outer loop with drop detection and model memory
//! - [`qnet`]: the Q-network baseline
//! - [`bench`]: experiment drivers and CSV records

pub mod agent;
pub mod bench;
pub mod controller;
pub mod error;
pub mod game;
pub mod metrics;
pub mod mlp;
pub mod model;
pub mod oracle;
pub mod qnet;
pub mod qtable;

pub use error::{Error, Result};
pub use game::{Move, MoveKind, Position, RuleSet};
