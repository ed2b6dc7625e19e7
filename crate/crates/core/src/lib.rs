//! Exact equilibrium engine for two-player sequential scrip-bidding games.
//!
//! Games are DAGs where the right to move is auctioned each turn: both players
//! submit bids from a fixed joint budget, the higher bidder pays the loser and
//! chooses the next move. This crate compiles such games from auction
//! specifications, computes their lowest pure subgame-perfect equilibrium by
//! two independent algorithms, computes Richman values for the zero-sum case,
//! and audits equilibrium properties (deviation-freeness, Pareto efficiency,
//! budget monotonicity) with exact rational arithmetic throughout.

pub mod analysis;
pub mod compilers;
pub mod dyadic;
pub mod game;
pub mod random;
pub mod richman;
pub mod solver_fast;
pub mod solver_grid;

pub use dyadic::{Dyadic, DyadicParseError};
pub use game::{
    pair_cmp, pareto_set, prefers, utility, BiddingGame, GameBuilder, GameError, NodeId,
    OutcomeMap, Player, PreferenceOrder, TieBreak, Utility,
};
