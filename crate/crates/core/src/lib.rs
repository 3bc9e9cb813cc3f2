//! Choice-and-refusal iterated prisoner's dilemma under limited attention.
//!
//! Players are pure cooperators or pure defectors placed on a complete graph.
//! Each round a random pair meets; a player that remembers its partner as a
//! defector refuses to play. Memory holds at most `M` distinct opponents, and
//! an attention allocation [`Strategy`] decides whom to forget once it is full.
//!
//! The crate is organised bottom-up:
//!
//! - [`recall`] and [`world`]: the bounded memory and the round engine.
//! - [`oracles`]: closed-form expectations and an exhaustive enumerator.
//! - [`experiment`]: seeded, replicated sweeps over the `(mu, delta)` lattice.
//! - [`analysis`]: attention boundaries and cooperation areas.
//! - [`table`]: the CSV files exchanged with plotting tools.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod oracles;
pub mod payoff;
pub mod recall;
pub mod rng;
pub mod strategy;
pub mod table;
pub mod world;

pub use analysis::{
    compare_strategies, cooperation_area, extract_boundary, BoundaryCurve, BoundaryPoint,
    StrategyReport,
};
pub use error::{AnalysisError, ConfigError, OracleError, TableError};
pub use experiment::{derive_seed, run_cell, run_sweep, CellParams, CellStats, Summary, Surface, SweepConfig};
pub use oracles::OracleParams;
pub use payoff::{PayoffMatrix, Personality};
pub use recall::{record_encounter, select_eviction, Recall, RecordEffect};
pub use rng::{DrawSource, Stream};
pub use strategy::{Majority, Strategy};
pub use world::{
    decide, new_world, run_realization, run_realization_with, Decision, PlayerState,
    RealizationResult, RoundKind, RoundOutcome, SimConfig, WorldState,
};
