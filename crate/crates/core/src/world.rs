//! Single-realization round engine.

use crate::error::ConfigError;
use crate::payoff::{PayoffMatrix, Personality};
use crate::recall::{record_encounter, Recall};
use crate::rng::{DrawSource, Stream};
use crate::strategy::{Majority, Strategy};

/// Parameters of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Population size.
    pub n: u32,
    /// Number of defectors.
    pub defectors: u32,
    /// Attention capacity: how many distinct opponents a player can remember.
    pub memory: u32,
    /// Expected plays per pair; the run lasts `round(tau * n^2 / 2)` rounds.
    pub tau: f64,
    pub strategy: Strategy,
    pub payoffs: PayoffMatrix,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(n: u32, defectors: u32, memory: u32, tau: f64, strategy: Strategy, seed: u64) -> Self {
        SimConfig {
            n,
            defectors,
            memory,
            tau,
            strategy,
            payoffs: PayoffMatrix::STANDARD,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::PopulationTooSmall(self.n));
        }
        if self.defectors > self.n {
            return Err(ConfigError::TooManyDefectors {
                defectors: self.defectors,
                n: self.n,
            });
        }
        if self.memory > self.n {
            return Err(ConfigError::MemoryTooLarge {
                memory: self.memory,
                n: self.n,
            });
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(ConfigError::InvalidTau(self.tau));
        }
        Ok(())
    }

    /// Total number of rounds, `round(tau * n^2 / 2)`.
    pub fn rounds(&self) -> u64 {
        rounds_for(self.n, self.tau)
    }

    pub fn mu(&self) -> f64 {
        self.memory as f64 / self.n as f64
    }

    pub fn delta(&self) -> f64 {
        self.defectors as f64 / self.n as f64
    }
}

pub(crate) fn rounds_for(n: u32, tau: f64) -> u64 {
    let n = n as f64;
    (tau * n * n / 2.0).round() as u64
}

#[derive(Debug, Clone)]
pub struct PlayerState {
    index: u32,
    personality: Personality,
    recall: Recall,
    payoff: f64,
    cooperator_games: u64,
    defector_games: u64,
}

impl PlayerState {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn personality(&self) -> Personality {
        self.personality
    }

    pub fn recall(&self) -> &Recall {
        &self.recall
    }

    /// Accumulated payoff points.
    pub fn payoff(&self) -> f64 {
        self.payoff
    }

    /// Payoff-yielding games played against cooperators.
    pub fn cooperator_games(&self) -> u64 {
        self.cooperator_games
    }

    /// Payoff-yielding games played against defectors.
    pub fn defector_games(&self) -> u64 {
        self.defector_games
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Play,
    Refuse,
}

/// Refuse iff either side currently remembers the other as a defector.
pub fn decide(a: &PlayerState, b: &PlayerState) -> Decision {
    debug_assert_ne!(a.index, b.index);
    if a.recall.knows_defector(b.index) || b.recall.knows_defector(a.index) {
        Decision::Refuse
    } else {
        Decision::Play
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundKind {
    Refused,
    PlayedCC,
    PlayedCD,
    PlayedDD,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundOutcome {
    /// Selected players in draw order.
    pub pair: (u32, u32),
    pub kind: RoundKind,
    /// Payoff added to the first and second player.
    pub deltas: (f64, f64),
}

/// Averaged outcome of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationResult {
    /// Mean cooperator payoff; `None` when there are no cooperators.
    pub cooperator_mean: Option<f64>,
    /// Mean defector payoff; `None` when there are no defectors.
    pub defector_mean: Option<f64>,
    pub rounds: u64,
    pub refused: u64,
}

impl RealizationResult {
    pub fn diff(&self) -> Option<f64> {
        Some(self.cooperator_mean? - self.defector_mean?)
    }
}

/// All players of one realization plus running counters.
#[derive(Debug, Clone)]
pub struct WorldState {
    config: SimConfig,
    majority: Majority,
    players: Vec<PlayerState>,
    rounds: u64,
    refused: u64,
    delta_total: f64,
}

impl WorldState {
    /// Fresh world with exactly `config.defectors` defectors placed uniformly
    /// at random using `placement` draws.
    pub fn new<R: DrawSource>(config: &SimConfig, placement: &mut R) -> Result<Self, ConfigError> {
        config.validate()?;
        let n = config.n;
        // Partial Fisher-Yates: the first `defectors` slots become defectors.
        let mut order: Vec<u32> = (0..n).collect();
        for k in 0..config.defectors {
            let pick = k + placement.below(n - k);
            order.swap(k as usize, pick as usize);
        }
        let mut personalities = vec![Personality::Cooperator; n as usize];
        for &i in &order[..config.defectors as usize] {
            personalities[i as usize] = Personality::Defector;
        }
        let players = personalities
            .into_iter()
            .enumerate()
            .map(|(i, personality)| PlayerState {
                index: i as u32,
                personality,
                recall: Recall::new(config.memory, n),
                payoff: 0.0,
                cooperator_games: 0,
                defector_games: 0,
            })
            .collect();
        Ok(WorldState {
            config: config.clone(),
            majority: Majority::of(n, config.defectors),
            players,
            rounds: 0,
            refused: 0,
            delta_total: 0.0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn majority(&self) -> Majority {
        self.majority
    }

    pub fn players(&self) -> &[PlayerState] {
        &self.players
    }

    pub fn player(&self, index: u32) -> &PlayerState {
        &self.players[index as usize]
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn refused(&self) -> u64 {
        self.refused
    }

    /// Sum of both deltas over every round so far.
    pub fn delta_total(&self) -> f64 {
        self.delta_total
    }

    /// Runs one iteration: draws an unordered pair uniformly from the
    /// selection stream, applies the refusal rule and, if they play, pays out
    /// and lets both sides record each other (first player first).
    pub fn play_round<S: DrawSource, E: DrawSource>(
        &mut self,
        selection: &mut S,
        eviction: &mut E,
    ) -> RoundOutcome {
        let n = self.config.n;
        let i = selection.below(n);
        let mut j = selection.below(n - 1);
        if j >= i {
            j += 1;
        }
        self.rounds += 1;

        let (a, b) = (&self.players[i as usize], &self.players[j as usize]);
        if decide(a, b) == Decision::Refuse {
            self.refused += 1;
            return RoundOutcome {
                pair: (i, j),
                kind: RoundKind::Refused,
                deltas: (0.0, 0.0),
            };
        }

        let (pi, pj) = (a.personality, b.personality);
        let payoffs = self.config.payoffs;
        let deltas = (payoffs.payoff(pi, pj), payoffs.payoff(pj, pi));
        let kind = match (pi, pj) {
            (Personality::Cooperator, Personality::Cooperator) => RoundKind::PlayedCC,
            (Personality::Defector, Personality::Defector) => RoundKind::PlayedDD,
            _ => RoundKind::PlayedCD,
        };
        self.delta_total += deltas.0 + deltas.1;

        let (strategy, majority) = (self.config.strategy, self.majority);
        for (me, other, other_personality, delta) in [(i, j, pj, deltas.0), (j, i, pi, deltas.1)] {
            let player = &mut self.players[me as usize];
            player.payoff += delta;
            match other_personality {
                Personality::Cooperator => player.cooperator_games += 1,
                Personality::Defector => player.defector_games += 1,
            }
            record_encounter(
                &mut player.recall,
                other,
                other_personality,
                strategy,
                majority,
                eviction,
            );
        }

        RoundOutcome {
            pair: (i, j),
            kind,
            deltas,
        }
    }

    /// Mean payoffs of the current state.
    pub fn result(&self) -> RealizationResult {
        let mean = |personality: Personality| {
            let (sum, count) = self
                .players
                .iter()
                .filter(|p| p.personality == personality)
                .fold((0.0, 0u32), |(s, c), p| (s + p.payoff, c + 1));
            (count > 0).then(|| sum / count as f64)
        };
        RealizationResult {
            cooperator_mean: mean(Personality::Cooperator),
            defector_mean: mean(Personality::Defector),
            rounds: self.rounds,
            refused: self.refused,
        }
    }
}

/// Fresh world for `config`, placing defectors with its selection stream.
pub fn new_world(config: &SimConfig) -> Result<(WorldState, Stream, Stream), ConfigError> {
    let mut selection = Stream::selection(config.seed);
    let world = WorldState::new(config, &mut selection)?;
    Ok((world, selection, Stream::eviction(config.seed)))
}

/// Runs a full realization driven by the given draw sources. Placement draws
/// come from `selection`.
pub fn run_realization_with<S: DrawSource, E: DrawSource>(
    config: &SimConfig,
    mut selection: S,
    mut eviction: E,
) -> Result<RealizationResult, ConfigError> {
    let mut world = WorldState::new(config, &mut selection)?;
    for _ in 0..config.rounds() {
        world.play_round(&mut selection, &mut eviction);
    }
    Ok(world.result())
}

/// Runs a full realization; a pure function of `config`.
pub fn run_realization(config: &SimConfig) -> Result<RealizationResult, ConfigError> {
    run_realization_with(
        config,
        Stream::selection(config.seed),
        Stream::eviction(config.seed),
    )
}
