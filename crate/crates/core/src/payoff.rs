use std::fmt;

use crate::error::ConfigError;

/// Fixed behaviour of a player: always cooperate or always defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Personality {
    Cooperator,
    Defector,
}

impl Personality {
    pub fn is_defector(self) -> bool {
        self == Personality::Defector
    }
}

impl fmt::Display for Personality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Personality::Cooperator => "C",
            Personality::Defector => "D",
        })
    }
}

/// The four prisoner's dilemma payoffs.
///
/// Construction enforces `S < P < R < T` and `T + S < 2R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix {
    temptation: f64,
    reward: f64,
    punishment: f64,
    sucker: f64,
}

impl PayoffMatrix {
    /// T = 5, R = 3, P = 1, S = 0.
    pub const STANDARD: PayoffMatrix = PayoffMatrix {
        temptation: 5.0,
        reward: 3.0,
        punishment: 1.0,
        sucker: 0.0,
    };

    pub fn new(temptation: f64, reward: f64, punishment: f64, sucker: f64) -> Result<Self, ConfigError> {
        let ordered = sucker < punishment && punishment < reward && reward < temptation;
        if !ordered {
            return Err(ConfigError::PayoffOrdering {
                t: temptation,
                r: reward,
                p: punishment,
                s: sucker,
            });
        }
        if temptation + sucker >= 2.0 * reward {
            return Err(ConfigError::PayoffRepetition {
                t: temptation,
                r: reward,
                s: sucker,
            });
        }
        Ok(PayoffMatrix {
            temptation,
            reward,
            punishment,
            sucker,
        })
    }

    pub fn temptation(&self) -> f64 {
        self.temptation
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    pub fn punishment(&self) -> f64 {
        self.punishment
    }

    pub fn sucker(&self) -> f64 {
        self.sucker
    }

    /// Payoff received by a `me` player facing an `other` player.
    #[inline]
    pub fn payoff(&self, me: Personality, other: Personality) -> f64 {
        use Personality::*;
        match (me, other) {
            (Cooperator, Cooperator) => self.reward,
            (Cooperator, Defector) => self.sucker,
            (Defector, Cooperator) => self.temptation,
            (Defector, Defector) => self.punishment,
        }
    }
}

impl Default for PayoffMatrix {
    fn default() -> Self {
        PayoffMatrix::STANDARD
    }
}
