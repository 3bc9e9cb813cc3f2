use std::fmt;
use std::str::FromStr;

use crate::payoff::Personality;

/// Attention allocation strategy: which record to forget when a full recall
/// meets a new opponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Forget only cooperators.
    Foc,
    /// Forget only defectors.
    Fod,
    /// Forget a uniformly random record.
    Far,
    /// Flip a fair coin for the type, then forget a random record of it.
    Feq,
    /// Forget the population majority type.
    Fmj,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Foc,
        Strategy::Fod,
        Strategy::Far,
        Strategy::Feq,
        Strategy::Fmj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Foc => "FOC",
            Strategy::Fod => "FOD",
            Strategy::Far => "FAR",
            Strategy::Feq => "FEQ",
            Strategy::Fmj => "FMJ",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown strategy {0:?} (expected one of FOC, FOD, FAR, FEQ, FMJ)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

/// Population-level majority personality, known to every player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Majority {
    Cooperators,
    Defectors,
    Tie,
}

impl Majority {
    pub fn of(n: u32, defectors: u32) -> Majority {
        let cooperators = n - defectors;
        match defectors.cmp(&cooperators) {
            std::cmp::Ordering::Less => Majority::Cooperators,
            std::cmp::Ordering::Greater => Majority::Defectors,
            std::cmp::Ordering::Equal => Majority::Tie,
        }
    }

    pub fn personality(self) -> Option<Personality> {
        match self {
            Majority::Cooperators => Some(Personality::Cooperator),
            Majority::Defectors => Some(Personality::Defector),
            Majority::Tie => None,
        }
    }
}
