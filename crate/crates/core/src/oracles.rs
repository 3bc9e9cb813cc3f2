//! Closed-form expectations and a brute-force enumerator for tiny instances.
//!
//! The asymptotic forms assume pairs drawn with replacement; the simulator
//! draws distinct pairs, so the `_exact` variants carry the finite-N factors
//! `(|C| - 1) / (N - 1)` and use the integer round count.

use std::collections::BTreeMap;

use crate::error::{ConfigError, OracleError};
use crate::payoff::{PayoffMatrix, Personality};
use crate::strategy::{Majority, Strategy};
use crate::world::{rounds_for, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub n: u32,
    pub defectors: u32,
    pub tau: f64,
    pub payoffs: PayoffMatrix,
}

impl OracleParams {
    pub fn new(n: u32, defectors: u32, tau: f64) -> Self {
        OracleParams {
            n,
            defectors,
            tau,
            payoffs: PayoffMatrix::STANDARD,
        }
    }

    /// Parameters whose round count is exactly `rounds`.
    pub fn with_rounds(n: u32, defectors: u32, rounds: u64) -> Self {
        let nf = n as f64;
        OracleParams::new(n, defectors, 2.0 * rounds as f64 / (nf * nf))
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
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(ConfigError::InvalidTau(self.tau));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.defectors as f64 / self.n as f64
    }

    pub fn cooperators(&self) -> u32 {
        self.n - self.defectors
    }

    pub fn rounds(&self) -> u64 {
        rounds_for(self.n, self.tau)
    }

    fn need_cooperators(&self) -> Result<(), OracleError> {
        self.validate()?;
        if self.defectors == self.n {
            return Err(OracleError::UndefinedPopulation("cooperator"));
        }
        Ok(())
    }

    fn need_defectors(&self) -> Result<(), OracleError> {
        self.validate()?;
        if self.defectors == 0 {
            return Err(OracleError::UndefinedPopulation("defector"));
        }
        Ok(())
    }
}

/// `R (1 - delta) tau N`.
pub fn cooperator_mean_asymptotic(p: &OracleParams) -> Result<f64, OracleError> {
    p.need_cooperators()?;
    Ok(p.payoffs.reward() * (1.0 - p.delta()) * p.tau * p.n as f64)
}

/// Expected mean cooperator payoff under distinct-pair sampling:
/// `2 R rounds (|C| - 1) / (N (N - 1))`, i.e. `R tau N (|C| - 1) / (N - 1)`.
pub fn cooperator_mean_exact(p: &OracleParams) -> Result<f64, OracleError> {
    p.need_cooperators()?;
    let n = p.n as f64;
    let c = p.cooperators() as f64;
    Ok(2.0 * p.payoffs.reward() * p.rounds() as f64 * (c - 1.0) / (n * (n - 1.0)))
}

/// Mean defector payoff without memory: `[T (1 - delta) + P delta] tau N`.
pub fn defector_mean_no_memory(p: &OracleParams) -> Result<f64, OracleError> {
    p.need_defectors()?;
    let delta = p.delta();
    Ok((p.payoffs.temptation() * (1.0 - delta) + p.payoffs.punishment() * delta) * p.tau * p.n as f64)
}

/// Finite-N version of [`defector_mean_no_memory`]:
/// `2 rounds [T |C| + P (|D| - 1)] / (N (N - 1))`.
pub fn defector_mean_no_memory_exact(p: &OracleParams) -> Result<f64, OracleError> {
    p.need_defectors()?;
    let n = p.n as f64;
    let c = p.cooperators() as f64;
    let d = p.defectors as f64;
    let per_defector = p.payoffs.temptation() * c + p.payoffs.punishment() * (d - 1.0);
    Ok(2.0 * p.rounds() as f64 * per_defector / (n * (n - 1.0)))
}

/// Mean defector payoff with full memory once every pair has met:
/// each defector exploits every cooperator and meets every other defector
/// exactly once, `T |C| + P (|D| - 1)`.
pub fn defector_mean_full_memory(p: &OracleParams) -> Result<f64, OracleError> {
    p.need_defectors()?;
    let (t, pp) = (p.payoffs.temptation(), p.payoffs.punishment());
    Ok((pp - t) * p.defectors as f64 + t * p.n as f64 - pp)
}

/// Exact expectations of the two population means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMeans {
    pub cooperator: Option<f64>,
    pub defector: Option<f64>,
}

/// Default leaf budget for [`enumerate_exact`].
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// Exact expectations of the mean payoffs, by walking every defector
/// placement, every pair sequence and every eviction branch with its
/// probability. The seed in `config` is ignored.
pub fn enumerate_exact(config: &SimConfig, budget: u128) -> Result<ExactMeans, OracleError> {
    config.validate()?;
    let n = config.n as usize;
    let rounds = config.rounds();
    let placements = binomial(config.n as u128, config.defectors as u128);
    let pairs = (n * (n - 1) / 2) as u128;
    let needed = u32::try_from(rounds)
        .ok()
        .and_then(|r| pairs.checked_pow(r))
        .and_then(|x| x.checked_mul(placements))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }

    let mut walker = Walker {
        config,
        majority: Majority::of(config.n, config.defectors),
        pairs: (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        leaves: 0,
        budget,
        totals: (0.0, 0.0),
    };
    let placement_weight = 1.0 / placements as f64;
    for defector_set in combinations(n, config.defectors as usize) {
        let mut personalities = vec![Personality::Cooperator; n];
        for d in defector_set {
            personalities[d] = Personality::Defector;
        }
        let state = Node {
            memories: vec![BTreeMap::new(); n],
            payoffs: vec![0.0; n],
        };
        walker.walk(&personalities, state, rounds, placement_weight)?;
    }

    let (c_total, d_total) = walker.totals;
    Ok(ExactMeans {
        cooperator: (config.defectors < config.n).then_some(c_total),
        defector: (config.defectors > 0).then_some(d_total),
    })
}

#[derive(Clone)]
struct Node {
    memories: Vec<BTreeMap<usize, Personality>>,
    payoffs: Vec<f64>,
}

struct Walker<'a> {
    config: &'a SimConfig,
    majority: Majority,
    pairs: Vec<(usize, usize)>,
    leaves: u128,
    budget: u128,
    totals: (f64, f64),
}

impl Walker<'_> {
    fn walk(&mut self, who: &[Personality], node: Node, left: u64, weight: f64) -> Result<(), OracleError> {
        if left == 0 {
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(OracleError::BudgetExceeded {
                    needed: self.leaves,
                    budget: self.budget,
                });
            }
            let mean_of = |kind: Personality| {
                let picked: Vec<f64> = (0..who.len()).filter(|&i| who[i] == kind).map(|i| node.payoffs[i]).collect();
                if picked.is_empty() {
                    0.0
                } else {
                    picked.iter().sum::<f64>() / picked.len() as f64
                }
            };
            self.totals.0 += weight * mean_of(Personality::Cooperator);
            self.totals.1 += weight * mean_of(Personality::Defector);
            return Ok(());
        }

        let pair_weight = weight / self.pairs.len() as f64;
        for k in 0..self.pairs.len() {
            let (i, j) = self.pairs[k];
            let refuse = node.memories[i].get(&j) == Some(&Personality::Defector)
                || node.memories[j].get(&i) == Some(&Personality::Defector);
            if refuse {
                self.walk(who, node.clone(), left - 1, pair_weight)?;
                continue;
            }
            let mut played = node.clone();
            played.payoffs[i] += self.config.payoffs.payoff(who[i], who[j]);
            played.payoffs[j] += self.config.payoffs.payoff(who[j], who[i]);
            for (after_i, wi) in self.remember(&played.memories[i], j, who[j]) {
                for (after_j, wj) in self.remember(&played.memories[j], i, who[i]) {
                    let mut next = played.clone();
                    next.memories[i] = after_i.clone();
                    next.memories[j] = after_j;
                    self.walk(who, next, left - 1, pair_weight * wi * wj)?;
                }
            }
        }
        Ok(())
    }

    /// Every possible memory after observing `opponent`, with probabilities.
    fn remember(
        &self,
        memory: &BTreeMap<usize, Personality>,
        opponent: usize,
        kind: Personality,
    ) -> Vec<(BTreeMap<usize, Personality>, f64)> {
        let capacity = self.config.memory as usize;
        if capacity == 0 || memory.contains_key(&opponent) {
            return vec![(memory.clone(), 1.0)];
        }
        if memory.len() < capacity {
            let mut m = memory.clone();
            m.insert(opponent, kind);
            return vec![(m, 1.0)];
        }
        let victims = eviction_weights(memory, self.config.strategy, self.majority);
        if victims.is_empty() {
            return vec![(memory.clone(), 1.0)];
        }
        victims
            .into_iter()
            .map(|(victim, w)| {
                let mut m = memory.clone();
                m.remove(&victim);
                m.insert(opponent, kind);
                (m, w)
            })
            .collect()
    }
}

/// Probability of each stored opponent being forgotten from a full memory.
/// Empty when the strategy forbids every entry.
fn eviction_weights(
    memory: &BTreeMap<usize, Personality>,
    strategy: Strategy,
    majority: Majority,
) -> Vec<(usize, f64)> {
    let of = |kind: Personality| -> Vec<usize> {
        memory.iter().filter(|(_, &k)| k == kind).map(|(&o, _)| o).collect()
    };
    let uniform = |ids: Vec<usize>, mass: f64| -> Vec<(usize, f64)> {
        let share = mass / ids.len() as f64;
        ids.into_iter().map(|o| (o, share)).collect()
    };
    let only = |kind: Personality| {
        let ids = of(kind);
        if ids.is_empty() {
            Vec::new()
        } else {
            uniform(ids, 1.0)
        }
    };
    match strategy {
        Strategy::Foc => only(Personality::Cooperator),
        Strategy::Fod => only(Personality::Defector),
        Strategy::Far => uniform(memory.keys().copied().collect(), 1.0),
        Strategy::Feq => {
            let (cs, ds) = (of(Personality::Cooperator), of(Personality::Defector));
            match (cs.is_empty(), ds.is_empty()) {
                (false, false) => {
                    let mut out = uniform(cs, 0.5);
                    out.extend(uniform(ds, 0.5));
                    out
                }
                (true, _) => uniform(ds, 1.0),
                (_, true) => uniform(cs, 1.0),
            }
        }
        Strategy::Fmj => match majority {
            Majority::Cooperators => only(Personality::Cooperator),
            Majority::Defectors => only(Personality::Defector),
            Majority::Tie => uniform(memory.keys().copied().collect(), 1.0),
        },
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
