//! Replicated parameter sweeps over the (attention capacity, defector count)
//! lattice.

use rayon::prelude::*;

use crate::error::ConfigError;
use crate::payoff::PayoffMatrix;
use crate::rng::mix_words;
use crate::strategy::Strategy;
use crate::world::{run_realization, RealizationResult, SimConfig};

/// Default number of independent realizations per cell.
pub const DEFAULT_REALIZATIONS: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: u32,
    pub taus: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub payoffs: PayoffMatrix,
    pub master_seed: u64,
    pub memory_grid: Vec<u32>,
    pub defector_grid: Vec<u32>,
    pub realizations: u32,
}

impl SweepConfig {
    /// Every strategy over the grid `0..=n` stepped by `step` on both axes.
    pub fn stepped(n: u32, tau: f64, step: u32, master_seed: u64) -> Self {
        SweepConfig {
            n,
            taus: vec![tau],
            strategies: Strategy::ALL.to_vec(),
            payoffs: PayoffMatrix::STANDARD,
            master_seed,
            memory_grid: stepped_grid(n, step),
            defector_grid: stepped_grid(n, step),
            realizations: DEFAULT_REALIZATIONS,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::PopulationTooSmall(self.n));
        }
        if self.realizations == 0 {
            return Err(ConfigError::NoRealizations);
        }
        if self.strategies.is_empty() {
            return Err(ConfigError::NoStrategies);
        }
        if self.taus.is_empty() {
            return Err(ConfigError::NoTau);
        }
        if let Some(&bad) = self.taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(ConfigError::InvalidTau(bad));
        }
        for (axis, grid) in [("memory", &self.memory_grid), ("defector", &self.defector_grid)] {
            if grid.is_empty() {
                return Err(ConfigError::EmptyGrid(axis));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ConfigError::UnsortedGrid(axis));
            }
            if let Some(&value) = grid.iter().find(|&&v| v > self.n) {
                return Err(ConfigError::GridOutOfRange { axis, value, n: self.n });
            }
        }
        Ok(())
    }
}

/// `0, step, 2 step, ...` up to and including `n` (always ends at `n`).
pub fn stepped_grid(n: u32, step: u32) -> Vec<u32> {
    let step = step.max(1);
    let mut grid: Vec<u32> = (0..=n).step_by(step as usize).collect();
    if grid.last() != Some(&n) {
        grid.push(n);
    }
    grid
}

/// Seed of realization `rep` in the cell `(memory, defectors)`.
///
/// SplitMix64 fold of `(master, memory, defectors, rep)`. The strategy and
/// tau are deliberately not mixed in: every strategy sees the same
/// placements and pair sequences, so strategy comparisons are paired.
pub fn derive_seed(master: u64, memory: u32, defectors: u32, rep: u32) -> u64 {
    mix_words(master, &[memory as u64, defectors as u64, rep as u64])
}

/// Mean and sample (n - 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// `None` for a single observation.
    pub std: Option<f64>,
    pub count: u32,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = (count > 1).then(|| {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (count - 1) as f64).sqrt()
        });
        Some(Summary {
            mean,
            std,
            count: count as u32,
        })
    }

    /// Standard error of the mean; zero when the spread is undefined.
    pub fn std_error(&self) -> f64 {
        self.std.unwrap_or(0.0) / (self.count as f64).sqrt()
    }
}

/// One lattice cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParams {
    pub n: u32,
    pub memory: u32,
    pub defectors: u32,
    pub tau: f64,
    pub strategy: Strategy,
    pub payoffs: PayoffMatrix,
}

impl CellParams {
    pub fn config(&self, seed: u64) -> SimConfig {
        SimConfig {
            n: self.n,
            defectors: self.defectors,
            memory: self.memory,
            tau: self.tau,
            strategy: self.strategy,
            payoffs: self.payoffs,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub strategy: Strategy,
    pub memory: u32,
    pub defectors: u32,
    pub tau: f64,
    pub reps: u32,
    /// Undefined when every player is a defector.
    pub cooperator: Option<Summary>,
    /// Undefined when every player is a cooperator.
    pub defector: Option<Summary>,
    /// Per-realization `P_C - P_D`; undefined when either side is.
    pub diff: Option<Summary>,
}

impl CellStats {
    pub fn from_results(params: &CellParams, results: &[RealizationResult]) -> Self {
        let collect = |f: fn(&RealizationResult) -> Option<f64>| -> Option<Summary> {
            let values: Option<Vec<f64>> = results.iter().map(f).collect();
            Summary::of(&values?)
        };
        CellStats {
            strategy: params.strategy,
            memory: params.memory,
            defectors: params.defectors,
            tau: params.tau,
            reps: results.len() as u32,
            cooperator: collect(|r| r.cooperator_mean),
            defector: collect(|r| r.defector_mean),
            diff: collect(|r| r.diff()),
        }
    }
}

/// Runs `realizations` independent realizations of a cell and aggregates them.
pub fn run_cell(params: &CellParams, master_seed: u64, realizations: u32) -> Result<CellStats, ConfigError> {
    let results = (0..realizations)
        .map(|rep| {
            let seed = derive_seed(master_seed, params.memory, params.defectors, rep);
            run_realization(&params.config(seed))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CellStats::from_results(params, &results))
}

/// Lattice of cell statistics for one (strategy, tau).
///
/// Cells are stored defector-major: index `d_idx * memory_grid.len() + m_idx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub strategy: Strategy,
    pub tau: f64,
    pub n: u32,
    pub memory_grid: Vec<u32>,
    pub defector_grid: Vec<u32>,
    pub cells: Vec<CellStats>,
}

impl Surface {
    pub fn cell(&self, d_idx: usize, m_idx: usize) -> &CellStats {
        &self.cells[d_idx * self.memory_grid.len() + m_idx]
    }

    pub fn mu(&self, m_idx: usize) -> f64 {
        self.memory_grid[m_idx] as f64 / self.n as f64
    }

    pub fn delta(&self, d_idx: usize) -> f64 {
        self.defector_grid[d_idx] as f64 / self.n as f64
    }

    pub fn mu_axis(&self) -> Vec<f64> {
        (0..self.memory_grid.len()).map(|i| self.mu(i)).collect()
    }

    /// Cells of one defector row, in ascending attention capacity.
    pub fn column(&self, d_idx: usize) -> &[CellStats] {
        let w = self.memory_grid.len();
        &self.cells[d_idx * w..(d_idx + 1) * w]
    }

    pub fn same_grid(&self, other: &Surface) -> bool {
        self.n == other.n
            && self.tau == other.tau
            && self.memory_grid == other.memory_grid
            && self.defector_grid == other.defector_grid
    }
}

/// Runs every cell of the sweep, in parallel on the current rayon pool.
///
/// Returns one surface per (strategy, tau), strategies outer. Results are
/// placed by lattice index, so the output does not depend on worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<Surface>, ConfigError> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &strategy in &config.strategies {
        for &tau in &config.taus {
            for &defectors in &config.defector_grid {
                for &memory in &config.memory_grid {
                    jobs.push(CellParams {
                        n: config.n,
                        memory,
                        defectors,
                        tau,
                        strategy,
                        payoffs: config.payoffs,
                    });
                }
            }
        }
    }
    let cells = jobs
        .par_iter()
        .map(|params| run_cell(params, config.master_seed, config.realizations))
        .collect::<Result<Vec<_>, _>>()?;

    let per_surface = config.memory_grid.len() * config.defector_grid.len();
    let mut chunks = cells.chunks(per_surface);
    let mut surfaces = Vec::new();
    for &strategy in &config.strategies {
        for &tau in &config.taus {
            surfaces.push(Surface {
                strategy,
                tau,
                n: config.n,
                memory_grid: config.memory_grid.clone(),
                defector_grid: config.defector_grid.clone(),
                cells: chunks.next().expect("one chunk per surface").to_vec(),
            });
        }
    }
    Ok(surfaces)
}
