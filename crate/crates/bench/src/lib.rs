//! Shared fixtures for the criterion benches.

use scarcity_core::{SimConfig, Strategy};

/// Full-size population at the given capacity and defector counts.
pub fn paper_scale(memory: u32, defectors: u32, tau: f64, strategy: Strategy) -> SimConfig {
    SimConfig::new(100, defectors, memory, tau, strategy, 0x5eed)
}
