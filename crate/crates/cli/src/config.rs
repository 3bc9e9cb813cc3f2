//! Flat `key = value` sweep configuration and the run manifest.
//!
//! A manifest is a config file with two extra informational keys
//! (`version`, `timestamp`), so feeding a manifest back to `sweep --config`
//! reproduces the run.

use std::fmt::Write as _;

use scarcity_core::experiment::{stepped_grid, DEFAULT_REALIZATIONS};
use scarcity_core::table::fmt_num;
use scarcity_core::{PayoffMatrix, Strategy, SweepConfig};

use crate::CliError;

pub const DEFAULT_N: u32 = 100;
pub const DEFAULT_TAUS: [f64; 2] = [2.0, 5.0];

/// Sweep settings as read from a file and flags; unset values fall back to
/// defaults in [`SweepSettings::resolve`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSettings {
    pub n: Option<u32>,
    pub taus: Option<Vec<f64>>,
    pub strategies: Option<Vec<Strategy>>,
    pub payoffs: Option<PayoffMatrix>,
    pub seed: Option<u64>,
    pub reps: Option<u32>,
    pub memory: Option<Vec<u32>>,
    pub defectors: Option<Vec<u32>>,
    /// Grid step used for axes without an explicit grid.
    pub step: Option<u32>,
}

impl SweepSettings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = SweepSettings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Validation(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => s.n = Some(parse_num(value).map_err(bad)?),
                "tau" | "taus" => s.taus = Some(parse_list(value).map_err(bad)?),
                "strategies" => s.strategies = Some(parse_strategies(value).map_err(bad)?),
                "payoffs" => s.payoffs = Some(parse_payoffs(value).map_err(bad)?),
                "seed" => s.seed = Some(parse_num(value).map_err(bad)?),
                "reps" => s.reps = Some(parse_num(value).map_err(bad)?),
                "memory" => s.memory = Some(parse_grid(value).map_err(bad)?),
                "defectors" => s.defectors = Some(parse_grid(value).map_err(bad)?),
                "step" => s.step = Some(parse_num(value).map_err(bad)?),
                "version" | "timestamp" => {}
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(s)
    }

    /// Values set in `other` replace ours.
    pub fn overlay(mut self, other: SweepSettings) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(n, taus, strategies, payoffs, seed, reps, memory, defectors, step);
        self
    }

    pub fn resolve(self) -> Result<SweepConfig, CliError> {
        let n = self.n.unwrap_or(DEFAULT_N);
        let step = self.step.unwrap_or(1);
        if step == 0 {
            return Err(CliError::Validation("grid step must be positive".into()));
        }
        let config = SweepConfig {
            n,
            taus: self.taus.unwrap_or_else(|| DEFAULT_TAUS.to_vec()),
            strategies: self.strategies.unwrap_or_else(|| Strategy::ALL.to_vec()),
            payoffs: self.payoffs.unwrap_or_default(),
            master_seed: self.seed.unwrap_or(0),
            memory_grid: self.memory.unwrap_or_else(|| stepped_grid(n, step)),
            defector_grid: self.defectors.unwrap_or_else(|| stepped_grid(n, step)),
            realizations: self.reps.unwrap_or(DEFAULT_REALIZATIONS),
        };
        config.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(config)
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

/// Fully resolved sweep plus provenance; written next to the outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub timestamp: u64,
    pub config: SweepConfig,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let c = &self.config;
        let p = c.payoffs;
        let mut out = String::from("# scarcity sweep manifest; pass to `scarcity sweep --config` to reproduce\n");
        let _ = writeln!(out, "version = {}", self.version);
        let _ = writeln!(out, "timestamp = {}", self.timestamp);
        let _ = writeln!(out, "n = {}", c.n);
        let _ = writeln!(out, "taus = {}", join(&c.taus, |t| fmt_num(*t)));
        let _ = writeln!(out, "strategies = {}", join(&c.strategies, |s| s.to_string()));
        let _ = writeln!(
            out,
            "payoffs = {},{},{},{}",
            fmt_num(p.temptation()),
            fmt_num(p.reward()),
            fmt_num(p.punishment()),
            fmt_num(p.sucker())
        );
        let _ = writeln!(out, "seed = {}", c.master_seed);
        let _ = writeln!(out, "reps = {}", c.realizations);
        let _ = writeln!(out, "memory = {}", join(&c.memory_grid, |m| m.to_string()));
        let _ = writeln!(out, "defectors = {}", join(&c.defector_grid, |d| d.to_string()));
        out
    }
}

pub fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("invalid number {s:?}"))
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(parse_num).collect()
}

pub fn parse_strategies(s: &str) -> Result<Vec<Strategy>, String> {
    s.split(',')
        .map(|x| x.parse::<Strategy>().map_err(|e| e.to_string()))
        .collect()
}

/// `T,R,P,S`.
pub fn parse_payoffs(s: &str) -> Result<PayoffMatrix, String> {
    let v: Vec<f64> = parse_list(s)?;
    let [t, r, p, s] = v[..] else {
        return Err(format!("payoffs need four values T,R,P,S, got {}", v.len()));
    };
    PayoffMatrix::new(t, r, p, s).map_err(|e| e.to_string())
}

/// Either a comma list (`0,5,10`) or an inclusive range `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<u32>, String> {
    if !s.contains(':') {
        return parse_list(s);
    }
    let parts: Vec<u32> = s.split(':').map(parse_num).collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("grid range must be start:stop:step, got {s:?}"));
    };
    if step == 0 || start > stop {
        return Err(format!("empty grid range {s:?}"));
    }
    Ok((start..=stop).step_by(step as usize).collect())
}
