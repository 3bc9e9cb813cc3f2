//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use scarcity_core::{
    DrawSource, Personality, RoundKind, SimConfig, Stream, Strategy, WorldState,
};

#[derive(Default)]
struct DrawTree {
    /// `(choice, bound)` for every draw of the current path.
    path: Vec<(u32, u32)>,
    pos: usize,
}

/// Draw source that replays the current path of a shared [`DrawTree`] and
/// extends it with zeros. Both engine streams share one tree, so draws are
/// recorded in the order the engine consumes them.
#[derive(Clone)]
struct Scripted(Rc<RefCell<DrawTree>>);

impl DrawSource for Scripted {
    fn below(&mut self, bound: u32) -> u32 {
        let mut tree = self.0.borrow_mut();
        let pos = tree.pos;
        tree.pos += 1;
        match tree.path.get(pos) {
            Some(&(choice, recorded)) => {
                assert_eq!(recorded, bound, "engine is not deterministic along a path");
                choice
            }
            None => {
                tree.path.push((0, bound));
                0
            }
        }
    }
}

/// Exact expectation of the simulator's mean payoffs, obtained by running
/// the real engine once along every path of its random draws and weighting
/// each run by the product of `1 / bound` over its draws.
pub fn engine_expectation(config: &SimConfig, max_paths: usize) -> (Option<f64>, Option<f64>) {
    let tree = Rc::new(RefCell::new(DrawTree::default()));
    let mut totals = (0.0, 0.0);
    let mut defined = (true, true);
    let mut paths = 0usize;
    loop {
        tree.borrow_mut().pos = 0;
        let result = scarcity_core::run_realization_with(
            config,
            Scripted(tree.clone()),
            Scripted(tree.clone()),
        )
        .expect("valid config");
        paths += 1;
        assert!(paths <= max_paths, "draw tree larger than {max_paths} paths");

        let mut t = tree.borrow_mut();
        assert_eq!(t.pos, t.path.len());
        let weight: f64 = t.path.iter().map(|&(_, b)| 1.0 / b as f64).product();
        match result.cooperator_mean {
            Some(v) => totals.0 += weight * v,
            None => defined.0 = false,
        }
        match result.defector_mean {
            Some(v) => totals.1 += weight * v,
            None => defined.1 = false,
        }

        // Advance the odometer.
        while let Some(&(choice, bound)) = t.path.last() {
            if choice + 1 < bound {
                break;
            }
            t.path.pop();
        }
        match t.path.last_mut() {
            Some(last) => last.0 += 1,
            None => break,
        }
    }
    (defined.0.then_some(totals.0), defined.1.then_some(totals.1))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300) || a == b
}

/// Plays a full realization, checking every per-round invariant. Returns
/// the number of rounds checked.
pub fn check_realization(config: &SimConfig) -> Result<u64, String> {
    let mut selection = Stream::selection(config.seed);
    let mut eviction = Stream::eviction(config.seed);
    let mut world = WorldState::new(config, &mut selection).map_err(|e| e.to_string())?;
    let n = config.n;
    let payoffs = config.payoffs;
    let full_memory = config.memory + 1 >= n;
    let mut yielded: HashMap<(u32, u32), u32> = HashMap::new();
    let mut delta_sum = 0.0;

    for round in 0..config.rounds() {
        let before = world.clone();
        let out = world.play_round(&mut selection, &mut eviction);
        let (i, j) = out.pair;
        let fail = |what: &str| Err(format!("{config:?} round {round}: {what}"));
        if i == j || i >= n || j >= n {
            return fail("invalid pair");
        }

        // Refusal soundness and the refusal rule itself.
        let knew = before.player(i).recall().get(j) == Some(Personality::Defector)
            || before.player(j).recall().get(i) == Some(Personality::Defector);
        match (knew, out.kind) {
            (true, RoundKind::Refused) | (false, RoundKind::PlayedCC | RoundKind::PlayedCD | RoundKind::PlayedDD) => {}
            _ => return fail("refusal rule violated"),
        }
        if out.kind == RoundKind::Refused {
            if out.deltas != (0.0, 0.0) {
                return fail("refused round paid out");
            }
            for k in 0..n {
                if world.player(k).recall() != before.player(k).recall() {
                    return fail("refused round changed a recall");
                }
            }
        }
        let sum = out.deltas.0 + out.deltas.1;
        let expected_sum = match out.kind {
            RoundKind::Refused => 0.0,
            RoundKind::PlayedCC => 2.0 * payoffs.reward(),
            RoundKind::PlayedCD => payoffs.temptation() + payoffs.sucker(),
            RoundKind::PlayedDD => 2.0 * payoffs.punishment(),
        };
        if sum != expected_sum {
            return fail("delta sum does not match kind");
        }
        delta_sum += sum;

        // Full-memory one-shot rule.
        if full_memory {
            let pair = (i.min(j), i.max(j));
            let both_coop = world.player(i).personality() == Personality::Cooperator
                && world.player(j).personality() == Personality::Cooperator;
            if both_coop {
                if out.kind != RoundKind::PlayedCC {
                    return fail("cooperator pair did not play under full memory");
                }
            } else if out.kind != RoundKind::Refused {
                let count = yielded.entry(pair).or_default();
                *count += 1;
                if *count > 1 {
                    return fail("defector pair paid twice under full memory");
                }
            }
        }

        let mut total = 0.0;
        for (p, old) in world.players().iter().zip(before.players()) {
            let recall = p.recall();
            if recall.len() > config.memory as usize {
                return fail("capacity exceeded");
            }
            let entries = recall.entries();
            if entries.windows(2).any(|w| w[0].0 == w[1].0) {
                return fail("duplicate recall entry");
            }
            for &(opponent, recorded) in &entries {
                if opponent == p.index() || world.player(opponent).personality() != recorded {
                    return fail("recall holds a wrong record");
                }
            }
            let counters = match p.personality() {
                Personality::Cooperator => {
                    payoffs.reward() * p.cooperator_games() as f64
                        + payoffs.sucker() * p.defector_games() as f64
                }
                Personality::Defector => {
                    payoffs.temptation() * p.cooperator_games() as f64
                        + payoffs.punishment() * p.defector_games() as f64
                }
            };
            if counters != p.payoff() {
                return fail("payoff disagrees with game counters");
            }
            match config.strategy {
                Strategy::Foc if recall.defector_count() < old.recall().defector_count() => {
                    return fail("FOC forgot a defector");
                }
                Strategy::Fod if recall.cooperator_count() < old.recall().cooperator_count() => {
                    return fail("FOD forgot a cooperator");
                }
                _ => {}
            }
            total += p.payoff();
        }
        if total != delta_sum || world.delta_total() != delta_sum {
            return fail("payoff not conserved");
        }
    }
    Ok(config.rounds())
}

/// Random small configurations for property sweeps.
pub fn random_config(rng: &mut Stream, max_n: u32) -> SimConfig {
    let n = 2 + rng.below(max_n - 1);
    let defectors = rng.below(n + 1);
    let memory = rng.below(n + 1);
    let tau = 0.5 + rng.below(6) as f64 * 0.5;
    let strategy = Strategy::ALL[rng.below(5) as usize];
    let seed = (rng.below(u32::MAX) as u64) << 32 | rng.below(u32::MAX) as u64;
    SimConfig::new(n, defectors, memory, tau, strategy, seed)
}
