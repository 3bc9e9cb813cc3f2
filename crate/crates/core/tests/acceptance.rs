//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! Runs the full-scale sweeps (N = 100, grid step 5, 20 realizations, tau 2
//! and 5), so expect it to take about a minute on one core.

mod common;

use std::time::{Duration, Instant};

use scarcity_core::analysis::{compare_strategies, cooperation_area, StrategyReport};
use scarcity_core::experiment::{run_cell, run_sweep, CellParams, SweepConfig};
use scarcity_core::oracles::{
    cooperator_mean_asymptotic, cooperator_mean_exact, defector_mean_full_memory,
    defector_mean_no_memory, enumerate_exact, OracleParams, DEFAULT_BUDGET,
};
use scarcity_core::table::write_surfaces;
use scarcity_core::{run_realization, PayoffMatrix, SimConfig, Stream, Strategy, Surface};

use common::{check_realization, engine_expectation, random_config, rel_close};

const MASTER_SEED: u64 = 2024;
const N: u32 = 100;
const REPS: u32 = 20;

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    elapsed: Duration,
}

struct Ctx {
    outcomes: Vec<Outcome>,
}

impl Ctx {
    fn run(&mut self, id: u32, title: &'static str, body: impl FnOnce(&mut Vec<String>)) {
        let start = Instant::now();
        let mut failures = Vec::new();
        body(&mut failures);
        let outcome = Outcome {
            id,
            title,
            failures,
            elapsed: start.elapsed(),
        };
        let verdict = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{verdict}] {} ({:.1?})",
            outcome.id, outcome.title, outcome.elapsed
        );
        for f in &outcome.failures {
            println!("      - {f}");
        }
        self.outcomes.push(outcome);
    }
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn cell(memory: u32, defectors: u32, tau: f64, strategy: Strategy) -> CellParams {
    CellParams {
        n: N,
        memory,
        defectors,
        tau,
        strategy,
        payoffs: PayoffMatrix::STANDARD,
    }
}

fn detail(line: String) {
    println!("        {line}");
}

fn main() {
    let mut ctx = Ctx { outcomes: Vec::new() };
    let nine_deltas: Vec<u32> = (1..=9).map(|k| k * 10).collect();

    ctx.run(1, "cooperator mean matches R(1-delta)tauN and the finite-N oracle", |f| {
        let start = Instant::now();
        for &d in &nine_deltas {
            let stats = run_cell(&cell(N / 2, d, 2.0, Strategy::Far), MASTER_SEED, REPS).unwrap();
            let pc = stats.cooperator.unwrap();
            let p = OracleParams::new(N, d, 2.0);
            let asym = cooperator_mean_asymptotic(&p).unwrap();
            let exact = cooperator_mean_exact(&p).unwrap();
            let rel = (pc.mean - asym).abs() / asym;
            let z = (pc.mean - exact).abs() / pc.std_error();
            detail(format!(
                "delta={:.1} mean={:.3} asymptotic={asym:.3} (rel {:.2}%) exact={exact:.3} ({z:.2} se)",
                d as f64 / N as f64,
                pc.mean,
                rel * 100.0
            ));
            check(f, rel <= 0.05, || format!("delta={}: {:.2}% from asymptotic form", d as f64 / 100.0, rel * 100.0));
            check(f, z <= 5.0, || format!("delta={}: {z:.2} se from exact oracle", d as f64 / 100.0));
        }
        let elapsed = start.elapsed();
        check(f, elapsed < Duration::from_secs(10), || format!("runtime {elapsed:?} >= 10s"));
    });

    ctx.run(2, "no-memory defectors match (5-4delta)tauN and always beat cooperators", |f| {
        for &d in &nine_deltas {
            let stats = run_cell(&cell(0, d, 2.0, Strategy::Far), MASTER_SEED, REPS).unwrap();
            let pd = stats.defector.unwrap().mean;
            let expected = defector_mean_no_memory(&OracleParams::new(N, d, 2.0)).unwrap();
            let rel = (pd - expected).abs() / expected;
            detail(format!("delta={:.1} pd={pd:.3} closed form={expected:.3} (rel {:.2}%)", d as f64 / 100.0, rel * 100.0));
            check(f, rel <= 0.05, || format!("delta={}: {:.2}% off", d as f64 / 100.0, rel * 100.0));
        }
        let mut worst = f64::NEG_INFINITY;
        for d in 1..N {
            let stats = run_cell(&cell(0, d, 2.0, Strategy::Far), MASTER_SEED, REPS).unwrap();
            let diff = stats.diff.unwrap().mean;
            worst = worst.max(diff);
            check(f, diff < 0.0, || format!("D={d}: diff {diff} not negative"));
        }
        detail(format!("largest diff over D=1..99: {worst:.3}"));
    });

    ctx.run(3, "full-memory defectors match (P-T)|D|+TN-P", |f| {
        for d in [20, 50, 80] {
            let stats = run_cell(&cell(N, d, 5.0, Strategy::Far), MASTER_SEED, REPS).unwrap();
            let pd = stats.defector.unwrap().mean;
            let expected = defector_mean_full_memory(&OracleParams::new(N, d, 5.0)).unwrap();
            let rel = (pd - expected).abs() / expected;
            let diff = stats.diff.unwrap().mean;
            detail(format!("delta={:.1} pd={pd:.3} closed form={expected} (rel {:.2}%) diff={diff:.3}", d as f64 / 100.0, rel * 100.0));
            check(f, rel <= 0.10, || format!("D={d}: {:.2}% off", rel * 100.0));
            if d == 50 {
                check(f, expected == 299.0, || format!("closed form at delta=0.5 is {expected}, not 299"));
                check(f, diff > 0.0, || format!("diff at delta=0.5 is {diff}"));
            }
        }
    });

    ctx.run(4, "exact cases and micro-instances agree with enumeration", |f| {
        for tau in [2.0, 5.0] {
            let s = run_cell(&cell(37, 0, tau, Strategy::Feq), MASTER_SEED, REPS).unwrap();
            let pc = s.cooperator.unwrap();
            check(f, pc.mean == 3.0 * tau * N as f64 && pc.std == Some(0.0), || {
                format!("delta=0 tau={tau}: {pc:?}")
            });
            let s = run_cell(&cell(0, N, tau, Strategy::Fod), MASTER_SEED, REPS).unwrap();
            let pd = s.defector.unwrap();
            check(f, pd.mean == tau * N as f64 && pd.std == Some(0.0), || {
                format!("delta=1 M=0 tau={tau}: {pd:?}")
            });
        }

        // N = 2: the single pair's trajectory is deterministic per seed.
        for seed in 0..2_000u64 {
            for strategy in Strategy::ALL {
                let with = run_realization(&SimConfig::new(2, 1, 1, 1.0, strategy, seed)).unwrap();
                let without = run_realization(&SimConfig::new(2, 1, 0, 1.0, strategy, seed)).unwrap();
                let ok = (with.cooperator_mean, with.defector_mean) == (Some(0.0), Some(5.0))
                    && (without.cooperator_mean, without.defector_mean) == (Some(0.0), Some(10.0));
                if !ok {
                    f.push(format!("N=2 seed {seed} {strategy}: {with:?} / {without:?}"));
                    return;
                }
            }
        }

        // Exact expectation of the engine (walking every draw path) against
        // the independent enumerator, at 1e-9 relative.
        let mut compared = 0;
        for n in 2..=3u32 {
            for d in 0..=n {
                for m in 0..=n {
                    for rounds in 1..=3u64 {
                        for strategy in Strategy::ALL {
                            let tau = 2.0 * rounds as f64 / (n * n) as f64;
                            let config = SimConfig::new(n, d, m, tau, strategy, 0);
                            let exact = enumerate_exact(&config, DEFAULT_BUDGET).unwrap();
                            let (pc, pd) = engine_expectation(&config, 1_000_000);
                            for (a, b) in [(pc, exact.cooperator), (pd, exact.defector)] {
                                match (a, b) {
                                    (Some(a), Some(b)) if rel_close(a, b, 1e-9) => {}
                                    (None, None) => {}
                                    _ => f.push(format!("{config:?}: engine {a:?} vs enumeration {b:?}")),
                                }
                            }
                            compared += 1;
                        }
                    }
                }
            }
        }
        detail(format!("{compared} micro-instances matched at 1e-9 relative"));

        // Seed averages over 1e5 realizations against the enumeration.
        let samples = 100_000u64;
        for (n, d, m, rounds, strategy) in [(3, 1, 0, 1, Strategy::Far), (3, 1, 1, 3, Strategy::Feq), (3, 2, 1, 3, Strategy::Foc)] {
            let tau = 2.0 * rounds as f64 / (n * n) as f64;
            let config = SimConfig::new(n, d, m, tau, strategy, 0);
            let exact = enumerate_exact(&config, DEFAULT_BUDGET).unwrap();
            let (mut sum, mut sq) = (0.0, 0.0);
            for seed in 0..samples {
                let r = run_realization(&SimConfig { seed, ..config.clone() }).unwrap();
                let v = r.defector_mean.unwrap();
                sum += v;
                sq += v * v;
            }
            let mean = sum / samples as f64;
            let se = ((sq / samples as f64 - mean * mean) / (samples - 1) as f64).sqrt();
            let target = exact.defector.unwrap();
            let z = (mean - target).abs() / se;
            detail(format!(
                "N={n} D={d} M={m} rounds={rounds} {strategy}: seed mean pd={mean:.5} exact={target:.5} ({z:.2} se)"
            ));
            check(f, z <= 5.0, || format!("N={n} D={d} M={m}: seed average {z:.2} se from exact"));
        }
    });

    // Full-scale sweeps shared by criteria 5 to 8 and 10.
    let start = Instant::now();
    let mut config = SweepConfig::stepped(N, 5.0, 5, MASTER_SEED);
    config.taus = vec![2.0, 5.0];
    let surfaces = run_sweep(&config).unwrap();
    let sweep_time = start.elapsed();
    println!("        full sweep (5 strategies x tau {{2, 5}} x 21 x 21 cells x {REPS} reps): {sweep_time:.1?}");
    let at_tau = |tau: f64| -> Vec<Surface> { surfaces.iter().filter(|s| s.tau == tau).cloned().collect() };
    let (tau2, tau5) = (at_tau(2.0), at_tau(5.0));
    let report5 = compare_strategies(&tau5).unwrap();
    let report2 = compare_strategies(&tau2).unwrap();

    ctx.run(5, "FOC has the largest cooperation area, FOD the smallest", |f| {
        print_ranking(&report5);
        let area = |s| report5.area(s).unwrap();
        let (foc, fod) = (area(Strategy::Foc), area(Strategy::Fod));
        for s in [Strategy::Far, Strategy::Feq, Strategy::Fmj] {
            check(f, foc > area(s) && area(s) > fod, || {
                format!("{s} area {} not strictly between FOD {fod} and FOC {foc}", area(s))
            });
        }
        check(f, sweep_time < Duration::from_secs(600), || format!("sweep took {sweep_time:?}"));
    });

    ctx.run(6, "FEQ beats FAR above delta=0.5 and loses below", |f| {
        for (label, report) in [("tau=5", &report5), ("tau=2", &report2)] {
            let split = report.feq_vs_far.unwrap();
            detail(format!(
                "{label} FEQ-FAR diff: delta<0.5 {:.3} (se {:.3}, areas {:.3}/{:.3}); delta>0.5 {:.3} (se {:.3}, areas {:.3}/{:.3})",
                split.below.mean_delta, split.below.std_error, split.below.area_a, split.below.area_b,
                split.above.mean_delta, split.above.std_error, split.above.area_a, split.above.area_b,
            ));
        }
        let split = report5.feq_vs_far.unwrap();
        check(f, split.above.mean_delta > 0.0, || format!("delta>0.5: FEQ-FAR = {}", split.above.mean_delta));
        check(f, split.below.mean_delta < 0.0, || format!("delta<0.5: FEQ-FAR = {}", split.below.mean_delta));
    });

    ctx.run(7, "FMJ matches FOC below delta=0.5 and FOD above", |f| {
        let below = report5.fmj_vs_foc_below.unwrap();
        let above = report5.fmj_vs_fod_above.unwrap();
        detail(format!("FMJ vs FOC (delta<0.5): {} cells, max {:.3} se", below.cells, below.max_z));
        detail(format!("FMJ vs FOD (delta>0.5): {} cells, max {:.3} se", above.cells, above.max_z));
        check(f, below.max_z <= 3.0, || format!("FMJ vs FOC max {} se", below.max_z));
        check(f, above.max_z <= 3.0, || format!("FMJ vs FOD max {} se", above.max_z));
    });

    ctx.run(8, "longer shadow of the future enlarges the cooperation area", |f| {
        for (s2, s5) in tau2.iter().zip(&tau5) {
            let (a2, a5) = (cooperation_area(s2), cooperation_area(s5));
            detail(format!("{}: area tau=2 {a2:.4}, tau=5 {a5:.4}", s2.strategy));
            check(f, a5 > a2, || format!("{}: tau=5 area {a5} <= tau=2 area {a2}", s2.strategy));
        }
    });

    ctx.run(9, "per-round invariants over randomized small configurations", |f| {
        let mut rng = Stream::new(MASTER_SEED, 99);
        let mut rounds = 0;
        let realizations = 1_200;
        for _ in 0..realizations {
            let config = random_config(&mut rng, 30);
            match check_realization(&config) {
                Ok(r) => rounds += r,
                Err(e) => {
                    f.push(e);
                    return;
                }
            }
        }
        // Make sure the full-memory rule gets exercised with defectors present.
        for seed in 0..100 {
            let config = SimConfig::new(12, 5, 11 + (seed % 2) as u32, 3.0, Strategy::ALL[seed as usize % 5], seed);
            if let Err(e) = check_realization(&config) {
                f.push(e);
                return;
            }
        }
        detail(format!("{} realizations, {rounds} rounds checked", realizations + 100));
    });

    ctx.run(10, "sweeps are byte-identical across runs and worker counts", |f| {
        let mut small = SweepConfig::stepped(30, 2.0, 3, MASTER_SEED);
        small.realizations = 4;
        let csv = |workers: usize| -> Vec<u8> {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
            let surfaces = pool.install(|| run_sweep(&small)).unwrap();
            let mut buf = Vec::new();
            write_surfaces(&mut buf, &surfaces).unwrap();
            buf
        };
        let reference = csv(1);
        check(f, csv(1) == reference, || "rerun with one worker differs".into());
        check(f, csv(4) == reference, || "four workers differ from one".into());
        check(f, csv(7) == reference, || "seven workers differ from one".into());

        for group in [&tau2, &tau5] {
            for s in group.iter().skip(1) {
                let same = s.cells.iter().zip(&group[0].cells).all(|(a, b)| a.cooperator == b.cooperator);
                check(f, same, || format!("{} tau={} cooperator lattice differs from {}", s.strategy, s.tau, group[0].strategy));
            }
        }
        detail(format!("{} bytes of CSV compared", reference.len()));
    });

    let failed: Vec<u32> = ctx.outcomes.iter().filter(|o| !o.failures.is_empty()).map(|o| o.id).collect();
    println!(
        "acceptance: {} of {} criteria passed",
        ctx.outcomes.len() - failed.len(),
        ctx.outcomes.len()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn print_ranking(report: &StrategyReport) {
    let line: Vec<String> = report
        .ranking
        .iter()
        .map(|(s, a)| format!("{s}={a:.4}"))
        .collect();
    detail(format!("tau={} cooperation areas: {}", report.tau, line.join(" > ")));
}
