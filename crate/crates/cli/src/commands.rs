use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use scarcity_core::analysis::{area_report, extract_boundary};
use scarcity_core::oracles::{
    cooperator_mean_asymptotic, cooperator_mean_exact, defector_mean_full_memory,
    defector_mean_no_memory, defector_mean_no_memory_exact, OracleParams,
};
use scarcity_core::table::{fmt_num, read_surfaces, write_areas, write_boundaries, write_diff_matrix, write_surfaces};
use scarcity_core::{run_realization, run_sweep, SimConfig, Strategy, Surface, TableError};

use crate::config::{parse_grid, parse_list, parse_payoffs, parse_strategies, RunManifest, SweepSettings};
use crate::{BoundaryArgs, CliError, OracleArgs, RunArgs, SweepArgs};

/// Worker count override for sweeps.
pub const WORKERS_ENV: &str = "SCARCITY_WORKERS";

pub const RUN_HEADER: &str = "n,defectors,memory,tau,strategy,seed,pc,pd,diff";

fn invalid(e: impl ToString) -> CliError {
    CliError::Validation(e.to_string())
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(io_err(format!("cannot create {}", path.display())))
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn run(args: RunArgs) -> Result<(), CliError> {
    let strategy: Strategy = args.strategy.parse().map_err(invalid)?;
    let config = SimConfig {
        n: args.n,
        defectors: args.defectors,
        memory: args.memory,
        tau: args.tau,
        strategy,
        payoffs: parse_payoffs(&args.payoffs).map_err(invalid)?,
        seed: args.seed,
    };
    let result = run_realization(&config).map_err(invalid)?;
    let mut out = io::stdout().lock();
    if args.header {
        writeln!(out, "{RUN_HEADER}").map_err(io_err("stdout"))?;
    }
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        config.n,
        config.defectors,
        config.memory,
        fmt_num(config.tau),
        strategy,
        config.seed,
        opt(result.cooperator_mean),
        opt(result.defector_mean),
        opt(result.diff()),
    )
    .map_err(io_err("stdout"))
}

fn surface_stem(prefix: &str, surface: &Surface) -> String {
    format!("{prefix}_{}_tau{}", surface.strategy, fmt_num(surface.tau))
}

fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        let workers: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&w| w > 0)
            .ok_or_else(|| invalid(format!("{WORKERS_ENV} must be a positive integer, got {value:?}")))?;
        builder = builder.num_threads(workers);
    }
    builder.build().map_err(invalid)
}

fn timestamp() -> u64 {
    // SOURCE_DATE_EPOCH pins the manifest for reproducible builds and tests.
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(format!("cannot read {}", path.display())))?;
            SweepSettings::parse(&text)?
        }
        None => SweepSettings::default(),
    };
    let flags = SweepSettings {
        n: args.n,
        taus: args.tau.as_deref().map(parse_list).transpose().map_err(invalid)?,
        strategies: args.strategies.as_deref().map(parse_strategies).transpose().map_err(invalid)?,
        payoffs: args.payoffs.as_deref().map(parse_payoffs).transpose().map_err(invalid)?,
        seed: args.seed,
        reps: args.reps,
        memory: args.memory_grid.as_deref().map(parse_grid).transpose().map_err(invalid)?,
        defectors: args.defector_grid.as_deref().map(parse_grid).transpose().map_err(invalid)?,
        step: args.step,
    };
    let config = file.overlay(flags).resolve()?;

    fs::create_dir_all(&args.out).map_err(io_err(format!("cannot create {}", args.out.display())))?;
    let surfaces = worker_pool()?.install(|| run_sweep(&config)).map_err(invalid)?;

    for surface in &surfaces {
        let path = args.out.join(format!("{}.csv", surface_stem("surface", surface)));
        let mut out = create(&path)?;
        write_surfaces(&mut out, std::slice::from_ref(surface))
            .and_then(|_| out.flush())
            .map_err(io_err(format!("cannot write {}", path.display())))?;
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp(),
        config,
    };
    let path = args.out.join("manifest.txt");
    fs::write(&path, manifest.render()).map_err(io_err(format!("cannot write {}", path.display())))?;
    eprintln!("wrote {} surfaces to {}", surfaces.len(), args.out.display());
    Ok(())
}

pub fn boundary(args: BoundaryArgs) -> Result<(), CliError> {
    let mut surfaces = Vec::new();
    for path in &args.inputs {
        let file = File::open(path).map_err(io_err(format!("cannot read {}", path.display())))?;
        match read_surfaces(io::BufReader::new(file)) {
            Ok(s) => surfaces.extend(s),
            Err(TableError::Io(source)) => return Err(io_err(path.display().to_string())(source)),
            Err(e) => return Err(invalid(format!("{}: {e}", path.display()))),
        }
    }
    fs::create_dir_all(&args.out).map_err(io_err(format!("cannot create {}", args.out.display())))?;

    let curves: Vec<_> = surfaces.iter().map(|s| extract_boundary(s, args.persistence)).collect();
    let write = |name: PathBuf, f: &dyn Fn(&mut BufWriter<File>) -> io::Result<()>| -> Result<(), CliError> {
        let mut out = create(&name)?;
        f(&mut out)
            .and_then(|_| out.flush())
            .map_err(io_err(format!("cannot write {}", name.display())))
    };
    write(args.out.join("boundary.csv"), &|out| write_boundaries(out, &curves))?;
    write(args.out.join("area.csv"), &|out| write_areas(out, &area_report(&surfaces)))?;
    for surface in &surfaces {
        let name = args.out.join(format!("{}.matrix", surface_stem("diff", surface)));
        write(name, &|out| write_diff_matrix(out, surface))?;
    }
    Ok(())
}

pub fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let payoffs = parse_payoffs(&args.payoffs).map_err(invalid)?;
    let mut params = match (args.tau, args.rounds) {
        (_, Some(rounds)) => OracleParams::with_rounds(args.n, args.defectors, rounds),
        (Some(tau), None) => OracleParams::new(args.n, args.defectors, tau),
        (None, None) => return Err(invalid("one of --tau or --rounds is required")),
    };
    params.payoffs = payoffs;
    params.validate().map_err(invalid)?;

    let rows: [(&str, Option<f64>); 5] = [
        ("pc_asymptotic", cooperator_mean_asymptotic(&params).ok()),
        ("pc_exact", cooperator_mean_exact(&params).ok()),
        ("pd_no_memory_asymptotic", defector_mean_no_memory(&params).ok()),
        ("pd_no_memory_exact", defector_mean_no_memory_exact(&params).ok()),
        ("pd_full_memory", defector_mean_full_memory(&params).ok()),
    ];
    let mut out = io::stdout().lock();
    let mut emit = || -> io::Result<()> {
        writeln!(out, "quantity,value")?;
        writeln!(out, "rounds,{}", params.rounds())?;
        for (name, value) in rows {
            writeln!(out, "{name},{}", opt(value))?;
        }
        Ok(())
    };
    emit().map_err(io_err("stdout"))
}
