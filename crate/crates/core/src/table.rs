//! CSV interchange files: surfaces, boundary curves, areas and the heatmap
//! matrix.
//!
//! Numbers use Rust's shortest round-trip decimal form, so reading a file back
//! yields bit-identical values. Undefined quantities are written as empty
//! fields.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use crate::analysis::{AreaEntry, BoundaryCurve};
use crate::error::TableError;
use crate::experiment::{CellStats, Summary, Surface};
use crate::strategy::Strategy;

pub const SURFACE_HEADER: &str =
    "strategy,tau,m,mu,d,delta,pc_mean,pc_std,pd_mean,pd_std,diff_mean,diff_std,reps";
pub const BOUNDARY_HEADER: &str = "strategy,tau,delta,mu_star";
pub const AREA_HEADER: &str = "strategy,tau,area";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Writes surfaces in order, each in lattice order (defectors outer, attention
/// capacity inner). The header is written once.
pub fn write_surfaces<W: Write>(mut out: W, surfaces: &[Surface]) -> std::io::Result<()> {
    writeln!(out, "{SURFACE_HEADER}")?;
    for surface in surfaces {
        for d_idx in 0..surface.defector_grid.len() {
            for (m_idx, cell) in surface.column(d_idx).iter().enumerate() {
                let mean = |s: Option<Summary>| fmt_opt(s.map(|s| s.mean));
                let std = |s: Option<Summary>| fmt_opt(s.and_then(|s| s.std));
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    surface.strategy,
                    fmt_num(surface.tau),
                    cell.memory,
                    fmt_num(surface.mu(m_idx)),
                    cell.defectors,
                    fmt_num(surface.delta(d_idx)),
                    mean(cell.cooperator),
                    std(cell.cooperator),
                    mean(cell.defector),
                    std(cell.defector),
                    mean(cell.diff),
                    std(cell.diff),
                    cell.reps,
                )?;
            }
        }
    }
    Ok(())
}

struct Row {
    line: u64,
    strategy: Strategy,
    tau: f64,
    m: u32,
    mu: f64,
    d: u32,
    delta: f64,
    cell: CellStats,
}

fn malformed(line: u64, message: impl Into<String>) -> TableError {
    TableError::Malformed {
        row: line,
        message: message.into(),
    }
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<Row, TableError> {
    if record.len() != 13 {
        return Err(malformed(line, format!("expected 13 fields, found {}", record.len())));
    }
    let field = |i: usize| record.get(i).unwrap_or("");
    fn num<T: std::str::FromStr>(s: &str, name: &str, line: u64) -> Result<T, TableError> {
        s.parse().map_err(|_| malformed(line, format!("invalid {name}: {s:?}")))
    }
    let opt = |i: usize, name: &str| -> Result<Option<f64>, TableError> {
        let s = field(i);
        if s.is_empty() {
            Ok(None)
        } else {
            num(s, name, line).map(Some)
        }
    };
    let strategy: Strategy = field(0)
        .parse()
        .map_err(|e: crate::strategy::UnknownStrategy| malformed(line, e.to_string()))?;
    let reps: u32 = num(field(12), "reps", line)?;
    let summary = |mean_i: usize, std_i: usize, name: &str| -> Result<Option<Summary>, TableError> {
        match (opt(mean_i, name)?, opt(std_i, name)?) {
            (Some(mean), std) => Ok(Some(Summary { mean, std, count: reps })),
            (None, None) => Ok(None),
            (None, Some(_)) => Err(malformed(line, format!("{name} spread without mean"))),
        }
    };
    let tau: f64 = num(field(1), "tau", line)?;
    let m: u32 = num(field(2), "m", line)?;
    let d: u32 = num(field(4), "d", line)?;
    Ok(Row {
        line,
        strategy,
        tau,
        m,
        mu: num(field(3), "mu", line)?,
        d,
        delta: num(field(5), "delta", line)?,
        cell: CellStats {
            strategy,
            memory: m,
            defectors: d,
            tau,
            reps,
            cooperator: summary(6, 7, "pc")?,
            defector: summary(8, 9, "pd")?,
            diff: summary(10, 11, "diff")?,
        },
    })
}

/// Reads surfaces written by [`write_surfaces`] (possibly several files
/// concatenated after their headers). Rows are grouped by (strategy, tau) in
/// order of first appearance; each group must form a complete lattice.
pub fn read_surfaces<R: Read>(input: R) -> Result<Vec<Surface>, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != SURFACE_HEADER {
        return Err(TableError::Header(header));
    }

    let mut groups: Vec<(Strategy, f64, Vec<Row>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        // Tolerate repeated headers from concatenated files.
        if record.iter().collect::<Vec<_>>().join(",") == SURFACE_HEADER {
            continue;
        }
        let row = parse_row(&record, line)?;
        match groups
            .iter_mut()
            .find(|(s, t, _)| *s == row.strategy && *t == row.tau)
        {
            Some((_, _, rows)) => rows.push(row),
            None => groups.push((row.strategy, row.tau, vec![row])),
        }
    }
    groups
        .into_iter()
        .map(|(strategy, tau, rows)| assemble(strategy, tau, rows))
        .collect()
}

fn assemble(strategy: Strategy, tau: f64, rows: Vec<Row>) -> Result<Surface, TableError> {
    let last_line = rows.last().map(|r| r.line).unwrap_or(0);
    let memory_grid: Vec<u32> = rows.iter().map(|r| r.m).collect::<BTreeSet<_>>().into_iter().collect();
    let defector_grid: Vec<u32> = rows.iter().map(|r| r.d).collect::<BTreeSet<_>>().into_iter().collect();
    let n = rows
        .iter()
        .find_map(|r| {
            if r.m > 0 && r.mu > 0.0 {
                Some((r.m as f64 / r.mu).round() as u32)
            } else if r.d > 0 && r.delta > 0.0 {
                Some((r.d as f64 / r.delta).round() as u32)
            } else {
                None
            }
        })
        .ok_or_else(|| malformed(last_line, format!("cannot infer population size for {strategy} tau={tau}")))?;

    let width = memory_grid.len();
    let mut slots: Vec<Option<CellStats>> = vec![None; width * defector_grid.len()];
    for row in rows {
        let m_idx = memory_grid.binary_search(&row.m).expect("grid built from rows");
        let d_idx = defector_grid.binary_search(&row.d).expect("grid built from rows");
        if row.mu != row.m as f64 / n as f64 || row.delta != row.d as f64 / n as f64 {
            return Err(malformed(row.line, format!("ratios inconsistent with population size {n}")));
        }
        let slot = &mut slots[d_idx * width + m_idx];
        if slot.is_some() {
            return Err(malformed(row.line, format!("duplicate cell m={} d={}", row.m, row.d)));
        }
        *slot = Some(row.cell);
    }
    let cells = slots
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| malformed(last_line, format!("incomplete lattice for {strategy} tau={tau}")))?;
    Ok(Surface {
        strategy,
        tau,
        n,
        memory_grid,
        defector_grid,
        cells,
    })
}

pub fn write_boundaries<W: Write>(mut out: W, curves: &[BoundaryCurve]) -> std::io::Result<()> {
    writeln!(out, "{BOUNDARY_HEADER}")?;
    for curve in curves {
        for p in &curve.points {
            writeln!(
                out,
                "{},{},{},{}",
                curve.strategy,
                fmt_num(curve.tau),
                fmt_num(p.delta),
                fmt_num(p.mu_star)
            )?;
        }
    }
    Ok(())
}

pub fn write_areas<W: Write>(mut out: W, areas: &[AreaEntry]) -> std::io::Result<()> {
    writeln!(out, "{AREA_HEADER}")?;
    for a in areas {
        writeln!(out, "{},{},{}", a.strategy, fmt_num(a.tau), fmt_num(a.area))?;
    }
    Ok(())
}

/// Gnuplot ASCII `matrix nonuniform` layout of the mean difference: the first
/// line is the column count followed by the mu axis, every following line is
/// a delta value followed by its row. Undefined cells are `NaN`.
pub fn write_diff_matrix<W: Write>(mut out: W, surface: &Surface) -> std::io::Result<()> {
    let mut line = vec![surface.memory_grid.len().to_string()];
    line.extend(surface.mu_axis().into_iter().map(fmt_num));
    writeln!(out, "{}", line.join(" "))?;
    for d_idx in 0..surface.defector_grid.len() {
        let mut line = vec![fmt_num(surface.delta(d_idx))];
        line.extend(
            surface
                .column(d_idx)
                .iter()
                .map(|c| c.diff.map(|s| fmt_num(s.mean)).unwrap_or_else(|| "NaN".into())),
        );
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
