//! Attention boundaries, cooperation areas and strategy comparisons computed
//! from sweep surfaces.

use crate::error::AnalysisError;
use crate::experiment::{CellStats, Summary, Surface};
use crate::strategy::Strategy;

/// Consecutive positive grid points required to accept a crossing.
pub const DEFAULT_PERSISTENCE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub delta: f64,
    pub mu_star: f64,
}

/// Critical attention capacity ratio per defector ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub strategy: Strategy,
    pub tau: f64,
    pub points: Vec<BoundaryPoint>,
}

/// Locates the first rise of `diffs` from `<= 0` to `> 0` that stays
/// positive for `persistence` consecutive points, and linearly interpolates
/// the zero crossing on `mus`.
pub fn column_crossing(mus: &[f64], diffs: &[f64], persistence: usize) -> Option<f64> {
    assert_eq!(mus.len(), diffs.len());
    let k = persistence.max(1);
    (1..diffs.len()).find_map(|t| {
        let (lo, hi) = (diffs[t - 1], diffs[t]);
        if lo > 0.0 || t + k > diffs.len() || diffs[t..t + k].iter().any(|&v| v <= 0.0) {
            return None;
        }
        let frac = -lo / (hi - lo);
        Some((mus[t - 1] + frac * (mus[t] - mus[t - 1])).clamp(0.0, 1.0))
    })
}

/// Scans each defector column over ascending attention capacity. Columns
/// with an undefined difference (no cooperators or no defectors) are skipped.
pub fn extract_boundary(surface: &Surface, persistence: usize) -> BoundaryCurve {
    let mus = surface.mu_axis();
    let points = (0..surface.defector_grid.len())
        .filter_map(|d_idx| {
            let diffs: Option<Vec<f64>> = surface
                .column(d_idx)
                .iter()
                .map(|c| c.diff.map(|s| s.mean))
                .collect();
            let mu_star = column_crossing(&mus, &diffs?, persistence)?;
            Some(BoundaryPoint {
                delta: surface.delta(d_idx),
                mu_star,
            })
        })
        .collect();
    BoundaryCurve {
        strategy: surface.strategy,
        tau: surface.tau,
        points,
    }
}

/// Fraction of cells, among those with a defined difference and whose
/// defector ratio satisfies `keep`, where cooperators outperform defectors.
/// Zero when no cell qualifies.
pub fn restricted_area(surface: &Surface, keep: impl Fn(f64) -> bool) -> f64 {
    let mut defined = 0usize;
    let mut positive = 0usize;
    for d_idx in 0..surface.defector_grid.len() {
        if !keep(surface.delta(d_idx)) {
            continue;
        }
        for cell in surface.column(d_idx) {
            if let Some(diff) = cell.diff {
                defined += 1;
                if diff.mean > 0.0 {
                    positive += 1;
                }
            }
        }
    }
    if defined == 0 {
        0.0
    } else {
        positive as f64 / defined as f64
    }
}

/// Fraction of defined cells with a positive mean difference.
pub fn cooperation_area(surface: &Surface) -> f64 {
    restricted_area(surface, |_| true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEntry {
    pub strategy: Strategy,
    pub tau: f64,
    pub area: f64,
}

/// Cooperation area of every surface, in input order.
pub fn area_report(surfaces: &[Surface]) -> Vec<AreaEntry> {
    surfaces
        .iter()
        .map(|s| AreaEntry {
            strategy: s.strategy,
            tau: s.tau,
            area: cooperation_area(s),
        })
        .collect()
}

/// Aggregate difference `a - b` of mean diffs over one half of the defector
/// axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfComparison {
    pub cells: usize,
    /// Mean over cells of `diff_a - diff_b`.
    pub mean_delta: f64,
    /// Standard error of `mean_delta`, treating cells and strategies as
    /// independent.
    pub std_error: f64,
    pub area_a: f64,
    pub area_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSplit {
    /// Cells with defector ratio below one half.
    pub below: HalfComparison,
    /// Cells with defector ratio above one half.
    pub above: HalfComparison,
}

/// Largest standardized gap between two surfaces' cell means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closeness {
    pub cells: usize,
    pub max_abs_delta: f64,
    /// Largest `|mean_a - mean_b| / se` over cells; infinite if the means
    /// differ with zero spread.
    pub max_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyReport {
    pub tau: f64,
    /// Strategies by descending cooperation area, ties by name.
    pub ranking: Vec<(Strategy, f64)>,
    /// FEQ minus FAR.
    pub feq_vs_far: Option<HalfSplit>,
    /// FMJ against FOC on the cooperator-majority half.
    pub fmj_vs_foc_below: Option<Closeness>,
    /// FMJ against FOD on the defector-majority half.
    pub fmj_vs_fod_above: Option<Closeness>,
}

impl StrategyReport {
    pub fn area(&self, strategy: Strategy) -> Option<f64> {
        self.ranking.iter().find(|(s, _)| *s == strategy).map(|&(_, a)| a)
    }
}

fn combined_se(a: &Summary, b: &Summary) -> f64 {
    (a.std_error().powi(2) + b.std_error().powi(2)).sqrt()
}

fn paired_cells<'a>(
    a: &'a Surface,
    b: &'a Surface,
    keep: impl Fn(f64) -> bool + 'a,
) -> impl Iterator<Item = (&'a CellStats, &'a CellStats)> + 'a {
    (0..a.defector_grid.len())
        .filter(move |&d| keep(a.delta(d)))
        .flat_map(move |d| a.column(d).iter().zip(b.column(d)))
}

fn compare_half(a: &Surface, b: &Surface, keep: impl Fn(f64) -> bool + Copy) -> HalfComparison {
    let mut cells = 0usize;
    let mut sum = 0.0;
    let mut var = 0.0;
    for (ca, cb) in paired_cells(a, b, keep) {
        if let (Some(da), Some(db)) = (ca.diff, cb.diff) {
            cells += 1;
            sum += da.mean - db.mean;
            var += combined_se(&da, &db).powi(2);
        }
    }
    let count = cells.max(1) as f64;
    HalfComparison {
        cells,
        mean_delta: sum / count,
        std_error: var.sqrt() / count,
        area_a: restricted_area(a, keep),
        area_b: restricted_area(b, keep),
    }
}

fn closeness(a: &Surface, b: &Surface, keep: impl Fn(f64) -> bool + Copy) -> Closeness {
    let mut out = Closeness {
        cells: 0,
        max_abs_delta: 0.0,
        max_z: 0.0,
    };
    for (ca, cb) in paired_cells(a, b, keep) {
        for (sa, sb) in [(ca.diff, cb.diff), (ca.defector, cb.defector)] {
            let (Some(sa), Some(sb)) = (sa, sb) else {
                continue;
            };
            let gap = (sa.mean - sb.mean).abs();
            let se = combined_se(&sa, &sb);
            let z = if gap == 0.0 {
                0.0
            } else if se == 0.0 {
                f64::INFINITY
            } else {
                gap / se
            };
            out.max_abs_delta = out.max_abs_delta.max(gap);
            out.max_z = out.max_z.max(z);
        }
        if ca.diff.is_some() {
            out.cells += 1;
        }
    }
    out
}

/// Ranks strategies by cooperation area and produces the half-plane
/// comparisons between FEQ/FAR and FMJ/FOC/FOD when those are present.
pub fn compare_strategies(surfaces: &[Surface]) -> Result<StrategyReport, AnalysisError> {
    let Some(first) = surfaces.first() else {
        return Err(AnalysisError::MismatchedGrids);
    };
    if surfaces.iter().any(|s| !s.same_grid(first)) {
        return Err(AnalysisError::MismatchedGrids);
    }
    let mut ranking: Vec<(Strategy, f64)> = surfaces
        .iter()
        .map(|s| (s.strategy, cooperation_area(s)))
        .collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.name().cmp(b.0.name())));

    let find = |st: Strategy| surfaces.iter().find(|s| s.strategy == st);
    let below = |delta: f64| delta < 0.5;
    let above = |delta: f64| delta > 0.5;
    let feq_vs_far = find(Strategy::Feq).zip(find(Strategy::Far)).map(|(feq, far)| HalfSplit {
        below: compare_half(feq, far, below),
        above: compare_half(feq, far, above),
    });
    let fmj = find(Strategy::Fmj);
    Ok(StrategyReport {
        tau: first.tau,
        ranking,
        feq_vs_far,
        fmj_vs_foc_below: fmj.zip(find(Strategy::Foc)).map(|(a, b)| closeness(a, b, below)),
        fmj_vs_fod_above: fmj.zip(find(Strategy::Fod)).map(|(a, b)| closeness(a, b, above)),
    })
}
