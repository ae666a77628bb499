//! Committed Sobol'-seeded reference values.
//!
//! The published Sobol' columns came from a generator with other direction
//! numbers, so they are not reproducible bit for bit. This file pins the
//! values this implementation produces for every Sobol'-seeded cell, for
//! both built-in direction tables, together with a note wherever a value
//! falls outside 10% of the published one.

use ldpost::{sobol_set, DirectionTable, DiscrepancyKind, PointSet, SobolParams};
use serde::{Deserialize, Serialize};

use super::{l2_root, linf_or_skip, run_pgd, DEFAULT_STEPS};
use crate::error::CliResult;
use crate::reference;

/// Committed values; regenerate with `cargo run --release -p ldpost-cli --example sobol_baseline`.
pub const BASELINE_CSV: &str = include_str!("../../data/sobol-baseline.csv");

/// Values must be reproduced to this absolute tolerance.
pub const BASELINE_TOLERANCE: f64 = 1e-12;

/// Published values within this relative distance need no note.
pub const PUBLISHED_TOLERANCE: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Initial,
    Pgd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub target: String,
    pub d: usize,
    pub n: usize,
    pub stage: Stage,
    pub metric: DiscrepancyKind,
    pub direction_table: String,
    /// Empty when the cell exceeds the enumeration budget.
    pub value: Option<f64>,
    pub published: Option<f64>,
    pub note: String,
}

pub fn entries() -> Vec<BaselineEntry> {
    csv::Reader::from_reader(BASELINE_CSV.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("committed baseline parses")
}

/// Below three dimensions both built-in tables generate the same points.
fn effective_table_id(table_id: &str, d: usize) -> &str {
    if d <= 2 && table_id == DirectionTable::bratley_fox().id() {
        DirectionTable::joe_kuo().id()
    } else {
        table_id
    }
}

pub fn lookup<'a>(
    entries: &'a [BaselineEntry],
    target: &str,
    d: usize,
    n: usize,
    stage: Stage,
    metric: DiscrepancyKind,
    table_id: &str,
) -> Option<&'a BaselineEntry> {
    let table_id = effective_table_id(table_id, d);
    entries.iter().find(|e| {
        e.target == target
            && e.d == d
            && e.n == n
            && e.stage == stage
            && e.metric == metric
            && e.direction_table == table_id
    })
}

fn builtin_table(id: &str) -> Option<&'static DirectionTable> {
    [DirectionTable::joe_kuo(), DirectionTable::bratley_fox()]
        .into_iter()
        .find(|t| t.id() == id)
}

/// The kind minimized before measuring `metric`.
pub fn optimized_kind(metric: DiscrepancyKind) -> DiscrepancyKind {
    if metric.is_l2() {
        metric
    } else {
        DiscrepancyKind::L2Star
    }
}

pub fn measure(
    set: &PointSet<f64>,
    metric: DiscrepancyKind,
    budget: u128,
) -> CliResult<Option<f64>> {
    if metric.is_l2() {
        l2_root(set, metric).map(Some)
    } else {
        linf_or_skip(set, budget)
    }
}

/// Recomputes one cell from scratch.
pub fn compute(entry: &BaselineEntry, budget: u128) -> CliResult<Option<f64>> {
    let table = builtin_table(&entry.direction_table)
        .ok_or_else(|| anyhow::anyhow!("unknown direction table {}", entry.direction_table))?;
    let set: PointSet<f64> = sobol_set(entry.n, &SobolParams::new(entry.d).with_table(table))?;
    let set = match entry.stage {
        Stage::Initial => set,
        Stage::Pgd => run_pgd(&set, optimized_kind(entry.metric), DEFAULT_STEPS, None)?.final_set,
    };
    measure(&set, entry.metric, budget)
}

/// Why a value differs from the published one, or empty when it does not.
pub fn deviation_note(entry: &BaselineEntry) -> String {
    let (Some(value), Some(published)) = (entry.value, entry.published) else {
        return match entry.value {
            None => "exact L∞ exceeds the default enumeration budget".into(),
            Some(_) => String::new(),
        };
    };
    let rel = value / published - 1.0;
    if rel.abs() <= PUBLISHED_TOLERANCE {
        return String::new();
    }
    let cause = match (entry.stage, entry.direction_table == DirectionTable::joe_kuo().id() && entry.d > 2) {
        (Stage::Initial, true) => {
            "published column used GSL (Bratley–Fox) direction numbers; this row uses Joe–Kuo"
        }
        (Stage::Initial, false) => "also off with GSL-compatible direction numbers; cause unknown",
        (Stage::Pgd, true) => "learning rate and stopping rule of the published run are unpublished",
        // Most Joe–Kuo optimized rows agree with the published column to six digits.
        (Stage::Pgd, false) => "published optimized column started from Joe–Kuo points; this row starts from GSL points",
    };
    format!("{:+.1}% from published value: {cause}", rel * 100.0)
}

/// Every Sobol'-seeded cell: target, dimension, point count, metric, published initial and optimized values.
fn cells() -> Vec<(&'static str, usize, usize, DiscrepancyKind, f64, f64)> {
    let mut cells = Vec::new();
    let sobol = reference::STAR_260[2];
    cells.push((
        "table1",
        2,
        260,
        DiscrepancyKind::L2Star,
        sobol.l2_initial,
        sobol.l2_optimized,
    ));
    cells.push((
        "table1",
        2,
        260,
        DiscrepancyKind::LInfStar,
        sobol.linf_initial,
        sobol.linf_optimized,
    ));
    for (target, d) in [("table5", 3), ("table6", 4), ("table7", 5)] {
        for row in reference::linf_high_dim(d).expect("tabulated dimension") {
            cells.push((
                target,
                d,
                row.n,
                DiscrepancyKind::LInfStar,
                row.sobol,
                row.pgd_sobol,
            ));
        }
    }
    for (target, kind, rows) in [
        (
            "table-periodic",
            DiscrepancyKind::L2Periodic,
            &reference::PERIODIC,
        ),
        (
            "table-extreme",
            DiscrepancyKind::L2Extreme,
            &reference::EXTREME,
        ),
    ] {
        for row in rows {
            cells.push((target, 2, row.n, kind, row.sobol, row.pgd_sobol));
        }
    }
    cells
}

/// Computes every baseline row. Slow: runs each optimization and exact L∞ evaluation.
pub fn regenerate(budget: u128) -> CliResult<Vec<BaselineEntry>> {
    let mut out = Vec::new();
    for (target, d, n, metric, published_initial, published_pgd) in cells() {
        let tables: Vec<&DirectionTable> = if d <= 2 {
            vec![DirectionTable::joe_kuo()]
        } else {
            vec![DirectionTable::joe_kuo(), DirectionTable::bratley_fox()]
        };
        for table in tables {
            for (stage, published) in [
                (Stage::Initial, published_initial),
                (Stage::Pgd, published_pgd),
            ] {
                let mut entry = BaselineEntry {
                    target: target.into(),
                    d,
                    n,
                    stage,
                    metric,
                    direction_table: table.id().into(),
                    value: None,
                    published: Some(published),
                    note: String::new(),
                };
                entry.value = compute(&entry, budget)?;
                entry.note = deviation_note(&entry);
                out.push(entry);
            }
        }
    }
    Ok(out)
}

pub fn write_csv<W: std::io::Write>(entries: &[BaselineEntry], w: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(w);
    for e in entries {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}
