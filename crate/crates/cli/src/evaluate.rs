use std::path::Path;
use std::time::Instant;

use ldpost::{
    l2_value, linf_star_exact_with, load_point_set, DiscrepancyKind, LinfOptions, PointSet,
};
use serde::Serialize;

use crate::args::EvaluateArgs;
use crate::error::CliResult;

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub kind: DiscrepancyKind,
    pub n: usize,
    pub d: usize,
    /// Squared value for the L2 kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub squared: Option<f64>,
    /// Root for the L2 kinds, the discrepancy itself for L∞.
    pub root: f64,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summation: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boxes_visited: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boxes_total: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pruned_fraction: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct EvaluateReport {
    pub input: String,
    pub n: usize,
    pub d: usize,
    pub evaluations: Vec<Evaluation>,
}

pub fn evaluate(
    set: &PointSet<f64>,
    kind: DiscrepancyKind,
    opts: LinfOptions,
) -> CliResult<Evaluation> {
    let clock = Instant::now();
    let mut e = Evaluation {
        kind,
        n: set.n(),
        d: set.d(),
        squared: None,
        root: 0.0,
        runtime_ms: 0.0,
        summation: None,
        boxes_visited: None,
        boxes_total: None,
        pruned_fraction: None,
    };
    if kind.is_l2() {
        let v = l2_value(set, kind)?;
        e.squared = Some(v.squared);
        e.root = v.root;
        e.summation = Some("compensated");
    } else {
        let r = linf_star_exact_with(set, opts)?;
        e.root = r.value;
        e.boxes_visited = Some(r.boxes_visited);
        e.boxes_total = Some(r.boxes_total);
        e.pruned_fraction = Some(r.pruned_fraction);
    }
    e.runtime_ms = clock.elapsed().as_secs_f64() * 1e3;
    Ok(e)
}

pub fn report(
    path: &Path,
    kinds: &[DiscrepancyKind],
    opts: LinfOptions,
) -> CliResult<EvaluateReport> {
    let set: PointSet<f64> = load_point_set(path)?;
    let kinds = if kinds.is_empty() {
        &DiscrepancyKind::ALL[..]
    } else {
        kinds
    };
    let evaluations = kinds
        .iter()
        .map(|&k| evaluate(&set, k, opts))
        .collect::<CliResult<_>>()?;
    Ok(EvaluateReport {
        input: path.display().to_string(),
        n: set.n(),
        d: set.d(),
        evaluations,
    })
}

pub fn run(args: &EvaluateArgs) -> CliResult<()> {
    let opts = LinfOptions {
        budget: args.budget,
        pruning: !args.no_prune,
        ..LinfOptions::default()
    };
    let report = report(&args.input, &args.kind, opts)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
    );
    Ok(())
}
