use std::path::{Path, PathBuf};

use ldpost::{
    l2_value, load_point_set, optimize, optimize_with_restarts, save_point_set, AbortReason,
    AdamConfig, DiscrepancyKind, PointSet, Tracking,
};
use serde::Serialize;

use crate::args::OptimizeArgs;
use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, opt_sig17, sidecar, sig17, write_json};

#[derive(Debug, Serialize)]
pub struct TrackedSummary {
    pub metric: DiscrepancyKind,
    pub every: usize,
    pub initial: f64,
    pub last: f64,
    pub best_value: f64,
    pub best_iteration: usize,
    /// Restart index of the best iterate.
    pub best_run: usize,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub run: usize,
    pub steps_completed: usize,
    pub final_loss: f64,
    pub final_root: f64,
    pub best_tracked: Option<f64>,
    pub abort: Option<AbortReason>,
}

#[derive(Debug, Serialize)]
pub struct OptimizeMeta {
    pub input: String,
    pub output_set: String,
    pub best_set: Option<String>,
    pub trajectory: String,
    pub kind: DiscrepancyKind,
    pub n: usize,
    pub d: usize,
    pub config: AdamConfig<f64>,
    pub alpha_from_default_rule: bool,
    pub restarts: usize,
    pub restart_fraction: f64,
    pub seed: u64,
    pub threads: usize,
    pub initial_root: f64,
    pub final_root: f64,
    pub final_loss: f64,
    pub clamp_events: Option<u64>,
    pub wall_ms: f64,
    pub tracking: Option<TrackedSummary>,
    /// Run whose final set was written.
    pub kept_run: usize,
    pub runs: Vec<RunSummary>,
}

/// One row of the trajectory file.
struct TrajectoryRow {
    run: usize,
    iteration: usize,
    loss: f64,
    tracked: Option<f64>,
}

fn write_trajectory(path: &Path, rows: &[TrajectoryRow], with_run: bool) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["iteration", "loss_squared", "loss_root", "tracked"];
    if with_run {
        header.insert(0, "run");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut record = vec![
            r.iteration.to_string(),
            sig17(r.loss),
            sig17(r.loss.max(0.0).sqrt()),
            opt_sig17(r.tracked),
        ];
        if with_run {
            record.insert(0, r.run.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn rows_of(run: usize, trajectory: &[f64], tracked: &[(usize, f64)]) -> Vec<TrajectoryRow> {
    trajectory
        .iter()
        .enumerate()
        .map(|(iteration, &loss)| TrajectoryRow {
            run,
            iteration,
            loss,
            tracked: tracked.iter().find(|t| t.0 == iteration).map(|t| t.1),
        })
        .collect()
}

pub fn config_for(args: &OptimizeArgs, n: usize) -> CliResult<(AdamConfig<f64>, bool)> {
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let cfg = AdamConfig {
        alpha: args.alpha.unwrap_or_else(|| AdamConfig::default_alpha(n)),
        steps: args.steps,
        tau: args.tau,
        ..AdamConfig::default()
    };
    cfg.validate()?;
    Ok((cfg, args.alpha.is_none()))
}

pub fn run(args: &OptimizeArgs) -> CliResult<OptimizeMeta> {
    let start: PointSet<f64> = load_point_set(&args.input)?;
    if !args.kind.is_l2() {
        return Err(CliError::Usage(format!(
            "cannot optimize {}; choose an L2 kind",
            args.kind
        )));
    }
    let (cfg, alpha_default) = config_for(args, start.n())?;
    let track = args.track_linf.then(|| {
        let t = Tracking::linf(start.d());
        match args.track_every {
            Some(k) => t.every(k),
            None => t,
        }
    });

    let set_path = sidecar(&args.output, ".txt");
    let best_path = sidecar(&args.output, ".best.txt");
    let trajectory_path = sidecar(&args.output, ".trajectory.csv");
    let meta_path = sidecar(&args.output, ".meta.json");
    let initial_root = l2_value(&start, args.kind)?.root;

    let mut rows = Vec::new();
    let mut runs = Vec::new();
    let mut best_set_written: Option<PathBuf> = None;
    let mut tracking = None;
    let (final_set, final_loss, clamp_events, wall_ms, kept_run);

    if args.restarts == 0 {
        let report = optimize(&start, args.kind, &cfg, track)?;
        rows = rows_of(0, &report.trajectory, &report.tracked);
        if let (Some(t), Some(best)) = (track, &report.best) {
            save_point_set(&best.set, &best_path)?;
            best_set_written = Some(best_path.clone());
            tracking = Some(TrackedSummary {
                metric: t.metric,
                every: t.every,
                initial: report.tracked[0].1,
                last: report.tracked.last().map(|x| x.1).unwrap_or(f64::NAN),
                best_value: best.value,
                best_iteration: best.iteration,
                best_run: 0,
            });
        }
        runs.push(RunSummary {
            run: 0,
            steps_completed: report.steps_completed(),
            final_loss: report.final_loss,
            final_root: l2_value(&report.final_set, args.kind)?.root,
            best_tracked: report.best.as_ref().map(|b| b.value),
            abort: report.abort.clone(),
        });
        final_loss = report.final_loss;
        clamp_events = Some(report.clamp_events);
        wall_ms = report.wall_ms;
        kept_run = 0;
        final_set = report.final_set;
    } else {
        let clock = std::time::Instant::now();
        let report = optimize_with_restarts(
            &start,
            args.kind,
            &cfg,
            track,
            args.restarts,
            args.restart_fraction,
            args.seed,
        )?;
        for r in &report.runs {
            rows.extend(rows_of(r.run, &r.trajectory, &r.tracked));
            runs.push(RunSummary {
                run: r.run,
                steps_completed: r.trajectory.len() - 1,
                final_loss: r.final_loss,
                final_root: r.final_root,
                best_tracked: r.best_tracked,
                abort: r.abort.clone(),
            });
        }
        if let Some(t) = track {
            let first = &report.runs[0].tracked;
            let (best_run, best) = report
                .runs
                .iter()
                .flat_map(|r| r.tracked.iter().map(move |x| (r.run, *x)))
                .fold(None::<(usize, (usize, f64))>, |acc, cur| match acc {
                    Some(a) if a.1 .1 <= cur.1 .1 => Some(a),
                    _ => Some(cur),
                })
                .expect("tracked values");
            tracking = Some(TrackedSummary {
                metric: t.metric,
                every: t.every,
                initial: first[0].1,
                last: report
                    .runs
                    .last()
                    .and_then(|r| r.tracked.last())
                    .map(|x| x.1)
                    .unwrap_or(f64::NAN),
                best_value: best.1,
                best_iteration: best.0,
                best_run,
            });
        }
        final_loss = report.runs[report.best_run].final_loss;
        clamp_events = None;
        wall_ms = clock.elapsed().as_secs_f64() * 1e3;
        kept_run = report.best_run;
        final_set = report.best_set;
    }

    save_point_set(&final_set, &set_path)?;
    write_trajectory(&trajectory_path, &rows, args.restarts > 0)?;
    let meta = OptimizeMeta {
        input: args.input.display().to_string(),
        output_set: set_path.display().to_string(),
        best_set: best_set_written.map(|p| p.display().to_string()),
        trajectory: trajectory_path.display().to_string(),
        kind: args.kind,
        n: start.n(),
        d: start.d(),
        config: cfg,
        alpha_from_default_rule: alpha_default,
        restarts: args.restarts,
        restart_fraction: args.restart_fraction,
        seed: args.seed,
        threads: rayon::current_num_threads(),
        initial_root,
        final_root: l2_value(&final_set, args.kind)?.root,
        final_loss,
        clamp_events,
        wall_ms,
        tracking,
        kept_run,
        runs,
    };
    write_json(&meta_path, &meta)?;

    if let Some(abort) = meta.runs.iter().find_map(|r| r.abort.as_ref()) {
        return Err(CliError::Numerical(format!(
            "descent aborted at iteration {}: {}; outputs hold the last finite iterate",
            abort.iteration, abort.message
        )));
    }
    Ok(meta)
}
