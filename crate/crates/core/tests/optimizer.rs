mod common;

use ldpost::{
    fibonacci_integration_lattice, fibonacci_set, l2_value, metric_value, optimize,
    optimize_with_restarts, random_set, AdamConfig, DiscrepancyKind, PointSet, Tracking,
    DEFAULT_BOX_BUDGET,
};

#[test]
fn every_iterate_stays_in_the_cube() {
    let violations = common::feasibility_violations();
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn optimize_is_bitwise_deterministic() {
    let violations = common::determinism_violations();
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn restarts_are_deterministic_under_a_seed() {
    let start = fibonacci_set::<f64>(30);
    let cfg = AdamConfig {
        steps: 20,
        alpha: 5e-4,
        ..AdamConfig::default()
    };
    let run = |seed| {
        optimize_with_restarts(&start, DiscrepancyKind::L2Star, &cfg, None, 3, 0.1, seed).unwrap()
    };
    let (a, b, c) = (run(5), run(5), run(6));
    assert_eq!(a.best_set, b.best_set);
    assert_eq!(a.best_root, b.best_root);
    assert_eq!(a.runs.len(), 4);
    assert_ne!(a.runs[1].final_loss, c.runs[1].final_loss);
}

#[test]
fn best_tracked_never_exceeds_the_start() {
    let start: PointSet<f64> = random_set(40, 2, 3);
    let cfg = AdamConfig {
        steps: 30,
        alpha: 0.02,
        ..AdamConfig::default()
    };
    let report = optimize(
        &start,
        DiscrepancyKind::L2Star,
        &cfg,
        Some(Tracking::linf(2)),
    )
    .unwrap();
    let initial = metric_value(&start, DiscrepancyKind::LInfStar, DEFAULT_BOX_BUDGET).unwrap();
    let best = report.best.unwrap();
    assert!(best.value <= initial);
    assert_eq!(
        metric_value(&best.set, DiscrepancyKind::LInfStar, DEFAULT_BOX_BUDGET).unwrap(),
        best.value
    );
}

#[test]
fn integration_lattice_is_a_periodic_local_optimum() {
    let lattice = fibonacci_integration_lattice::<f64>(13).unwrap();
    assert_eq!(lattice.n(), 233);
    let before = l2_value(&lattice, DiscrepancyKind::L2Periodic)
        .unwrap()
        .root;
    let report = optimize(
        &lattice,
        DiscrepancyKind::L2Periodic,
        &AdamConfig::default(),
        None,
    )
    .unwrap();
    let after = l2_value(&report.final_set, DiscrepancyKind::L2Periodic)
        .unwrap()
        .root;
    assert!(after >= before * (1.0 - 1e-3), "{before} -> {after}");
}

#[test]
fn fibonacci_60_trajectory_stabilizes() {
    let start = fibonacci_set::<f64>(60);
    let cfg = AdamConfig {
        alpha: 5e-4,
        ..AdamConfig::default()
    };
    let report = optimize(&start, DiscrepancyKind::L2Star, &cfg, None).unwrap();
    assert_eq!(report.trajectory.len(), 201);
    let min = report
        .trajectory
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let last = *report.trajectory.last().unwrap();
    assert!(last <= min * 1.01, "last {last}, min {min}");
    assert!(last < report.trajectory[0]);
}

#[test]
fn zero_learning_rate_returns_the_input() {
    let start = fibonacci_set::<f64>(20);
    let cfg = AdamConfig {
        alpha: 0.0,
        steps: 1,
        ..AdamConfig::default()
    };
    let report = optimize(&start, DiscrepancyKind::L2Star, &cfg, None).unwrap();
    assert_eq!(report.final_set, start);
}

#[test]
fn tracking_in_three_dimensions_respects_the_interval() {
    let start: PointSet<f64> = random_set(20, 3, 4);
    let cfg = AdamConfig {
        steps: 25,
        ..AdamConfig::default()
    };
    let report = optimize(
        &start,
        DiscrepancyKind::L2Star,
        &cfg,
        Some(Tracking::linf(3)),
    )
    .unwrap();
    let iterations: Vec<usize> = report.tracked.iter().map(|t| t.0).collect();
    assert_eq!(iterations, vec![0, 10, 20, 25]);
}
