//! Acceptance criteria, one test each. Every test prints a single verdict line
//! straight to stdout so it shows up without `--nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::time::Instant;

use ldpost::{
    fibonacci_set, kronecker_lattice, l2_value, linf_star_2d, linf_star_exact, optimize,
    AdamConfig, DiscrepancyKind, PointSet, DEFAULT_BOX_BUDGET,
};
use ldpost_cli::reference;
use ldpost_cli::reproduce::baseline::{self, PUBLISHED_TOLERANCE};
use ldpost_cli::reproduce::report::{Report, Status, Value};
use ldpost_cli::reproduce::{self, Options, Target};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

/// Prints the verdict line, then fails the test if anything went wrong.
fn verdict(id: u32, title: &str, detail: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {id:>2}: {status} {title} ({detail})");
    for f in failures {
        line.push_str("\n    ");
        line.push_str(f);
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn within(failures: &mut Vec<String>, what: &str, value: f64, target: f64, tol: f64) {
    if (value - target).abs() > tol {
        failures.push(format!(
            "{what}: {value:.9} vs {target} (off by {:.2e}, tolerance {tol:e})",
            (value - target).abs()
        ));
    }
}

fn at_most(failures: &mut Vec<String>, what: &str, value: f64, bound: f64) {
    if value > bound {
        failures.push(format!("{what}: {value:.9} exceeds {bound}"));
    }
}

fn root(set: &PointSet<f64>, kind: DiscrepancyKind) -> f64 {
    l2_value(set, kind).unwrap().root
}

/// Rows of `report` whose check in `column` did not pass.
fn failed_checks(report: &Report, columns: &[&str]) -> Vec<String> {
    report
        .checks
        .iter()
        .filter(|c| columns.contains(&c.column.as_str()) && c.status != Status::Pass)
        .map(|c| {
            format!(
                "{} n={} {:?}: {:?} vs {:?} ({})",
                report.name, c.row, c.column, c.computed, c.reference, c.status
            )
        })
        .collect()
}

fn count_passes(report: &Report, columns: &[&str]) -> usize {
    report
        .checks
        .iter()
        .filter(|c| columns.contains(&c.column.as_str()) && c.status == Status::Pass)
        .count()
}

#[test]
fn criterion_01_initial_star_values() {
    let start = Instant::now();
    let fib = fibonacci_set::<f64>(260);
    let lattice = kronecker_lattice::<f64>(260, 2f64.sqrt());
    let values = [
        root(&fib, DiscrepancyKind::L2Star),
        linf_star_exact(&fib).unwrap(),
        root(&lattice, DiscrepancyKind::L2Star),
        linf_star_exact(&lattice).unwrap(),
    ];
    let elapsed = start.elapsed().as_secs_f64();

    let [f, l] = [&reference::STAR_260[0], &reference::STAR_260[1]];
    assert_eq!((f.init, l.init), ("fibonacci", "sqrt2-lattice"));
    let mut failures = Vec::new();
    within(&mut failures, "fibonacci L2", values[0], f.l2_initial, 1e-6);
    within(
        &mut failures,
        "fibonacci Linf",
        values[1],
        f.linf_initial,
        1e-6,
    );
    within(&mut failures, "lattice L2", values[2], l.l2_initial, 1e-6);
    within(
        &mut failures,
        "lattice Linf",
        values[3],
        l.linf_initial,
        1e-6,
    );
    at_most(&mut failures, "runtime [s]", elapsed, 1.0);
    verdict(
        1,
        "Fibonacci and sqrt(2) lattice, n=260, initial L2 and Linf within 1e-6",
        &format!("{values:.9?} in {elapsed:.3} s"),
        &failures,
    );
}

#[test]
fn criterion_02_fibonacci_descent() {
    let start = Instant::now();
    let cfg = AdamConfig {
        steps: 200,
        alpha: 1e-4,
        tau: 1e-15,
        ..AdamConfig::default()
    };
    let report = optimize(
        &fibonacci_set::<f64>(260),
        DiscrepancyKind::L2Star,
        &cfg,
        None,
    )
    .unwrap();
    let l2 = root(&report.final_set, DiscrepancyKind::L2Star);
    let linf = linf_star_2d(&report.final_set).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let mut failures = Vec::new();
    if report.abort.is_some() {
        failures.push(format!("aborted: {:?}", report.abort));
    }
    at_most(&mut failures, "final L2", l2, 0.00195);
    at_most(&mut failures, "final Linf", linf, 0.0080);
    at_most(&mut failures, "runtime [s]", elapsed, 60.0);
    verdict(
        2,
        "Fibonacci n=260 after 200 steps, L2 <= 0.00195 and Linf <= 0.0080",
        &format!("L2 {l2:.7}, Linf {linf:.7} in {elapsed:.1} s"),
        &failures,
    );
}

#[test]
fn criterion_03_planar_linf_shape() {
    let opts = Options {
        ns: vec![20, 100, 180, 260, 420],
        ..Options::default()
    };
    let report = reproduce::run(Target::Table3, &opts).unwrap();
    let number = |n: u64, col: &str| {
        report
            .table
            .get(&Value::Int(n), col)
            .and_then(Value::number)
            .unwrap()
    };
    let mut failures = Vec::new();
    for n in [20, 100, 260] {
        let (best, returned) = (number(n, "pgd_best"), number(n, "pgd_returned"));
        at_most(
            &mut failures,
            &format!("n={n} best vs returned"),
            best,
            returned,
        );
    }
    for n in [100, 180, 260, 420] {
        let (returned, mpmc) = (number(n, "pgd_returned"), number(n, "mpmc"));
        if returned >= mpmc {
            failures.push(format!(
                "n={n}: returned {returned:.6} does not beat {mpmc}"
            ));
        }
    }
    let returned: Vec<String> = [20, 100, 180, 260, 420]
        .iter()
        .map(|&n| format!("{n}:{:.5}", number(n, "pgd_returned")))
        .collect();
    verdict(
        3,
        "planar Linf after descent: best <= returned, returned < reference constants",
        &format!("returned {}", returned.join(" ")),
        &failures,
    );
}

#[test]
fn criterion_04_periodic_fibonacci() {
    let report = reproduce::run(Target::TablePeriodic, &Options::default()).unwrap();
    let columns = ["fibonacci", "pgd_fibonacci<=fibonacci", "pgd_fibonacci"];
    let failures = failed_checks(&report, &columns);
    verdict(
        4,
        "periodic Fibonacci rows: initial within 1e-5, no degradation, descent within 10%",
        &format!("{} checks passed", count_passes(&report, &columns)),
        &failures,
    );
}

#[test]
fn criterion_05_extreme_fibonacci() {
    // The extreme closed form must agree with the quadrature oracle before its values count.
    let kind = DiscrepancyKind::L2Extreme;
    let gate = common::oracle_worst_error(kind, 102, 25).max(common::oracle_tie_error(kind));
    let mut failures = Vec::new();
    if gate > 1e-10 {
        failures.push(format!("oracle gate: closed form off by {gate:e}"));
    } else {
        let report = reproduce::run(Target::TableExtreme, &Options::default()).unwrap();
        failures = failed_checks(&report, &["fibonacci"]);
        if count_passes(&report, &["fibonacci"]) != reference::EXTREME.len() {
            failures.push("missing Fibonacci rows".into());
        }
    }
    verdict(
        5,
        "extreme Fibonacci rows within 1e-5, gated on the quadrature oracle",
        &format!("oracle gap {gate:.1e}"),
        &failures,
    );
}

#[test]
fn criterion_06_sobol_baseline() {
    let entries = baseline::entries();
    let recomputed: Vec<Option<f64>> = entries
        .par_iter()
        .map(|e| baseline::compute(e, DEFAULT_BOX_BUDGET).unwrap())
        .collect();
    let mut failures = Vec::new();
    let (mut within_published, mut documented) = (0, 0);
    for (e, now) in entries.iter().zip(&recomputed) {
        let cell = format!(
            "{} d={} n={} {:?} {} [{}]",
            e.target, e.d, e.n, e.stage, e.metric, e.direction_table
        );
        match (e.value, *now) {
            (Some(a), Some(b)) if (a - b).abs() <= 1e-12 => {}
            (None, None) => {}
            (a, b) => failures.push(format!("{cell}: committed {a:?}, recomputed {b:?}")),
        }
        let close = match (e.value, e.published) {
            (Some(v), Some(p)) => (v / p - 1.0).abs() <= PUBLISHED_TOLERANCE,
            _ => false,
        };
        if close {
            within_published += 1;
        } else if !e.note.is_empty() {
            documented += 1;
        } else {
            failures.push(format!(
                "{cell}: {:?} vs {:?} with no note",
                e.value, e.published
            ));
        }
    }
    if entries.is_empty() {
        failures.push("baseline is empty".into());
    }
    verdict(
        6,
        "Sobol' baseline reproduced to 1e-12, published values within 10% or documented",
        &format!(
            "{} cells: {within_published} within 10%, {documented} documented",
            entries.len()
        ),
        &failures,
    );
}

#[test]
fn criterion_07_gradient_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = Vec::new();
    for (seed, kind) in common::L2_KINDS.into_iter().enumerate() {
        let err = common::gradient_worst_error(kind, 1 + seed as u64, 50);
        worst.push(format!("{kind} {err:.1e}"));
        if err.is_nan() || err >= 1e-5 {
            failures.push(format!("{kind}: relative error {err:e}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    at_most(&mut failures, "runtime [s]", elapsed, 30.0);
    verdict(
        7,
        "analytic gradients match central differences within 1e-5",
        &format!("{} in {elapsed:.2} s", worst.join(", ")),
        &failures,
    );
}

#[test]
fn criterion_08_oracle_suite() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (seed, kind) in common::L2_KINDS.into_iter().enumerate() {
        let err = common::oracle_worst_error(kind, 100 + seed as u64, 25);
        let ties = common::oracle_tie_error(kind);
        worst = worst.max(err).max(ties);
        if err > 1e-10 || ties > 1e-10 {
            failures.push(format!("{kind}: random {err:e}, ties {ties:e}"));
        }
    }
    let (star, periodic) = common::analytic_errors();
    within(&mut failures, "star single point vs 1/12", star, 0.0, 1e-15);
    within(
        &mut failures,
        "periodic single point vs 1/6",
        periodic,
        0.0,
        1e-15,
    );
    verdict(
        8,
        "closed forms equal the cellwise quadrature oracle within 1e-10",
        &format!("worst gap {worst:.1e}"),
        &failures,
    );
}

#[test]
fn criterion_09_linf_correctness() {
    let mut failures = common::linf_naive_mismatches(7, 20);
    let gap = common::planar_sweep_worst_gap(8, 100);
    if gap > 1e-15 {
        failures.push(format!("planar sweep differs by {gap:e}"));
    }
    failures.extend(common::pruning_mismatches(9, 30));
    verdict(
        9,
        "exact Linf equals the naive oracle, planar sweep agrees, pruning is value-neutral",
        &format!("planar gap {gap:.1e}"),
        &failures,
    );
}

#[test]
fn criterion_10_invariance_and_determinism() {
    let mut runner = TestRunner::new(Config {
        cases: 64,
        failure_persistence: None,
        ..Config::default()
    });
    let mut failures = Vec::new();
    let mut record = |name: &str, result: Result<(), String>| {
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    };
    record(
        "torus shift",
        runner
            .run(
                &(
                    common::point_set(24, 4),
                    prop::collection::vec(0.0f64..1.0, 4),
                ),
                |(set, shift)| common::torus_shift_invariance(&set, &shift),
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "axis permutation",
        runner
            .run(&(common::point_set(16, 4), any::<u64>()), |(set, seed)| {
                common::axis_permutation_invariance(&set, seed)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "point permutation",
        runner
            .run(&(common::point_set(16, 3), any::<u64>()), |(set, seed)| {
                common::point_permutation_invariance(&set, seed)
            })
            .map_err(|e| e.to_string()),
    );
    failures.extend(common::feasibility_violations());
    failures.extend(common::determinism_violations());
    verdict(
        10,
        "shift and permutation invariance, feasible iterates, bitwise determinism",
        "64 cases per property",
        &failures,
    );
}

#[test]
fn criterion_11_out_of_scope_results_are_marked() {
    let mut failures = Vec::new();

    // Exact Linf at d=5 beyond the envelope is reported as skipped, not computed.
    let report = reproduce::run(Target::Table7, &Options::default()).unwrap();
    for col in ["sobol", "pgd_sobol"] {
        if report.table.get(&Value::Int(500), col) != Some(&Value::Skipped) {
            failures.push(format!("d=5 n=500 {col} is not marked skipped"));
        }
    }
    let skipped = report
        .checks
        .iter()
        .filter(|c| c.column == "exact-linf" && c.status == Status::Skipped)
        .count();
    if report.find("500", "exact-linf").map(|c| c.status) != Some(Status::Skipped) {
        failures.push("d=5 n=500 has no skipped check".into());
    }

    // The full sweeps are opt-in targets; a reduced run exercises the same code.
    let defaults = Options::default();
    if (defaults.n_max, defaults.n_step) != (1020, 20) {
        failures.push("sweep defaults do not cover n=20..1020".into());
    }
    let sweep = reproduce::run(
        Target::Fig1,
        &Options {
            n_max: 60,
            steps: 20,
            ..Options::default()
        },
    )
    .unwrap();
    if sweep.table.rows.len() != 3 {
        failures.push(format!("reduced sweep has {} rows", sweep.table.rows.len()));
    }
    let trajectories = reproduce::run(
        Target::Fig5,
        &Options {
            ns: vec![64],
            steps: 20,
            ..Options::default()
        },
    )
    .unwrap();
    if trajectories.table.rows.len() != 21 {
        failures.push(format!(
            "reduced periodic trajectory has {} rows",
            trajectories.table.rows.len()
        ));
    }
    verdict(
        11,
        "over-budget d=5 cells marked skipped, long sweeps opt-in",
        &format!("{skipped} d=5 rows skipped, reduced sweep n=20..60"),
        &failures,
    );
}
