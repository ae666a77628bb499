//! Oracles and check routines shared by the core suites and the acceptance target.
#![allow(dead_code)]

use ldpost::{
    adam_project_step, l2_grad, l2_loss_smoothed, l2_value, linf_star_2d, linf_star_exact,
    linf_star_exact_with, optimize, quadrature_oracle, random_set, AdamConfig, AdamState,
    DiscrepancyKind, LinfOptions, PointSet, QuadratureMethod, SmoothingParams, Tracking,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const L2_KINDS: [DiscrepancyKind; 3] = [
    DiscrepancyKind::L2Star,
    DiscrepancyKind::L2Periodic,
    DiscrepancyKind::L2Extreme,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_d: usize) -> PointSet<f64> {
    let n = rng.gen_range(1..=max_n);
    let d = rng.gen_range(1..=max_d);
    random_with_shape(rng, n, d)
}

pub fn random_with_shape(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet<f64> {
    let coords = (0..n * d).map(|_| rng.gen::<f64>()).collect();
    PointSet::from_flat(n, d, coords).unwrap()
}

// ---- gradients ----

pub const FD_STEP: f64 = 1e-6;

fn central_difference(set: &PointSet<f64>, kind: DiscrepancyKind) -> Vec<f64> {
    let smoothing = SmoothingParams::default();
    let base = set.as_flat().to_vec();
    (0..base.len())
        .map(|idx| {
            let eval = |delta: f64| {
                let mut c = base.clone();
                c[idx] += delta;
                let p = PointSet::from_flat(set.n(), set.d(), c).unwrap();
                l2_loss_smoothed(&p, kind, smoothing).unwrap()
            };
            (eval(FD_STEP) - eval(-FD_STEP)) / (2.0 * FD_STEP)
        })
        .collect()
}

/// Largest componentwise deviation, relative to the largest gradient component.
fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = numeric.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let err = analytic
        .iter()
        .zip(numeric)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    err / scale
}

/// Smallest distance between two coordinates on the same axis.
fn min_gap(set: &PointSet<f64>) -> f64 {
    (0..set.d())
        .map(|k| {
            let mut xs: Vec<f64> = set.points().map(|p| p[k]).collect();
            xs.sort_by(f64::total_cmp);
            xs.windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Worst relative gradient error over `instances` random sets with n ≤ 30, d ≤ 5.
pub fn gradient_worst_error(kind: DiscrepancyKind, seed: u64, instances: usize) -> f64 {
    let h = FD_STEP;
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < instances {
        let set = random_instance(&mut rng, 30, 5);
        // Keep the stencil inside the cube and off the kinks of max, min and abs.
        let inside = set
            .as_flat()
            .iter()
            .all(|&x| (2.0 * h..=1.0 - 2.0 * h).contains(&x));
        if !inside || min_gap(&set) < 4.0 * h {
            continue;
        }
        let analytic = l2_grad(&set, kind, SmoothingParams::default()).unwrap();
        let numeric = central_difference(&set, kind);
        done += 1;
        if numeric.iter().all(|g| g.abs() < 1e-12) {
            // Periodic single points have a constant loss.
            let flat = analytic.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            worst = worst.max(flat);
            continue;
        }
        worst = worst.max(relative_error(&analytic, &numeric));
    }
    worst
}

// ---- quadrature oracle ----

fn oracle_error(set: &PointSet<f64>, kind: DiscrepancyKind) -> f64 {
    let closed = l2_value(set, kind).unwrap().squared;
    let quad = quadrature_oracle(set, kind, 0).unwrap();
    assert_eq!(quad.method, QuadratureMethod::ExactCells);
    (closed - quad.value).abs()
}

/// Worst closed-form vs quadrature gap over random 1-D/2-D sets with n ≤ 5.
pub fn oracle_worst_error(kind: DiscrepancyKind, seed: u64, instances: usize) -> f64 {
    let mut rng = rng(seed);
    (0..instances)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let d = rng.gen_range(1..=2);
            oracle_error(&random_with_shape(&mut rng, n, d), kind)
        })
        .fold(0.0, f64::max)
}

/// Repeated coordinates and points on the cube boundary.
pub fn oracle_tie_error(kind: DiscrepancyKind) -> f64 {
    let set = PointSet::from_rows(&[[0.0, 0.5], [0.5, 0.5], [1.0, 0.25], [0.5, 1.0]]).unwrap();
    oracle_error(&set, kind)
}

/// Star at the centre of the unit interval and periodic for any single point.
pub fn analytic_errors() -> (f64, f64) {
    let half = PointSet::<f64>::from_rows(&[[0.5]]).unwrap();
    let star = l2_value(&half, DiscrepancyKind::L2Star).unwrap().squared;
    let any = PointSet::<f64>::from_rows(&[[0.3]]).unwrap();
    let periodic = l2_value(&any, DiscrepancyKind::L2Periodic).unwrap().squared;
    ((star - 1.0 / 12.0).abs(), (periodic - 1.0 / 6.0).abs())
}

// ---- L∞ ----

/// Every box anchored at the origin whose corner lies on the critical grid,
/// with both the open and the closed count.
pub fn naive_linf(set: &PointSet<f64>) -> f64 {
    let (n, d) = (set.n(), set.d());
    let grids: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut g: Vec<f64> = set.points().map(|p| p[k]).collect();
            g.push(1.0);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();
    let mut idx = vec![0usize; d];
    let mut best = 0.0f64;
    loop {
        let q: Vec<f64> = (0..d).map(|k| grids[k][idx[k]]).collect();
        let vol = q.iter().fold(1.0, |v, &c| v * c);
        let open = set
            .points()
            .filter(|p| p.iter().zip(&q).all(|(x, c)| x < c))
            .count();
        let closed = set
            .points()
            .filter(|p| p.iter().zip(&q).all(|(x, c)| x <= c))
            .count();
        best = best
            .max(vol - open as f64 / n as f64)
            .max(closed as f64 / n as f64 - vol);
        let mut k = 0;
        loop {
            if k == d {
                return best;
            }
            idx[k] += 1;
            if idx[k] < grids[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Random sets with n ≤ 8, d ≤ 3 where the exact enumerator disagrees with the naive oracle.
pub fn linf_naive_mismatches(seed: u64, instances: usize) -> Vec<String> {
    let mut rng = rng(seed);
    let mut sets: Vec<PointSet<f64>> = (0..instances)
        .map(|_| random_instance(&mut rng, 8, 3))
        .collect();
    // Repeated coordinates exercise the open/closed distinction.
    sets.push(
        PointSet::from_rows(&[
            [0.0, 0.5, 0.5],
            [0.5, 0.5, 0.25],
            [0.5, 0.0, 0.75],
            [0.25, 0.75, 0.5],
        ])
        .unwrap(),
    );
    sets.iter()
        .filter_map(|set| {
            let (a, b) = (linf_star_exact(set).unwrap(), naive_linf(set));
            (a != b).then(|| format!("n={} d={}: {a} vs {b}", set.n(), set.d()))
        })
        .collect()
}

/// Worst gap between the planar sweep and the enumerator over random sets with n ≤ 200.
pub fn planar_sweep_worst_gap(seed: u64, instances: usize) -> f64 {
    let mut rng = rng(seed);
    (0..instances)
        .map(|_| {
            let n = rng.gen_range(1..=200);
            let set = random_with_shape(&mut rng, n, 2);
            (linf_star_2d(&set).unwrap() - linf_star_exact(&set).unwrap()).abs()
        })
        .fold(0.0, f64::max)
}

/// Random sets where toggling pruning or parallelism changes the value.
pub fn pruning_mismatches(seed: u64, instances: usize) -> Vec<String> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for _ in 0..instances {
        let n = rng.gen_range(1..=60);
        let d = rng.gen_range(1..=4);
        let set = random_with_shape(&mut rng, n, d);
        let run = |pruning, parallel| {
            linf_star_exact_with(
                &set,
                LinfOptions {
                    pruning,
                    parallel,
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let reference = run(false, false);
        if reference.pruned_fraction != 0.0 {
            out.push(format!("n={n} d={d}: pruned without pruning"));
        }
        for (pruning, parallel) in [(true, false), (false, true), (true, true)] {
            let v = run(pruning, parallel).value;
            if v != reference.value {
                out.push(format!(
                    "n={n} d={d} pruning={pruning} parallel={parallel}: {v} vs {}",
                    reference.value
                ));
            }
        }
    }
    out
}

// ---- invariance properties ----

pub fn point_set(max_n: usize, max_d: usize) -> impl Strategy<Value = PointSet<f64>> {
    (1..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        prop::collection::vec(0.0f64..1.0, n * d)
            .prop_map(move |c| PointSet::from_flat(n, d, c).unwrap())
    })
}

pub fn value(set: &PointSet<f64>, kind: DiscrepancyKind) -> f64 {
    match kind {
        DiscrepancyKind::LInfStar => linf_star_exact(set).unwrap(),
        kind => l2_value(set, kind).unwrap().squared,
    }
}

fn map_rows(set: &PointSet<f64>, f: impl Fn(&[f64]) -> Vec<f64>) -> PointSet<f64> {
    let rows: Vec<Vec<f64>> = set.points().map(f).collect();
    PointSet::from_rows(&rows).unwrap()
}

pub fn torus_shift_invariance(set: &PointSet<f64>, shift: &[f64]) -> Result<(), TestCaseError> {
    let moved = map_rows(set, |p| {
        p.iter()
            .zip(shift)
            .map(|(x, s)| (x + s).rem_euclid(1.0))
            .collect()
    });
    let a = value(set, DiscrepancyKind::L2Periodic);
    let b = value(&moved, DiscrepancyKind::L2Periodic);
    prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    Ok(())
}

pub fn axis_permutation_invariance(set: &PointSet<f64>, seed: u64) -> Result<(), TestCaseError> {
    let d = set.d();
    let mut order: Vec<usize> = (0..d).collect();
    // Rotate by a seed-dependent amount and swap the ends.
    order.rotate_left((seed % d as u64) as usize);
    if d > 1 && seed.is_multiple_of(2) {
        order.swap(0, d - 1);
    }
    let permuted = map_rows(set, |p| order.iter().map(|&k| p[k]).collect());
    for kind in DiscrepancyKind::ALL {
        let a = value(set, kind);
        let b = value(&permuted, kind);
        prop_assert!((a - b).abs() <= 1e-13, "{kind}: {a} vs {b}");
    }
    Ok(())
}

pub fn point_permutation_invariance(set: &PointSet<f64>, seed: u64) -> Result<(), TestCaseError> {
    let mut rows = set.to_rows();
    let len = rows.len();
    rows.rotate_left((seed % len as u64) as usize);
    rows.reverse();
    let permuted = PointSet::from_rows(&rows).unwrap();
    for kind in DiscrepancyKind::ALL {
        let a = value(set, kind);
        let b = value(&permuted, kind);
        prop_assert!((a - b).abs() <= 1e-13, "{kind}: {a} vs {b}");
    }
    Ok(())
}

// ---- optimizer ----

/// Runs large projected steps and reports any coordinate leaving the cube.
pub fn feasibility_violations() -> Vec<String> {
    // A large step forces clamping on most coordinates.
    let cfg = AdamConfig {
        alpha: 0.05,
        ..AdamConfig::default()
    };
    let mut out = Vec::new();
    for (seed, kind) in L2_KINDS.into_iter().enumerate() {
        let mut set: PointSet<f64> = random_set(40, 3, seed as u64);
        let mut state = AdamState::new(set.n() * set.d());
        let mut clamps = 0;
        for it in 0..60 {
            let step = adam_project_step(&set, &mut state, &cfg, kind).unwrap();
            if !step.set.as_flat().iter().all(|x| (0.0..=1.0).contains(x)) {
                out.push(format!("{kind}: iterate {it} left the cube"));
            }
            clamps += step.clamp_events;
            set = step.set;
        }
        if kind == DiscrepancyKind::L2Star && clamps == 0 {
            out.push("l2-star: the projection was never exercised".into());
        }
    }
    out
}

/// Repeats optimizations and reports any bitwise difference, including across worker counts.
pub fn determinism_violations() -> Vec<String> {
    let mut out = Vec::new();
    let start: PointSet<f64> = random_set(50, 2, 11);
    let cfg = AdamConfig {
        steps: 40,
        ..AdamConfig::default()
    };
    let run = || {
        optimize(
            &start,
            DiscrepancyKind::L2Star,
            &cfg,
            Some(Tracking::linf(2)),
        )
        .unwrap()
    };
    let (a, b) = (run(), run());
    if a.final_set != b.final_set || a.trajectory != b.trajectory || a.tracked != b.tracked {
        out.push("repeated run differs".into());
    }

    // Worker count does not affect any summation.
    let start: PointSet<f64> = random_set(150, 3, 12);
    let cfg = AdamConfig {
        steps: 5,
        ..AdamConfig::default()
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let c = single.install(|| optimize(&start, DiscrepancyKind::L2Extreme, &cfg, None).unwrap());
    let d = optimize(&start, DiscrepancyKind::L2Extreme, &cfg, None).unwrap();
    if c.final_set != d.final_set || c.trajectory != d.trajectory {
        out.push("single worker differs from the default pool".into());
    }
    out
}
