//! Projected ADAM descent on a smoothed L2 discrepancy.
//!
//! Each step takes the analytic gradient of the smoothed loss, updates the
//! first and second moment estimates, applies bias correction, moves every
//! coordinate by `-α m̂ / (sqrt(v̂) + ε)` and clamps the result back into
//! `[0, 1]`. Moments start at zero and the bias-correction exponent starts
//! at 1.
//!
//! Because the loss is only a proxy for the L∞ star discrepancy, a run can
//! track a second metric and keep the best iterate it has seen.

use std::time::Instant;

use rand::distributions::{Distribution, Standard};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::l2::{l2_loss_and_grad, l2_loss_smoothed, l2_value, SmoothingParams};
use crate::linf::{linf_star_2d, linf_star_exact_with, GridSlice, LinfOptions, DEFAULT_BOX_BUDGET};
use crate::point_set::{DiscrepancyKind, PointSet};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdamConfig<T> {
    /// Learning rate α.
    pub alpha: T,
    pub beta1: T,
    pub beta2: T,
    pub epsilon: T,
    /// Number of descent steps T.
    pub steps: usize,
    /// Smoothing constant τ of the loss.
    pub tau: T,
}

impl<T: Real> Default for AdamConfig<T> {
    fn default() -> Self {
        Self {
            alpha: T::lit(1e-4),
            beta1: T::lit(0.9),
            beta2: T::lit(0.999),
            epsilon: T::lit(1e-8),
            steps: 200,
            tau: T::lit(1e-15),
        }
    }
}

impl<T: Real> AdamConfig<T> {
    /// Default learning rate for a set of `n` points: 5e-4 below 100 points, 1e-4 otherwise.
    pub fn default_alpha(n: usize) -> T {
        if n < 100 {
            T::lit(5e-4)
        } else {
            T::lit(1e-4)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |b: T| b >= T::zero() && b < T::one();
        // α = 0 is accepted as a null update.
        if !(self.alpha >= T::zero() && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !unit(self.beta1) || !unit(self.beta2) {
            return Err(Error::InvalidConfig(format!(
                "beta1 and beta2 must lie in [0, 1), got {} and {}",
                self.beta1, self.beta2
            )));
        }
        if self.epsilon.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        SmoothingParams::new(self.tau)?;
        Ok(())
    }

    pub fn smoothing(&self) -> SmoothingParams<T> {
        SmoothingParams { tau: self.tau }
    }
}

/// Moment estimates and step counter.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<T>,
    pub v: Vec<T>,
    /// Steps taken so far; the next step uses `t + 1` in bias correction.
    pub t: u32,
}

impl<T: Real> AdamState<T> {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![T::zero(); len],
            v: vec![T::zero(); len],
            t: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Step<T> {
    pub set: PointSet<T>,
    /// Smoothed loss of the input set.
    pub loss: T,
    /// Coordinates clamped to 0 or 1 in this step.
    pub clamp_events: u64,
}

/// One projected ADAM step from `set` for the smoothed loss of `kind`.
pub fn adam_project_step<T: Real>(
    set: &PointSet<T>,
    state: &mut AdamState<T>,
    cfg: &AdamConfig<T>,
    kind: DiscrepancyKind,
) -> Result<Step<T>> {
    let (n, d) = (set.n(), set.d());
    if state.m.len() != n * d || state.v.len() != n * d {
        return Err(Error::InvalidConfig(format!(
            "moment buffers hold {} entries, set has {}",
            state.m.len(),
            n * d
        )));
    }
    let (loss, grad) = l2_loss_and_grad(set, kind, cfg.smoothing())?;
    if let Some(idx) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFiniteGradient {
            point: idx / d,
            axis: idx % d,
        });
    }

    state.t += 1;
    let t = state.t as i32;
    let one = T::one();
    let bias1 = one - cfg.beta1.powi(t);
    let bias2 = one - cfg.beta2.powi(t);
    let mut clamp_events = 0;
    let mut coords = Vec::with_capacity(n * d);
    for (idx, (&x, &g)) in set.as_flat().iter().zip(&grad).enumerate() {
        let m = cfg.beta1 * state.m[idx] + (one - cfg.beta1) * g;
        let v = cfg.beta2 * state.v[idx] + (one - cfg.beta2) * g * g;
        state.m[idx] = m;
        state.v[idx] = v;
        let m_hat = m / bias1;
        let v_hat = v / bias2;
        let tentative = x - cfg.alpha * m_hat / (v_hat.sqrt() + cfg.epsilon);
        if !tentative.is_finite() {
            return Err(Error::NonFiniteGradient {
                point: idx / d,
                axis: idx % d,
            });
        }
        let projected = if tentative < T::zero() {
            clamp_events += 1;
            T::zero()
        } else if tentative > one {
            clamp_events += 1;
            one
        } else {
            tentative
        };
        coords.push(projected);
    }
    Ok(Step {
        set: PointSet::from_flat_unchecked(n, d, coords),
        loss,
        clamp_events,
    })
}

/// Secondary metric recorded along a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tracking {
    pub metric: DiscrepancyKind,
    /// Evaluate every `every` iterations (the first and last are always evaluated).
    pub every: usize,
    pub linf_budget: u128,
}

impl Tracking {
    /// L∞ tracking: every iteration in the plane, every tenth otherwise.
    pub fn linf(d: usize) -> Self {
        Self {
            metric: DiscrepancyKind::LInfStar,
            every: if d == 2 { 1 } else { 10 },
            linf_budget: DEFAULT_BOX_BUDGET,
        }
    }

    pub fn every(mut self, every: usize) -> Self {
        self.every = every.max(1);
        self
    }
}

/// Value used to compare iterates: the root for L2 kinds, the exact value for L∞.
pub fn metric_value<T: Real>(
    set: &PointSet<T>,
    kind: DiscrepancyKind,
    linf_budget: u128,
) -> Result<T> {
    match kind {
        DiscrepancyKind::LInfStar if set.d() == 2 => linf_star_2d(set),
        DiscrepancyKind::LInfStar => {
            let opts = LinfOptions {
                budget: linf_budget,
                ..LinfOptions::default()
            };
            linf_star_exact_with(set, opts).map(|r| r.value)
        }
        kind => l2_value(set, kind).map(|v| v.root),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BestIterate<T> {
    #[serde(skip)]
    pub set: PointSet<T>,
    pub metric: DiscrepancyKind,
    pub value: T,
    pub iteration: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbortReason {
    /// Iteration whose step failed; `final_set` is that iteration's input.
    pub iteration: usize,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeReport<T> {
    pub kind: DiscrepancyKind,
    /// Smoothed loss of every iterate, starting with the input set.
    pub trajectory: Vec<T>,
    /// `(iteration, value)` of every evaluation of the tracked metric.
    pub tracked: Vec<(usize, T)>,
    #[serde(skip)]
    pub final_set: PointSet<T>,
    pub final_loss: T,
    pub best: Option<BestIterate<T>>,
    pub clamp_events: u64,
    pub wall_ms: f64,
    pub abort: Option<AbortReason>,
}

impl<T: Real> OptimizeReport<T> {
    pub fn steps_completed(&self) -> usize {
        self.trajectory.len() - 1
    }
}

/// Runs `cfg.steps` projected ADAM steps from `start`.
pub fn optimize<T: Real>(
    start: &PointSet<T>,
    kind: DiscrepancyKind,
    cfg: &AdamConfig<T>,
    track: Option<Tracking>,
) -> Result<OptimizeReport<T>> {
    if !kind.is_l2() {
        return Err(Error::KindUnsupported(kind));
    }
    cfg.validate()?;
    if let Some(tr) = track {
        if tr.metric == DiscrepancyKind::LInfStar && start.d() != 2 {
            let boxes = GridSlice::new(start).box_count();
            if boxes > tr.linf_budget {
                return Err(Error::BudgetExceeded {
                    estimated_boxes: boxes,
                    budget: tr.linf_budget,
                });
            }
        }
    }

    let clock = Instant::now();
    let mut state = AdamState::new(start.n() * start.d());
    let mut current = start.clone();
    let mut trajectory = Vec::with_capacity(cfg.steps + 1);
    let mut tracked = Vec::new();
    let mut best: Option<BestIterate<T>> = None;
    let mut clamp_events = 0;
    let mut abort = None;

    let observe = |set: &PointSet<T>,
                   iteration: usize,
                   tracked: &mut Vec<(usize, T)>,
                   best: &mut Option<BestIterate<T>>|
     -> Result<()> {
        let Some(tr) = track else { return Ok(()) };
        if tracked.last().map(|t| t.0) == Some(iteration) {
            return Ok(());
        }
        let value = metric_value(set, tr.metric, tr.linf_budget)?;
        tracked.push((iteration, value));
        if best.as_ref().is_none_or(|b| value < b.value) {
            *best = Some(BestIterate {
                set: set.clone(),
                metric: tr.metric,
                value,
                iteration,
            });
        }
        Ok(())
    };

    observe(&current, 0, &mut tracked, &mut best)?;
    for iteration in 0..cfg.steps {
        match adam_project_step(&current, &mut state, cfg, kind) {
            Ok(step) if step.loss.is_finite() => {
                trajectory.push(step.loss);
                clamp_events += step.clamp_events;
                current = step.set;
            }
            Ok(step) => {
                abort = Some(AbortReason {
                    iteration,
                    message: format!("non-finite loss {}", step.loss),
                });
                break;
            }
            Err(e @ Error::NonFiniteGradient { .. }) => {
                abort = Some(AbortReason {
                    iteration,
                    message: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e),
        }
        let done = iteration + 1;
        if let Some(tr) = track {
            if done % tr.every == 0 || done == cfg.steps {
                observe(&current, done, &mut tracked, &mut best)?;
            }
        }
    }

    // On abort, `current` is the input of the failed step.
    let final_loss = l2_loss_smoothed(&current, kind, cfg.smoothing())?;
    trajectory.push(final_loss);
    if abort.is_some() {
        observe(&current, trajectory.len() - 1, &mut tracked, &mut best)?;
    }

    Ok(OptimizeReport {
        kind,
        trajectory,
        tracked,
        final_set: current,
        final_loss,
        best,
        clamp_events,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        abort,
    })
}

/// Redraws `⌈fraction · n · d⌉` uniformly chosen coordinates.
pub fn random_restart<T: Real>(set: &PointSet<T>, fraction: f64, seed: u64) -> Result<PointSet<T>>
where
    Standard: Distribution<T>,
{
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "restart fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let slots = set.n() * set.d();
    let count = ((fraction * slots as f64).ceil() as usize).clamp(1, slots);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut coords = set.as_flat().to_vec();
    for idx in index::sample(&mut rng, slots, count) {
        coords[idx] = Standard.sample(&mut rng);
    }
    Ok(PointSet::from_flat_unchecked(set.n(), set.d(), coords))
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartRun<T> {
    pub run: usize,
    pub final_loss: T,
    /// Exact root of the optimized kind for the run's final set.
    pub final_root: T,
    pub best_tracked: Option<T>,
    pub trajectory: Vec<T>,
    pub tracked: Vec<(usize, T)>,
    pub abort: Option<AbortReason>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartReport<T> {
    pub runs: Vec<RestartRun<T>>,
    pub best_run: usize,
    /// Exact root of the optimized kind for `best_set`.
    pub best_root: T,
    #[serde(skip)]
    pub best_set: PointSet<T>,
}

/// Optimizes, then `restarts` times perturbs the last result with
/// [`random_restart`] and optimizes again. The kept set is the final set
/// with the lowest exact discrepancy of `kind`.
pub fn optimize_with_restarts<T: Real>(
    start: &PointSet<T>,
    kind: DiscrepancyKind,
    cfg: &AdamConfig<T>,
    track: Option<Tracking>,
    restarts: usize,
    fraction: f64,
    seed: u64,
) -> Result<RestartReport<T>>
where
    Standard: Distribution<T>,
{
    let mut runs = Vec::with_capacity(restarts + 1);
    let mut best: Option<(usize, T, PointSet<T>)> = None;
    let mut current = start.clone();
    for run in 0..=restarts {
        if run > 0 {
            current = random_restart(&current, fraction, seed.wrapping_add(run as u64))?;
        }
        let report = optimize(&current, kind, cfg, track)?;
        let final_root = l2_value(&report.final_set, kind)?.root;
        runs.push(RestartRun {
            run,
            final_loss: report.final_loss,
            final_root,
            best_tracked: report.best.as_ref().map(|b| b.value),
            trajectory: report.trajectory,
            tracked: report.tracked,
            abort: report.abort,
        });
        if best.as_ref().is_none_or(|b| final_root < b.1) {
            best = Some((run, final_root, report.final_set.clone()));
        }
        current = report.final_set;
    }
    let (best_run, best_root, best_set) = best.expect("at least one run");
    Ok(RestartReport {
        runs,
        best_run,
        best_root,
        best_set,
    })
}
