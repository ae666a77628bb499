//! Exact L∞ star discrepancy.
//!
//! The supremum over anchored boxes `[0, q)` is attained at (or approached
//! towards) corners of the critical grid `Γ̄ = Π_k ({x_ik} ∪ {1})`. At a grid
//! corner `q` two local errors are candidates: `vol(q) - A_open(q)/n`, with
//! `A_open` counting points strictly below `q` in every coordinate, and
//! `A_closed(q)/n - vol(q)`, counting points `≤ q`, the limit of boxes
//! approaching `q` from above. The discrepancy is the maximum of both over
//! the grid.
//!
//! [`linf_star_exact`] enumerates the grid axis by axis with branch and
//! bound; [`linf_star_2d`] is an `O(n²)` sweep for planar sets. Both form
//! every box volume as `((q_1 · q_2) · …) · q_d` in axis order, so they agree
//! bitwise in two dimensions.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point_set::PointSet;
use crate::scalar::{from_usize, Real};

/// Default cap on `Π_k |Γ̄_k|`.
pub const DEFAULT_BOX_BUDGET: u128 = 1 << 31;

/// Per-axis sorted unique coordinates (with 1 appended) and point ranks.
#[derive(Clone, Debug)]
pub struct GridSlice<T> {
    /// `values[k]` is strictly increasing and ends with exactly 1.
    pub values: Vec<Vec<T>>,
    /// `ranks[i][k]` is the index of `x_ik` in `values[k]`.
    pub ranks: Vec<Vec<u32>>,
}

impl<T: Real> GridSlice<T> {
    pub fn new(set: &PointSet<T>) -> Self {
        let (n, d) = (set.n(), set.d());
        let mut values = Vec::with_capacity(d);
        let mut ranks = vec![vec![0u32; d]; n];
        for k in 0..d {
            let mut v: Vec<T> = set.points().map(|p| p[k]).chain([T::one()]).collect();
            v.sort_by(|a, b| a.partial_cmp(b).expect("coordinates are not NaN"));
            v.dedup();
            for (i, p) in set.points().enumerate() {
                let r = v.partition_point(|&g| g < p[k]);
                ranks[i][k] = r as u32;
            }
            values.push(v);
        }
        Self { values, ranks }
    }

    /// `Π_k |Γ̄_k|`, saturating.
    pub fn box_count(&self) -> u128 {
        self.values
            .iter()
            .try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128))
            .unwrap_or(u128::MAX)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinfOptions {
    pub budget: u128,
    pub pruning: bool,
    pub parallel: bool,
}

impl Default for LinfOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BOX_BUDGET,
            pruning: true,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinfReport<T> {
    pub value: T,
    /// Grid corners whose local errors were evaluated.
    pub boxes_visited: u64,
    pub boxes_total: u128,
    pub pruned_fraction: f64,
}

/// Monotone shared maximum over non-negative values.
struct Incumbent(AtomicU64);

impl Incumbent {
    fn new(v: f64) -> Self {
        Self(AtomicU64::new(v.to_bits()))
    }

    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    fn raise(&self, v: f64) {
        // Non-negative doubles order like their bit patterns.
        self.0.fetch_max(v.max(0.0).to_bits(), Ordering::Relaxed);
    }
}

struct Search<'a, T> {
    n: usize,
    nf: T,
    values: Vec<&'a [T]>,
    /// Axis order: `axes[level]` is the original axis enumerated at `level`.
    axes: Vec<usize>,
    ranks: &'a [Vec<u32>],
    /// Smallest grid value per original axis.
    grid_min: Vec<T>,
    pruning: bool,
    incumbent: &'a Incumbent,
}

#[derive(Default)]
struct Tally {
    visited: u64,
}

impl<T: Real> Search<'_, T> {
    /// Left-to-right product over the original axes, with `fill` standing in
    /// for axes not fixed yet. Every volume is formed in this association, so
    /// bounds built from it stay bounds after rounding.
    fn canonical_volume(&self, chosen: &[Option<T>], fill: impl Fn(usize) -> T) -> T {
        chosen
            .iter()
            .enumerate()
            .fold(T::one(), |v, (k, c)| v * c.unwrap_or_else(|| fill(k)))
    }

    /// `open`/`closed` hold the points that satisfy the strict/non-strict
    /// constraint on every level before `level`; `chosen[k]` is the grid
    /// value fixed on original axis `k`.
    fn descend(
        &self,
        level: usize,
        chosen: &mut [Option<T>],
        open: &[u32],
        closed: &[u32],
        best: &mut T,
        tally: &mut Tally,
    ) {
        let depth = self.axes.len();
        if self.pruning {
            let inc = self.incumbent.get().max(best.to_f64_lossless());
            // Unfixed factors lie between the axis minimum and 1.
            let upper_open = self.canonical_volume(chosen, |_| T::one());
            let min_vol = self.canonical_volume(chosen, |k| self.grid_min[k]);
            let upper_closed = from_usize::<T>(closed.len()) / self.nf - min_vol;
            if upper_open.to_f64_lossless() <= inc && upper_closed.to_f64_lossless() <= inc {
                return;
            }
        }
        let axis = self.axes[level];
        let grid = self.values[level];
        if level + 1 == depth {
            self.sweep_last(axis, grid, chosen, open, closed, best, tally);
            return;
        }
        let mut by_rank_open: Vec<Vec<u32>> = vec![Vec::new(); grid.len()];
        for &i in open {
            by_rank_open[self.ranks[i as usize][axis] as usize].push(i);
        }
        let mut by_rank_closed: Vec<Vec<u32>> = vec![Vec::new(); grid.len()];
        for &i in closed {
            by_rank_closed[self.ranks[i as usize][axis] as usize].push(i);
        }
        // Grow the candidate lists as q on this axis increases.
        let mut next_open: Vec<u32> = Vec::with_capacity(open.len());
        let mut next_closed: Vec<u32> = Vec::with_capacity(closed.len());
        for (r, &q) in grid.iter().enumerate() {
            next_closed.extend_from_slice(&by_rank_closed[r]);
            chosen[axis] = Some(q);
            self.descend(level + 1, chosen, &next_open, &next_closed, best, tally);
            next_open.extend_from_slice(&by_rank_open[r]);
        }
        chosen[axis] = None;
    }

    #[allow(clippy::too_many_arguments)]
    fn sweep_last(
        &self,
        axis: usize,
        grid: &[T],
        chosen: &[Option<T>],
        open: &[u32],
        closed: &[u32],
        best: &mut T,
        tally: &mut Tally,
    ) {
        let mut open_counts = vec![0u32; grid.len()];
        for &i in open {
            open_counts[self.ranks[i as usize][axis] as usize] += 1;
        }
        let mut closed_counts = vec![0u32; grid.len()];
        for &i in closed {
            closed_counts[self.ranks[i as usize][axis] as usize] += 1;
        }
        let head = chosen[..axis]
            .iter()
            .fold(T::one(), |v, c| v * c.expect("fixed axis"));
        let tail: Vec<T> = chosen[axis + 1..]
            .iter()
            .map(|c| c.expect("fixed axis"))
            .collect();
        let (mut below, mut upto) = (0usize, 0usize);
        for (r, &q) in grid.iter().enumerate() {
            upto += closed_counts[r] as usize;
            let v = tail.iter().fold(head * q, |v, &c| v * c);
            let under = v - from_usize::<T>(below) / self.nf;
            let over = from_usize::<T>(upto) / self.nf - v;
            *best = best.max(under).max(over);
            below += open_counts[r] as usize;
        }
        tally.visited += grid.len() as u64;
        self.incumbent.raise(best.to_f64_lossless());
    }
}

/// Exact L∞ star discrepancy with the default options.
pub fn linf_star_exact<T: Real>(set: &PointSet<T>) -> Result<T> {
    linf_star_exact_with(set, LinfOptions::default()).map(|r| r.value)
}

/// Exact L∞ star discrepancy by pruned enumeration of the critical grid.
pub fn linf_star_exact_with<T: Real>(
    set: &PointSet<T>,
    opts: LinfOptions,
) -> Result<LinfReport<T>> {
    let grid = GridSlice::new(set);
    let total = grid.box_count();
    if total > opts.budget {
        return Err(Error::BudgetExceeded {
            estimated_boxes: total,
            budget: opts.budget,
        });
    }
    let d = set.d();
    let mut axes: Vec<usize> = (0..d).collect();
    // Outermost first by decreasing grid size; ties keep axis order.
    axes.sort_by_key(|&k| std::cmp::Reverse(grid.values[k].len()));
    let values: Vec<&[T]> = axes.iter().map(|&k| grid.values[k].as_slice()).collect();
    let incumbent = Incumbent::new(0.0);
    let search = Search {
        n: set.n(),
        nf: from_usize(set.n()),
        values,
        axes,
        ranks: &grid.ranks,
        grid_min: grid.values.iter().map(|v| v[0]).collect(),
        pruning: opts.pruning,
        incumbent: &incumbent,
    };
    let all: Vec<u32> = (0..search.n as u32).collect();

    let (value, visited) = if d == 1 || !opts.parallel {
        let mut best = T::zero();
        let mut tally = Tally::default();
        let mut chosen = vec![None; d];
        search.descend(0, &mut chosen, &all, &all, &mut best, &mut tally);
        (best, tally.visited)
    } else {
        // Split on the outermost axis; each task rebuilds its candidate lists.
        let axis = search.axes[0];
        let outer = search.values[0];
        let results: Vec<(T, u64)> = outer
            .par_iter()
            .enumerate()
            .map(|(r, &q)| {
                let rank_of = |i: &u32| grid.ranks[*i as usize][axis] as usize;
                let open: Vec<u32> = all.iter().copied().filter(|i| rank_of(i) < r).collect();
                let closed: Vec<u32> = all.iter().copied().filter(|i| rank_of(i) <= r).collect();
                let mut best = T::zero();
                let mut tally = Tally::default();
                let mut chosen = vec![None; d];
                chosen[axis] = Some(q);
                search.descend(1, &mut chosen, &open, &closed, &mut best, &mut tally);
                (best, tally.visited)
            })
            .collect();
        results
            .into_iter()
            .fold((T::zero(), 0u64), |(b, v), (rb, rv)| (b.max(rb), v + rv))
    };
    let pruned_fraction = if total == 0 {
        0.0
    } else {
        1.0 - visited as f64 / total as f64
    };
    Ok(LinfReport {
        value,
        boxes_visited: visited,
        boxes_total: total,
        pruned_fraction,
    })
}

/// `O(n²)` planar sweep: for each x-grid value, walk the y-grid while
/// keeping per-rank counts of the points admitted so far.
pub fn linf_star_2d<T: Real>(set: &PointSet<T>) -> Result<T> {
    if set.d() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: set.d(),
        });
    }
    let grid = GridSlice::new(set);
    let nf: T = from_usize(set.n());
    let (xs, ys) = (&grid.values[0], &grid.values[1]);
    let mut by_x: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
    for (i, r) in grid.ranks.iter().enumerate() {
        by_x[r[0] as usize].push(i);
    }
    let mut open_counts = vec![0u32; ys.len()];
    let mut closed_counts = vec![0u32; ys.len()];
    let mut best = T::zero();
    for (rx, &qx) in xs.iter().enumerate() {
        for &i in &by_x[rx] {
            closed_counts[grid.ranks[i][1] as usize] += 1;
        }
        let (mut below, mut upto) = (0u32, 0u32);
        for (ry, &qy) in ys.iter().enumerate() {
            upto += closed_counts[ry];
            let v = qx * qy;
            let under = v - from_usize::<T>(below as usize) / nf;
            let over = from_usize::<T>(upto as usize) / nf - v;
            best = best.max(under).max(over);
            below += open_counts[ry];
        }
        for &i in &by_x[rx] {
            open_counts[grid.ranks[i][1] as usize] += 1;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_line() {
        for x in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let p = PointSet::from_rows(&[[x]]).unwrap();
            let v = linf_star_exact(&p).unwrap();
            assert_eq!(v, f64::max(x, 1.0 - x), "x = {x}");
        }
    }

    #[test]
    fn two_point_plane_by_hand() {
        // Grid x ∈ {0.25, 0.5, 1}, y ∈ {0.5, 0.75, 1}. The largest error is
        // the closed box [0, 0.5] × [0, 0.75] holding both points:
        // 1 - 3/8 = 5/8.
        let p = PointSet::from_rows(&[[0.5, 0.5], [0.25, 0.75]]).unwrap();
        assert_eq!(linf_star_exact(&p).unwrap(), 0.625);
        assert_eq!(linf_star_2d(&p).unwrap(), 0.625);
    }

    #[test]
    fn grid_slice_invariants() {
        let p = PointSet::from_rows(&[[0.5, 1.0], [0.5, 0.25], [0.0, 0.25]]).unwrap();
        let g = GridSlice::new(&p);
        assert_eq!(g.values[0], vec![0.0, 0.5, 1.0]);
        assert_eq!(g.values[1], vec![0.25, 1.0]);
        assert_eq!(g.ranks[0], vec![1, 1]);
        assert_eq!(g.box_count(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let p = crate::generators::random_set::<f64>(30, 3, 1);
        let opts = LinfOptions {
            budget: 1000,
            ..LinfOptions::default()
        };
        assert!(matches!(
            linf_star_exact_with(&p, opts),
            Err(Error::BudgetExceeded {
                estimated_boxes: 29791,
                budget: 1000
            })
        ));
    }

    #[test]
    fn planar_sweep_needs_two_dimensions() {
        let p = PointSet::from_rows(&[[0.1, 0.2, 0.3]]).unwrap();
        assert!(matches!(
            linf_star_2d(&p),
            Err(Error::WrongDimension {
                expected: 2,
                found: 3
            })
        ));
    }
}
