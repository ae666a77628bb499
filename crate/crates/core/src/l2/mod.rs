//! Closed-form L2 discrepancies and their smoothed, differentiable losses.
//!
//! All three measures share the shape
//!
//! ```text
//! D²(P) = C_d + (w/n) Σ_i Π_k s(x_ik) + (1/n²) Σ_i Σ_j Π_k h(x_ik, x_jk)
//! ```
//!
//! | kind     | C_d      | w         | s(x)        | h(a, b)                   |
//! |----------|----------|-----------|-------------|---------------------------|
//! | star     | 3^-d     | -2^(1-d)  | 1 - x²      | 1 - max(a, b)             |
//! | periodic | -3^-d    | 0         | -           | 1/2 - abs(a - b) + (a-b)² |
//! | extreme  | 12^-d    | -2        | x(1 - x)/2  | min(a, b) (1 - max(a, b)) |
//!
//! The smoothed loss replaces `max`, `min` and `abs` with [`smax`], [`smin`]
//! and [`sabs`]. Because `h` is symmetric, the derivative with respect to
//! `x_ik` is `(w/n) s'(x_ik) Π_{l≠k} s(x_il) + (2/n²) Σ_j ∂₁h(x_ik, x_jk) Π_{l≠k} h(x_il, x_jl)`,
//! where the `j = i` term uses `2 ∂₁h(x, x) = d/dx h(x, x)`.
//!
//! Row sums use [`CompensatedSum`]; rows are combined by [`pairwise_sum`].
//! Rows are evaluated in parallel for larger sets without changing the
//! reduction order.

mod quadrature;

use rayon::prelude::*;
use serde::Serialize;

pub use quadrature::{quadrature_oracle, Quadrature, QuadratureMethod, QUADRATURE_BUDGET};

use crate::error::{Error, Result};
use crate::point_set::{DiscrepancyKind, PointSet};
use crate::scalar::{from_usize, Real};
use crate::sum::{pairwise_sum, CompensatedSum};

const PARALLEL_MIN_ROWS: usize = 64;

/// τ-softmax: `(a + b + sqrt((a - b)² + τ)) / 2`.
#[inline]
pub fn smax<T: Real>(a: T, b: T, tau: T) -> T {
    let half = T::lit(0.5);
    let diff = a - b;
    half * (a + b + (diff * diff + tau).sqrt())
}

/// τ-softmin: `(a + b - sqrt((a - b)² + τ)) / 2`.
#[inline]
pub fn smin<T: Real>(a: T, b: T, tau: T) -> T {
    let half = T::lit(0.5);
    let diff = a - b;
    half * (a + b - (diff * diff + tau).sqrt())
}

/// Smoothed absolute value `sqrt(x² + τ)`.
#[inline]
pub fn sabs<T: Real>(x: T, tau: T) -> T {
    (x * x + tau).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmoothingParams<T> {
    pub tau: T,
}

impl<T: Real> SmoothingParams<T> {
    pub fn new(tau: T) -> Result<Self> {
        if tau > T::zero() && tau.is_finite() {
            Ok(Self { tau })
        } else {
            Err(Error::InvalidConfig(format!(
                "tau must be positive and finite, got {tau}"
            )))
        }
    }
}

impl<T: Real> Default for SmoothingParams<T> {
    fn default() -> Self {
        Self { tau: T::lit(1e-15) }
    }
}

/// A squared discrepancy and its square root. Reported numbers use `root`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct L2Value<T> {
    pub squared: T,
    pub root: T,
}

impl<T: Real> L2Value<T> {
    pub fn from_squared(squared: T) -> Self {
        Self {
            squared,
            root: squared.max(T::zero()).sqrt(),
        }
    }
}

/// Per-kind factors of the pairwise closed form. `tau = None` is the exact form.
#[derive(Clone, Copy, Debug)]
struct Terms<T> {
    kind: DiscrepancyKind,
    tau: Option<T>,
}

impl<T: Real> Terms<T> {
    fn new(kind: DiscrepancyKind, tau: Option<T>) -> Result<Self> {
        if kind.is_l2() {
            Ok(Self { kind, tau })
        } else {
            Err(Error::KindUnsupported(kind))
        }
    }

    fn constant(&self, d: usize) -> T {
        let d = d as i32;
        match self.kind {
            DiscrepancyKind::L2Star => T::lit(3.0).powi(-d),
            DiscrepancyKind::L2Periodic => -T::lit(3.0).powi(-d),
            DiscrepancyKind::L2Extreme => T::lit(12.0).powi(-d),
            DiscrepancyKind::LInfStar => unreachable!(),
        }
    }

    fn single_weight(&self, d: usize) -> T {
        match self.kind {
            DiscrepancyKind::L2Star => -T::lit(2.0).powi(1 - d as i32),
            DiscrepancyKind::L2Periodic => T::zero(),
            DiscrepancyKind::L2Extreme => -T::lit(2.0),
            DiscrepancyKind::LInfStar => unreachable!(),
        }
    }

    #[inline]
    fn single(&self, x: T) -> T {
        match self.kind {
            DiscrepancyKind::L2Star => T::one() - x * x,
            DiscrepancyKind::L2Extreme => x * (T::one() - x) * T::lit(0.5),
            _ => T::zero(),
        }
    }

    #[inline]
    fn single_deriv(&self, x: T) -> T {
        match self.kind {
            DiscrepancyKind::L2Star => -(x + x),
            DiscrepancyKind::L2Extreme => (T::one() - (x + x)) * T::lit(0.5),
            _ => T::zero(),
        }
    }

    #[inline]
    fn pair(&self, a: T, b: T) -> T {
        let one = T::one();
        match (self.kind, self.tau) {
            (DiscrepancyKind::L2Star, None) => one - a.max(b),
            (DiscrepancyKind::L2Star, Some(tau)) => one - smax(a, b, tau),
            (DiscrepancyKind::L2Periodic, tau) => {
                let diff = a - b;
                let abs = match tau {
                    None => diff.abs(),
                    Some(tau) => sabs(diff, tau),
                };
                T::lit(0.5) - abs + diff * diff
            }
            (DiscrepancyKind::L2Extreme, None) => a.min(b) * (one - a.max(b)),
            (DiscrepancyKind::L2Extreme, Some(tau)) => smin(a, b, tau) * (one - smax(a, b, tau)),
            (DiscrepancyKind::LInfStar, _) => unreachable!(),
        }
    }

    /// `(h(a, b), ∂h/∂a)` for the smoothed form.
    #[inline]
    fn pair_with_deriv(&self, a: T, b: T, tau: T) -> (T, T) {
        let one = T::one();
        let half = T::lit(0.5);
        let diff = a - b;
        let radical = (diff * diff + tau).sqrt();
        let slope = diff / radical;
        match self.kind {
            DiscrepancyKind::L2Star => {
                let mx = half * (a + b + radical);
                (one - mx, -half * (one + slope))
            }
            DiscrepancyKind::L2Periodic => (half - radical + diff * diff, -slope + (diff + diff)),
            DiscrepancyKind::L2Extreme => {
                let mx = half * (a + b + radical);
                let mn = half * (a + b - radical);
                let value = mn * (one - mx);
                let deriv = half * (one - slope) * (one - mx) - mn * half * (one + slope);
                (value, deriv)
            }
            DiscrepancyKind::LInfStar => unreachable!(),
        }
    }
}

fn rows<T: Real, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    if n >= PARALLEL_MIN_ROWS {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

fn evaluate<T: Real>(set: &PointSet<T>, terms: &Terms<T>) -> T {
    let (n, d) = (set.n(), set.d());
    let nf: T = from_usize(n);

    let single = if terms.single_weight(d) == T::zero() {
        T::zero()
    } else {
        let products: Vec<T> = set
            .points()
            .map(|p| p.iter().fold(T::one(), |acc, &x| acc * terms.single(x)))
            .collect();
        pairwise_sum(&products)
    };

    let row_sums = rows(n, |i| {
        let xi = set.point(i);
        let mut acc = CompensatedSum::new();
        for xj in set.points() {
            let mut prod = T::one();
            for k in 0..d {
                prod = prod * terms.pair(xi[k], xj[k]);
            }
            acc.add(prod);
        }
        acc.value()
    });
    let pair = pairwise_sum(&row_sums);

    let mut total = CompensatedSum::new();
    total.add(terms.constant(d));
    total.add(terms.single_weight(d) * single / nf);
    total.add(pair / (nf * nf));
    total.value()
}

/// Squared L2 star discrepancy by the Warnock closed form.
pub fn l2_star_sq<T: Real>(set: &PointSet<T>) -> L2Value<T> {
    let terms = Terms::new(DiscrepancyKind::L2Star, None).expect("l2 kind");
    L2Value::from_squared(evaluate(set, &terms))
}

/// Squared L2 periodic discrepancy.
pub fn l2_periodic_sq<T: Real>(set: &PointSet<T>) -> L2Value<T> {
    let terms = Terms::new(DiscrepancyKind::L2Periodic, None).expect("l2 kind");
    L2Value::from_squared(evaluate(set, &terms))
}

/// Squared L2 extreme (unanchored) discrepancy.
pub fn l2_extreme_sq<T: Real>(set: &PointSet<T>) -> L2Value<T> {
    let terms = Terms::new(DiscrepancyKind::L2Extreme, None).expect("l2 kind");
    L2Value::from_squared(evaluate(set, &terms))
}

/// Exact squared value for any L2 kind.
pub fn l2_value<T: Real>(set: &PointSet<T>, kind: DiscrepancyKind) -> Result<L2Value<T>> {
    let terms = Terms::new(kind, None)?;
    Ok(L2Value::from_squared(evaluate(set, &terms)))
}

/// Squared discrepancy with `max`, `min` and `abs` smoothed.
pub fn l2_loss_smoothed<T: Real>(
    set: &PointSet<T>,
    kind: DiscrepancyKind,
    smoothing: SmoothingParams<T>,
) -> Result<T> {
    let terms = Terms::new(kind, Some(smoothing.tau))?;
    Ok(evaluate(set, &terms))
}

/// Gradient of [`l2_loss_smoothed`], row-major `n × d`.
pub fn l2_grad<T: Real>(
    set: &PointSet<T>,
    kind: DiscrepancyKind,
    smoothing: SmoothingParams<T>,
) -> Result<Vec<T>> {
    l2_loss_and_grad(set, kind, smoothing).map(|(_, g)| g)
}

/// Smoothed loss and its gradient in one pass over the pairs.
///
/// The loss is bitwise equal to [`l2_loss_smoothed`] on the same input.
pub fn l2_loss_and_grad<T: Real>(
    set: &PointSet<T>,
    kind: DiscrepancyKind,
    smoothing: SmoothingParams<T>,
) -> Result<(T, Vec<T>)> {
    let terms = Terms::new(kind, Some(smoothing.tau))?;
    let tau = smoothing.tau;
    let (n, d) = (set.n(), set.d());
    let nf: T = from_usize(n);
    let weight = terms.single_weight(d);
    let single_scale = weight / nf;
    let pair_scale = T::lit(2.0) / (nf * nf);

    // Each row yields its pair-sum contribution to the loss, the single-term
    // product, and its d gradient entries.
    let per_row = |i: usize| -> (T, T, Vec<T>) {
        let xi = set.point(i);
        let mut h = vec![T::zero(); d];
        let mut dh = vec![T::zero(); d];
        let mut prefix = vec![T::one(); d + 1];
        let mut suffix = vec![T::one(); d + 1];
        let mut grad_acc = vec![CompensatedSum::new(); d];
        let mut loss_acc = CompensatedSum::new();

        for xj in set.points() {
            for k in 0..d {
                let (v, dv) = terms.pair_with_deriv(xi[k], xj[k], tau);
                h[k] = v;
                dh[k] = dv;
            }
            for k in 0..d {
                prefix[k + 1] = prefix[k] * h[k];
            }
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1] * h[k];
            }
            loss_acc.add(prefix[d]);
            for k in 0..d {
                grad_acc[k].add(dh[k] * (prefix[k] * suffix[k + 1]));
            }
        }

        let mut grad: Vec<T> = grad_acc.iter().map(|a| pair_scale * a.value()).collect();
        let mut single_prod = T::zero();
        if weight != T::zero() {
            let s: Vec<T> = xi.iter().map(|&x| terms.single(x)).collect();
            for k in 0..d {
                prefix[k + 1] = prefix[k] * s[k];
            }
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1] * s[k];
            }
            single_prod = s.iter().fold(T::one(), |acc, &v| acc * v);
            for k in 0..d {
                grad[k] = grad[k]
                    + single_scale * terms.single_deriv(xi[k]) * (prefix[k] * suffix[k + 1]);
            }
        }
        (loss_acc.value(), single_prod, grad)
    };

    let results: Vec<(T, T, Vec<T>)> = if n >= PARALLEL_MIN_ROWS {
        (0..n).into_par_iter().map(per_row).collect()
    } else {
        (0..n).map(per_row).collect()
    };

    let row_sums: Vec<T> = results.iter().map(|r| r.0).collect();
    let singles: Vec<T> = results.iter().map(|r| r.1).collect();
    let mut grad = Vec::with_capacity(n * d);
    for r in &results {
        grad.extend_from_slice(&r.2);
    }

    let single = if weight == T::zero() {
        T::zero()
    } else {
        pairwise_sum(&singles)
    };
    let mut total = CompensatedSum::new();
    total.add(terms.constant(d));
    total.add(weight * single / nf);
    total.add(pairwise_sum(&row_sums) / (nf * nf));
    Ok((total.value(), grad))
}
