//! Direct integration of the L2 discrepancy definitions.
//!
//! * star: `∫_{[0,1]^d} (|P ∩ [0,q)|/n - vol[0,q))² dq`
//! * periodic: `∫∫ (|P ∩ B(p,q)|/n - vol B(p,q))² dp dq` over all `p, q`,
//!   where `B` wraps around the torus on axes with `p_k > q_k`
//! * extreme: the same integrand over `p ≤ q` with ordinary boxes `[p, q)`
//!
//! The point coordinates cut each axis into cells on which every indicator
//! is constant and the box side length is a polynomial of degree one. The
//! integral over a product of cells is then
//! `c² Π m₀ - 2c Π m₁ + Π m₂` with `c` the point fraction and `m_r` the
//! per-axis moments `∫ L^r`, all available in closed form. This path shares
//! nothing with the pairwise closed forms and serves as their oracle.
//!
//! When the exact cell product exceeds the budget, a midpoint rule with
//! `resolution` nodes per integration variable is used instead (error
//! O(1/resolution), the integrand being discontinuous).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point_set::{DiscrepancyKind, PointSet};
use crate::scalar::Real;
use crate::sum::CompensatedSum;

/// Maximum number of product cells (or midpoint nodes times `n`) evaluated.
pub const QUADRATURE_BUDGET: u128 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    ExactCells,
    Midpoint { resolution: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub method: QuadratureMethod,
}

/// One cell of a single axis: which points its box side contains, and the
/// moments of the side length over the cell.
#[derive(Clone, Debug)]
struct AxisCell {
    contains: Vec<bool>,
    moments: [f64; 3],
}

fn breakpoints(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut b: Vec<f64> = values.chain([0.0, 1.0]).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Moments of `L = shift + q - p` over `p ∈ [a,b]`, `q ∈ [c,e]`.
fn rect_moments(a: f64, b: f64, c: f64, e: f64, shift: f64) -> [f64; 3] {
    let (wp, wq) = (b - a, e - c);
    let (p1, q1) = ((b * b - a * a) / 2.0, (e * e - c * c) / 2.0);
    let (p2, q2) = ((b.powi(3) - a.powi(3)) / 3.0, (e.powi(3) - c.powi(3)) / 3.0);
    let m0 = wp * wq;
    let diff1 = wp * q1 - wq * p1;
    let diff2 = wp * q2 - 2.0 * p1 * q1 + wq * p2;
    [
        m0,
        shift * m0 + diff1,
        shift * shift * m0 + 2.0 * shift * diff1 + diff2,
    ]
}

/// Moments of `L = shift + q - p` over a triangle in the `(p, q)` plane,
/// by the edge-midpoint rule (exact for quadratics).
fn triangle_moments(v: [(f64, f64); 3], shift: f64) -> [f64; 3] {
    let area =
        ((v[1].0 - v[0].0) * (v[2].1 - v[0].1) - (v[2].0 - v[0].0) * (v[1].1 - v[0].1)).abs() / 2.0;
    let mids = [
        ((v[0].0 + v[1].0) / 2.0, (v[0].1 + v[1].1) / 2.0),
        ((v[1].0 + v[2].0) / 2.0, (v[1].1 + v[2].1) / 2.0),
        ((v[0].0 + v[2].0) / 2.0, (v[0].1 + v[2].1) / 2.0),
    ];
    let mut m = [area, 0.0, 0.0];
    for (p, q) in mids {
        let l = shift + q - p;
        m[1] += area * l / 3.0;
        m[2] += area * l * l / 3.0;
    }
    m
}

fn axis_cells(xs: &[f64], kind: DiscrepancyKind) -> Vec<AxisCell> {
    let b = breakpoints(xs.iter().copied());
    let intervals: Vec<(f64, f64)> = b.windows(2).map(|w| (w[0], w[1])).collect();
    let mut cells = Vec::new();
    match kind {
        DiscrepancyKind::L2Star => {
            for &(a, e) in &intervals {
                // x < q for all q in (a, e) iff x <= a.
                let contains = xs.iter().map(|&x| x <= a).collect();
                let moments = [e - a, (e * e - a * a) / 2.0, (e.powi(3) - a.powi(3)) / 3.0];
                cells.push(AxisCell { contains, moments });
            }
        }
        DiscrepancyKind::L2Periodic | DiscrepancyKind::L2Extreme => {
            let wraps = kind == DiscrepancyKind::L2Periodic;
            for (pi, &(a, b)) in intervals.iter().enumerate() {
                for (qi, &(c, e)) in intervals.iter().enumerate() {
                    if pi < qi {
                        // p < q: box [p, q) holds x iff b <= x <= c.
                        let contains = xs.iter().map(|&x| b <= x && x <= c).collect();
                        cells.push(AxisCell {
                            contains,
                            moments: rect_moments(a, b, c, e, 0.0),
                        });
                    } else if pi > qi && wraps {
                        // p > q: box [p, 1) ∪ [0, q) holds x iff x >= b or x <= c.
                        let contains = xs.iter().map(|&x| x >= b || x <= c).collect();
                        cells.push(AxisCell {
                            contains,
                            moments: rect_moments(a, b, c, e, 1.0),
                        });
                    } else if pi == qi {
                        // Upper triangle p < q inside one interval: no point inside.
                        let upper = [(a, a), (a, b), (b, b)];
                        cells.push(AxisCell {
                            contains: vec![false; xs.len()],
                            moments: triangle_moments(upper, 0.0),
                        });
                        if wraps {
                            // Lower triangle wraps around and holds every point.
                            let lower = [(a, a), (b, a), (b, b)];
                            cells.push(AxisCell {
                                contains: vec![true; xs.len()],
                                moments: triangle_moments(lower, 1.0),
                            });
                        }
                    }
                }
            }
        }
        DiscrepancyKind::LInfStar => unreachable!(),
    }
    cells
}

fn exact_cells(
    axes: &[Vec<AxisCell>],
    n: usize,
    depth: usize,
    inside: &[bool],
    moments: [f64; 3],
    acc: &mut CompensatedSum<f64>,
) {
    if depth == axes.len() {
        let c = inside.iter().filter(|&&b| b).count() as f64 / n as f64;
        acc.add(c * c * moments[0] - 2.0 * c * moments[1] + moments[2]);
        return;
    }
    let mut next = vec![false; n];
    for cell in &axes[depth] {
        for (slot, (&a, &b)) in next.iter_mut().zip(inside.iter().zip(&cell.contains)) {
            *slot = a && b;
        }
        let m = [
            moments[0] * cell.moments[0],
            moments[1] * cell.moments[1],
            moments[2] * cell.moments[2],
        ];
        exact_cells(axes, n, depth + 1, &next, m, acc);
    }
}

fn midpoint(points: &[Vec<f64>], kind: DiscrepancyKind, m: usize) -> f64 {
    let n = points.len();
    let d = points[0].len();
    let per_axis = match kind {
        DiscrepancyKind::L2Star => 1,
        _ => 2,
    };
    let vars = per_axis * d;
    let h = 1.0 / m as f64;
    let node = |j: usize| (j as f64 + 0.5) * h;
    let mut idx = vec![0usize; vars];
    let mut acc = CompensatedSum::new();
    'outer: loop {
        let mut vol = 1.0;
        let mut feasible = true;
        let mut count = 0usize;
        for k in 0..d {
            let (p, q) = if per_axis == 1 {
                (0.0, node(idx[k]))
            } else {
                (node(idx[2 * k]), node(idx[2 * k + 1]))
            };
            if kind == DiscrepancyKind::L2Extreme && p > q {
                feasible = false;
                break;
            }
            vol *= if p <= q { q - p } else { 1.0 - p + q };
        }
        if feasible {
            for x in points {
                let inside = (0..d).all(|k| {
                    let (p, q) = if per_axis == 1 {
                        (0.0, node(idx[k]))
                    } else {
                        (node(idx[2 * k]), node(idx[2 * k + 1]))
                    };
                    if p <= q {
                        p <= x[k] && x[k] < q
                    } else {
                        x[k] >= p || x[k] < q
                    }
                });
                count += usize::from(inside);
            }
            let diff = count as f64 / n as f64 - vol;
            acc.add(diff * diff);
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < m {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    acc.value() * h.powi(vars as i32)
}

/// Squared L2 discrepancy of `kind` computed from its defining integral.
pub fn quadrature_oracle<T: Real>(
    set: &PointSet<T>,
    kind: DiscrepancyKind,
    resolution: usize,
) -> Result<Quadrature> {
    if !kind.is_l2() {
        return Err(Error::KindUnsupported(kind));
    }
    let points: Vec<Vec<f64>> = set
        .points()
        .map(|p| p.iter().map(|c| c.to_f64_lossless()).collect())
        .collect();
    let (n, d) = (set.n(), set.d());

    let axes: Vec<Vec<AxisCell>> = (0..d)
        .map(|k| {
            let xs: Vec<f64> = points.iter().map(|p| p[k]).collect();
            axis_cells(&xs, kind)
        })
        .collect();
    let exact_cost = axes
        .iter()
        .try_fold(n as u128, |acc, a| acc.checked_mul(a.len() as u128))
        .unwrap_or(u128::MAX);
    if exact_cost <= QUADRATURE_BUDGET {
        let mut acc = CompensatedSum::new();
        exact_cells(&axes, n, 0, &vec![true; n], [1.0; 3], &mut acc);
        return Ok(Quadrature {
            value: acc.value(),
            method: QuadratureMethod::ExactCells,
        });
    }

    let vars = if kind == DiscrepancyKind::L2Star {
        d
    } else {
        2 * d
    };
    let m = resolution.max(1);
    let mid_cost = (m as u128)
        .checked_pow(vars as u32)
        .and_then(|c| c.checked_mul(n as u128))
        .unwrap_or(u128::MAX);
    if mid_cost > QUADRATURE_BUDGET {
        return Err(Error::TooExpensive {
            cells: exact_cost.min(mid_cost),
            budget: QUADRATURE_BUDGET,
        });
    }
    Ok(Quadrature {
        value: midpoint(&points, kind, m),
        method: QuadratureMethod::Midpoint { resolution: m },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(xs: &[f64]) -> PointSet<f64> {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_point_star_is_one_twelfth() {
        let q = quadrature_oracle(&one_d(&[0.5]), DiscrepancyKind::L2Star, 0).unwrap();
        assert_eq!(q.method, QuadratureMethod::ExactCells);
        assert!((q.value - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn two_points_star_by_hand() {
        // Integrand is q² on [0,1/4), (1/2-q)² on [1/4,3/4), (1-q)² on [3/4,1].
        let expected =
            (0.25f64.powi(3) / 3.0) + 2.0 * (0.25f64.powi(3) / 3.0) + 0.25f64.powi(3) / 3.0;
        let q = quadrature_oracle(&one_d(&[0.25, 0.75]), DiscrepancyKind::L2Star, 0).unwrap();
        assert!((q.value - expected).abs() < 1e-16);
    }

    #[test]
    fn single_point_periodic_is_one_sixth() {
        for x in [0.0, 0.3, 1.0] {
            let q = quadrature_oracle(&one_d(&[x]), DiscrepancyKind::L2Periodic, 0).unwrap();
            assert!((q.value - 1.0 / 6.0).abs() < 1e-15, "x = {x}: {}", q.value);
        }
    }

    #[test]
    fn single_point_extreme_middle() {
        let q = quadrature_oracle(&one_d(&[0.5]), DiscrepancyKind::L2Extreme, 0).unwrap();
        assert!((q.value - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn midpoint_fallback_converges() {
        let p = PointSet::from_rows(&[[0.2, 0.4, 0.6], [0.7, 0.1, 0.9]]).unwrap();
        let exact = quadrature_oracle(&p, DiscrepancyKind::L2Star, 0)
            .unwrap()
            .value;
        let pts = p.to_rows();
        let coarse = midpoint(&pts, DiscrepancyKind::L2Star, 40);
        let fine = midpoint(&pts, DiscrepancyKind::L2Star, 160);
        assert!((fine - exact).abs() < (coarse - exact).abs() + 1e-12);
        assert!((fine - exact).abs() < 2e-2 * exact);
    }

    #[test]
    fn rejects_linf_and_oversized_requests() {
        let p = one_d(&[0.5]);
        assert!(quadrature_oracle(&p, DiscrepancyKind::LInfStar, 10).is_err());
        let big = crate::generators::random_set::<f64>(40, 4, 1);
        assert!(matches!(
            quadrature_oracle(&big, DiscrepancyKind::L2Periodic, 2000),
            Err(Error::TooExpensive { .. })
        ));
    }
}
