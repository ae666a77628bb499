//! Starting sets for descent: lattice constructions, Sobol' prefixes and
//! seeded uniform random sets. Every generator is a pure function of its
//! arguments.

mod sobol;

use rand::distributions::{Distribution, Standard};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use sobol::{sobol_set, DirectionTable, SobolParams};

use crate::error::{Error, Result};
use crate::point_set::PointSet;
use crate::scalar::Real;

/// (1 + √5) / 2
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Identity of the generator behind [`random_set`], recorded in metadata.
pub const RNG_NAME: &str = "ChaCha20Rng (rand_chacha 0.3, seed_from_u64)";

/// `{(i/n, {α·i}) : i = 0..n-1}`.
pub fn kronecker_lattice<T: Real>(n: usize, alpha: f64) -> PointSet<T> {
    assert!(n >= 1, "kronecker_lattice needs n >= 1");
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        let first = i as f64 / n as f64;
        let second = (alpha * i as f64).rem_euclid(1.0);
        coords.push(T::lit(first));
        coords.push(T::lit(second));
    }
    PointSet::from_flat_unchecked(n, 2, coords)
}

/// Kronecker lattice with golden-ratio slope.
pub fn fibonacci_set<T: Real>(n: usize) -> PointSet<T> {
    kronecker_lattice(n, GOLDEN_RATIO)
}

/// Fibonacci number `F_k` with `F_1 = F_2 = 1`, if it fits in a `u64`.
pub fn fibonacci_number(k: u32) -> Option<u64> {
    if k == 0 {
        return Some(0);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..k {
        let next = a.checked_add(b)?;
        a = b;
        b = next;
    }
    Some(b)
}

/// Rank-1 lattice `{(i/F_k, (F_{k-1}·i mod F_k)/F_k)}` with `F_k` points.
pub fn fibonacci_integration_lattice<T: Real>(k: u32) -> Result<PointSet<T>> {
    if !(2..=92).contains(&k) {
        return Err(Error::IndexTooLarge(k));
    }
    let n = fibonacci_number(k).ok_or(Error::IndexTooLarge(k))?;
    let g = fibonacci_number(k - 1).ok_or(Error::IndexTooLarge(k))?;
    let count = usize::try_from(n).map_err(|_| Error::IndexTooLarge(k))?;
    let denom = n as f64;
    let mut coords = Vec::with_capacity(2 * count);
    for i in 0..n {
        let r = (u128::from(g) * u128::from(i) % u128::from(n)) as u64;
        coords.push(T::lit(i as f64 / denom));
        coords.push(T::lit(r as f64 / denom));
    }
    Ok(PointSet::from_flat_unchecked(count, 2, coords))
}

/// `n·d` i.i.d. uniform coordinates on `[0,1)`, drawn point by point.
pub fn random_set<T: Real>(n: usize, d: usize, seed: u64) -> PointSet<T>
where
    Standard: Distribution<T>,
{
    assert!(n >= 1 && d >= 1, "random_set needs n, d >= 1");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let coords = (0..n * d).map(|_| Standard.sample(&mut rng)).collect();
    PointSet::from_flat_unchecked(n, d, coords)
}
