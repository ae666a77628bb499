//! Compensated summation.
//!
//! Double sums are reduced row by row with a Neumaier accumulator and the
//! row totals are then combined along a fixed binary tree. The tree shape
//! depends only on the number of rows, so the result is bitwise identical
//! for any worker count.

use crate::scalar::Real;

/// Neumaier variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

const LEAF: usize = 32;

/// Pairwise sum with compensated leaves.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    if values.len() <= LEAF {
        return values
            .iter()
            .copied()
            .collect::<CompensatedSum<T>>()
            .value();
    }
    let mid = values.len() / 2;
    let (lo, hi) = values.split_at(mid);
    let mut acc = CompensatedSum::new();
    acc.add(pairwise_sum(lo));
    acc.add(pairwise_sum(hi));
    acc.value()
}
