//! Point-set value type, discrepancy selector, and the text file format.
//!
//! The format is one point per line with coordinates separated by single
//! spaces (commas are accepted on input). Lines starting with `#` and blank
//! lines are skipped. Coordinates are written in shortest round-trip decimal
//! form, so a save/load cycle reproduces every binary64 value exactly.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `n` points in `[0,1]^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    n: usize,
    d: usize,
    coords: Vec<T>,
}

impl<T: Real> PointSet<T> {
    /// Validates a list of rows. Out-of-cube coordinates are rejected, not clamped.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?;
        let d = first.as_ref().len();
        if d == 0 {
            return Err(Error::EmptyInput);
        }
        let mut coords = Vec::with_capacity(rows.len() * d);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::RaggedInput {
                    row,
                    expected: d,
                    found: r.len(),
                });
            }
            coords.extend_from_slice(r);
        }
        Self::from_flat(rows.len(), d, coords)
    }

    /// Validates a row-major `n × d` buffer.
    pub fn from_flat(n: usize, d: usize, coords: Vec<T>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyInput);
        }
        if coords.len() != n * d {
            return Err(Error::RaggedInput {
                row: coords.len() / d,
                expected: d,
                found: coords.len() % d,
            });
        }
        for (idx, &c) in coords.iter().enumerate() {
            // NaN fails both comparisons and is rejected here as well.
            if !(c >= T::zero() && c <= T::one()) {
                return Err(Error::OutOfUnitCube {
                    point: idx / d,
                    axis: idx % d,
                    value: c.to_f64_lossless(),
                });
            }
        }
        Ok(Self { n, d, coords })
    }

    /// Skips validation; callers guarantee every coordinate is in `[0,1]`.
    pub(crate) fn from_flat_unchecked(n: usize, d: usize, coords: Vec<T>) -> Self {
        debug_assert_eq!(coords.len(), n * d);
        debug_assert!(coords.iter().all(|&c| c >= T::zero() && c <= T::one()));
        Self { n, d, coords }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> T {
        self.coords[i * self.d + k]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    /// Row-major coordinate buffer.
    pub fn as_flat(&self) -> &[T] {
        &self.coords
    }

    pub fn into_flat(self) -> Vec<T> {
        self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.points().map(<[T]>::to_vec).collect()
    }

    /// Converts to another scalar type, re-validating the result.
    pub fn cast<U: Real>(&self) -> Result<PointSet<U>> {
        let coords = self
            .coords
            .iter()
            .map(|&c| U::from_f64(c.to_f64_lossless()).unwrap_or_else(U::nan))
            .collect();
        PointSet::from_flat(self.n, self.d, coords)
    }

    /// Writes the set in the text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for p in self.points() {
            for (k, c) in p.iter().enumerate() {
                if k > 0 {
                    w.write_all(b" ")?;
                }
                write!(w, "{c}")?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<T>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_ascii_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<T>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("invalid number {tok:?}"),
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::RaggedInput {
                        row: rows.len(),
                        expected: first.len(),
                        found: row.len(),
                    });
                }
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

pub fn load_point_set<T: Real>(path: impl AsRef<Path>) -> Result<PointSet<T>> {
    let text = fs::read_to_string(path)?;
    PointSet::parse(&text)
}

pub fn save_point_set<T: Real>(set: &PointSet<T>, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    set.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Which discrepancy an evaluator, loss or tracked metric refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    L2Star,
    L2Periodic,
    L2Extreme,
    #[serde(rename = "linf-star")]
    LInfStar,
}

impl DiscrepancyKind {
    pub const ALL: [DiscrepancyKind; 4] = [
        DiscrepancyKind::L2Star,
        DiscrepancyKind::L2Periodic,
        DiscrepancyKind::L2Extreme,
        DiscrepancyKind::LInfStar,
    ];

    pub fn is_l2(self) -> bool {
        !matches!(self, DiscrepancyKind::LInfStar)
    }

    pub fn name(self) -> &'static str {
        match self {
            DiscrepancyKind::L2Star => "l2-star",
            DiscrepancyKind::L2Periodic => "l2-periodic",
            DiscrepancyKind::L2Extreme => "l2-extreme",
            DiscrepancyKind::LInfStar => "linf-star",
        }
    }
}

impl fmt::Display for DiscrepancyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscrepancyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        DiscrepancyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown discrepancy kind {s:?} (expected l2-star, l2-periodic, l2-extreme or linf-star)")
            })
    }
}
