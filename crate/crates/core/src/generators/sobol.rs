//! Unscrambled Sobol' points in Gray-code order.
//!
//! Direction numbers come from a table in the Joe–Kuo text format
//! (`d s a m_1 .. m_s`, one dimension per line, header line first). The
//! first dimension is the van der Corput sequence and has no table row.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::point_set::PointSet;
use crate::scalar::Real;

const BITS: usize = 32;

static EMBEDDED_TEXT: &str = include_str!("new-joe-kuo-6.1024.txt");
static EMBEDDED: OnceLock<DirectionTable> = OnceLock::new();

// Bratley–Fox initial values (the GSL `sobol` generator), dimensions 2..=5.
static BRATLEY_FOX_TEXT: &str = "d s a m_i\n2 1 0 1\n3 2 1 1 1\n4 3 1 1 3 7\n5 3 2 1 1 5\n";
static BRATLEY_FOX: OnceLock<DirectionTable> = OnceLock::new();

/// Primitive polynomial and initial direction numbers for one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Primitive {
    degree: u32,
    coeffs: u32,
    initial: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct DirectionTable {
    id: String,
    rows: Vec<Primitive>,
}

impl fmt::Debug for DirectionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectionTable")
            .field("id", &self.id)
            .field("max_dimension", &self.max_dimension())
            .finish()
    }
}

impl DirectionTable {
    /// Joe–Kuo `new-joe-kuo-6.21201`, first 1024 dimensions, embedded.
    pub fn joe_kuo() -> &'static DirectionTable {
        EMBEDDED.get_or_init(|| {
            DirectionTable::parse("new-joe-kuo-6.21201[1..=1024]", EMBEDDED_TEXT)
                .expect("embedded direction table is well formed")
        })
    }

    /// Bratley–Fox initial values for up to five dimensions, as used by GSL.
    /// Dimensions 1 and 2 coincide with [`DirectionTable::joe_kuo`].
    pub fn bratley_fox() -> &'static DirectionTable {
        BRATLEY_FOX.get_or_init(|| {
            DirectionTable::parse("bratley-fox-gsl[1..=5]", BRATLEY_FOX_TEXT)
                .expect("embedded direction table is well formed")
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<DirectionTable> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        DirectionTable::parse(&format!("file:{}", path.display()), &text)
    }

    pub fn parse(id: &str, text: &str) -> Result<DirectionTable> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('d') {
                continue;
            }
            let bad = |message: String| Error::DirectionTable {
                line: lineno + 1,
                message,
            };
            let nums = line
                .split_ascii_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| bad(format!("invalid integer {t:?}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            if nums.len() < 3 {
                return Err(bad("expected `d s a m_1 .. m_s`".into()));
            }
            let dim = nums[0] as usize;
            if dim != rows.len() + 2 {
                return Err(bad(format!(
                    "expected dimension {}, found {dim}",
                    rows.len() + 2
                )));
            }
            let degree = nums[1] as u32;
            if degree == 0 || degree as usize > BITS || nums.len() != 3 + degree as usize {
                return Err(bad(format!(
                    "degree {degree} does not match {} values",
                    nums.len() - 3
                )));
            }
            let coeffs = u32::try_from(nums[2]).map_err(|_| bad("coefficient overflow".into()))?;
            if degree < 32 && u64::from(coeffs) >= 1u64 << (degree - 1) {
                return Err(bad(format!(
                    "coefficient {coeffs} too large for degree {degree}"
                )));
            }
            let mut initial = Vec::with_capacity(degree as usize);
            for (c, &m) in nums[3..].iter().enumerate() {
                if m % 2 == 0 || m >= 1u64 << (c + 1) {
                    return Err(bad(format!(
                        "m_{} = {m} must be odd and below 2^{}",
                        c + 1,
                        c + 1
                    )));
                }
                initial.push(m as u32);
            }
            rows.push(Primitive {
                degree,
                coeffs,
                initial,
            });
        }
        if rows.is_empty() {
            return Err(Error::DirectionTable {
                line: 0,
                message: "table has no rows".into(),
            });
        }
        Ok(DirectionTable {
            id: id.to_string(),
            rows,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn max_dimension(&self) -> usize {
        self.rows.len() + 1
    }

    /// Direction numbers `v_0..v_31` of axis `axis` (0-based), scaled by 2^32.
    fn directions(&self, axis: usize) -> [u32; BITS] {
        let mut v = [0u32; BITS];
        if axis == 0 {
            for (c, slot) in v.iter_mut().enumerate() {
                *slot = 1u32 << (31 - c);
            }
            return v;
        }
        let row = &self.rows[axis - 1];
        let s = row.degree as usize;
        for c in 0..BITS {
            v[c] = if c < s {
                row.initial[c] << (31 - c)
            } else {
                let mut x = v[c - s] ^ (v[c - s] >> s);
                for k in 1..s {
                    if (row.coeffs >> (s - 1 - k)) & 1 == 1 {
                        x ^= v[c - k];
                    }
                }
                x
            };
        }
        v
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SobolParams<'a> {
    pub d: usize,
    /// Leading sequence elements to drop.
    pub skip: u64,
    pub table: &'a DirectionTable,
}

impl SobolParams<'static> {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            skip: 0,
            table: DirectionTable::joe_kuo(),
        }
    }
}

impl<'a> SobolParams<'a> {
    pub fn with_skip(mut self, skip: u64) -> Self {
        self.skip = skip;
        self
    }

    pub fn with_table(self, table: &DirectionTable) -> SobolParams<'_> {
        SobolParams {
            d: self.d,
            skip: self.skip,
            table,
        }
    }
}

/// First `n` Sobol' points after `params.skip`.
pub fn sobol_set<T: Real>(n: usize, params: &SobolParams<'_>) -> Result<PointSet<T>> {
    let d = params.d;
    let max = params.table.max_dimension();
    if d == 0 || d > max {
        return Err(Error::DimensionUnsupported { requested: d, max });
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let end = params
        .skip
        .checked_add(n as u64)
        .filter(|&e| e <= 1u64 << BITS)
        .ok_or_else(|| Error::InvalidConfig("Sobol' index exceeds 2^32".into()))?;
    let dirs: Vec<[u32; BITS]> = (0..d).map(|k| params.table.directions(k)).collect();
    let scale = 1.0 / (1u64 << BITS) as f64;
    let mut coords = Vec::with_capacity(n * d);
    for index in params.skip..end {
        let gray = index ^ (index >> 1);
        for v in &dirs {
            let mut x = 0u32;
            let mut bits = gray;
            let mut c = 0;
            while bits != 0 {
                if bits & 1 == 1 {
                    x ^= v[c];
                }
                bits >>= 1;
                c += 1;
            }
            coords.push(T::lit(f64::from(x) * scale));
        }
    }
    Ok(PointSet::from_flat_unchecked(n, d, coords))
}
