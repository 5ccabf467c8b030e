//! All unordered pairwise distances under a pluggable metric.
//!
//! Pairs `(i, j)` with `i < j` are stored in row-major order: all partners of
//! point 0, then all partners of point 1 beyond it, and so on. See
//! [`pair_index`] for the mapping.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Chebyshev => "chebyshev",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "euclidean" => Some(Metric::Euclidean),
            "manhattan" => Some(Metric::Manhattan),
            "chebyshev" => Some(Metric::Chebyshev),
            _ => None,
        }
    }

    /// Unchecked evaluation; `a` and `b` must have equal length.
    #[inline]
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::Euclidean => {
                let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                libm::sqrt(sq)
            }
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64], metric: Metric) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(metric.eval(a, b))
}

/// Number of unordered pairs among `n` points.
pub const fn n_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of pair `(i, j)`, `i < j < n`, in condensed storage.
#[inline]
pub const fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Condensed upper-triangle distance vector of length N(N−1)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedDistances {
    values: Vec<f64>,
    n_points: usize,
}

impl CondensedDistances {
    /// Validates length and that every value is finite and non-negative.
    pub fn from_values(values: Vec<f64>, n_points: usize) -> Result<Self> {
        if values.len() != n_pairs(n_points) {
            return Err(Error::DimensionMismatch {
                expected: n_pairs(n_points),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidSpec("distances must be finite and non-negative"));
        }
        Ok(Self { values, n_points })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distance between points `i` and `j` (0 when `i == j`).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => self.values[pair_index(i, j, self.n_points)],
            core::cmp::Ordering::Greater => self.values[pair_index(j, i, self.n_points)],
            core::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Sequential all-pairs kernel.
pub fn pairwise_distances(data: &Dataset, metric: Metric) -> Result<CondensedDistances> {
    let n = data.n_points();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    let mut values = vec![0.0; n_pairs(n)];
    fill_rows(data, metric, 0..n, &mut values);
    Ok(CondensedDistances {
        values,
        n_points: n,
    })
}

/// Offset of row `i`'s first pair `(i, i + 1)`; `row_offset(n, n)` is the total.
pub const fn row_offset(i: usize, n: usize) -> usize {
    if i >= n {
        n_pairs(n)
    } else {
        i * n - i * (i + 1) / 2
    }
}

/// Writes the pairs of rows `rows` into `out`, which must be exactly the
/// condensed slice `row_offset(rows.start)..row_offset(rows.end)`.
///
/// Parallel callers split the output at row boundaries and call this once per
/// block; each value is computed the same way regardless of the split.
pub fn fill_rows(data: &Dataset, metric: Metric, rows: Range<usize>, out: &mut [f64]) {
    let n = data.n_points();
    assert_eq!(
        out.len(),
        row_offset(rows.end, n) - row_offset(rows.start, n),
        "output slice does not match row block"
    );
    let mut k = 0;
    for i in rows {
        let a = data.point(i);
        for j in i + 1..n {
            out[k] = metric.eval(a, data.point(j));
            k += 1;
        }
    }
}

/// Assembles condensed distances from a buffer filled by [`fill_rows`].
pub fn from_filled(values: Vec<f64>, n_points: usize) -> CondensedDistances {
    assert_eq!(values.len(), n_pairs(n_points));
    CondensedDistances { values, n_points }
}
