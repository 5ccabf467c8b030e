//! Point-cloud data model, class labels and dimension-wise z-scoring.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Immutable N×D matrix of finite reals, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n_points: usize,
    n_dims: usize,
}

impl Dataset {
    /// Wraps a row-major buffer of `n_points * n_dims` values.
    pub fn new(values: Vec<f64>, n_points: usize, n_dims: usize) -> Result<Self> {
        if n_points == 0 || n_dims == 0 {
            return Err(Error::EmptyDataset);
        }
        if values.len() != n_points * n_dims {
            return Err(Error::DimensionMismatch {
                expected: n_points * n_dims,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_dims,
                col: pos % n_dims,
            });
        }
        Ok(Self {
            values,
            n_points,
            n_dims,
        })
    }

    /// Builds a dataset from rows, rejecting ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * first);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != first {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: first,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(values, rows.len(), first)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    /// Row-major backing buffer.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_dims..(i + 1) * self.n_dims]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_dims)
    }

    pub fn column(&self, d: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.values.iter().skip(d).step_by(self.n_dims).copied()
    }

    /// Reorders points so that row `i` of the result is row `order[i]` of `self`.
    pub fn permute_points(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_points {
            return Err(Error::DimensionMismatch {
                expected: self.n_points,
                found: order.len(),
            });
        }
        let mut values = Vec::with_capacity(self.values.len());
        for &i in order {
            if i >= self.n_points {
                return Err(Error::InvalidSpec("permutation index out of range"));
            }
            values.extend_from_slice(self.point(i));
        }
        Self::new(values, self.n_points, self.n_dims)
    }

    /// Reorders coordinates so that column `d` of the result is column `order[d]`.
    pub fn permute_dims(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_dims {
            return Err(Error::DimensionMismatch {
                expected: self.n_dims,
                found: order.len(),
            });
        }
        if order.iter().any(|&d| d >= self.n_dims) {
            return Err(Error::InvalidSpec("permutation index out of range"));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.rows() {
            values.extend(order.iter().map(|&d| row[d]));
        }
        Self::new(values, self.n_points, self.n_dims)
    }

    /// Applies `x -> x * scale[d] + shift[d]` to every coordinate.
    pub fn affine(&self, scale: &[f64], shift: &[f64]) -> Result<Self> {
        for v in [scale, shift] {
            if v.len() != self.n_dims {
                return Err(Error::DimensionMismatch {
                    expected: self.n_dims,
                    found: v.len(),
                });
            }
        }
        let values = self
            .rows()
            .flat_map(|row| {
                row.iter()
                    .zip(scale.iter().zip(shift))
                    .map(|(x, (a, b))| x * a + b)
            })
            .collect();
        Self::new(values, self.n_points, self.n_dims)
    }
}

/// Per-point class assignment with dense class ids `0..L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    ids: Vec<usize>,
    sizes: Vec<usize>,
    names: Option<Vec<String>>,
}

impl Labels {
    /// Every id below `max(ids) + 1` must occur at least once.
    pub fn new(ids: Vec<usize>) -> Result<Self> {
        let n_classes = ids.iter().max().map_or(0, |m| m + 1);
        let mut sizes = alloc::vec![0usize; n_classes];
        for &id in &ids {
            sizes[id] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyClass(empty));
        }
        Ok(Self {
            ids,
            sizes,
            names: None,
        })
    }

    /// Interns string labels in first-appearance order: the first distinct
    /// value becomes class 0, the next class 1, and so on.
    pub fn intern<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut ids = Vec::new();
        let mut sizes = Vec::new();
        for v in values {
            let v = v.as_ref();
            // Linear scan: label alphabets are small.
            let id = match names.iter().position(|n| n == v) {
                Some(id) => id,
                None => {
                    names.push(String::from(v));
                    sizes.push(0);
                    names.len() - 1
                }
            };
            sizes[id] += 1;
            ids.push(id);
        }
        Self {
            ids,
            sizes,
            names: Some(names),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    /// N_l for each class.
    pub fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Original label strings when the labels were interned.
    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Indices of the points in `class`, in point order.
    pub fn members(&self, class: usize) -> Result<Vec<usize>> {
        if class >= self.n_classes() {
            return Err(Error::UnknownClass(class));
        }
        Ok(self
            .ids
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(i, _)| i)
            .collect())
    }

    pub(crate) fn check_len(&self, n_points: usize) -> Result<()> {
        if self.ids.len() != n_points {
            return Err(Error::LabelLengthMismatch {
                labels: self.ids.len(),
                points: n_points,
            });
        }
        Ok(())
    }
}

/// What to do with a dimension whose values are all equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstantDimPolicy {
    #[default]
    Error,
    Drop,
}

/// Parameters of a z-scoring pass, kept for provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ZScoreParams {
    /// Per-dimension mean of the input, one entry per input dimension.
    pub means: Vec<f64>,
    /// Per-dimension population standard deviation of the input (0 for dropped dimensions).
    pub stds: Vec<f64>,
    pub factor: f64,
    /// Input dimensions present in the output, in order.
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

/// Standardizes every dimension: `s = factor * (x - mean) / std`.
///
/// The standard deviation uses divisor N. A dimension is constant when all of
/// its values compare equal; such a dimension is rejected or dropped
/// depending on `policy`.
pub fn zscore(
    data: &Dataset,
    factor: f64,
    policy: ConstantDimPolicy,
) -> Result<(Dataset, ZScoreParams)> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::BadFactor);
    }
    let n = data.n_points();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    let d = data.n_dims();
    let mut means = alloc::vec![0.0; d];
    let mut stds = alloc::vec![0.0; d];
    let mut kept = Vec::with_capacity(d);
    let mut dropped = Vec::new();
    for dim in 0..d {
        let first = data.point(0)[dim];
        let mean = data.column(dim).sum::<f64>() / n as f64;
        let var = data.column(dim).map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let std = libm::sqrt(var);
        means[dim] = mean;
        let constant = data.column(dim).all(|x| x == first) || !(std > 0.0) || !std.is_finite();
        if constant {
            match policy {
                ConstantDimPolicy::Error => return Err(Error::ZeroVariance(dim)),
                ConstantDimPolicy::Drop => dropped.push(dim),
            }
        } else {
            stds[dim] = std;
            kept.push(dim);
        }
    }
    if kept.is_empty() {
        return Err(Error::AllDimensionsConstant);
    }
    let mut values = Vec::with_capacity(n * kept.len());
    for row in data.rows() {
        values.extend(
            kept.iter()
                .map(|&dim| factor * (row[dim] - means[dim]) / stds[dim]),
        );
    }
    let out = Dataset::new(values, n, kept.len())?;
    Ok((
        out,
        ZScoreParams {
            means,
            stds,
            factor,
            kept,
            dropped,
        },
    ))
}
