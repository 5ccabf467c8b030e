//! Multi-threaded all-pairs kernel on the current rayon pool.

use rayon::prelude::*;

use edd_core::distances::{fill_rows, from_filled, n_pairs, row_offset};
use edd_core::edd::{edd_from_distances, prepare};
use edd_core::{CondensedDistances, Dataset, EddConfig, EddResult, Metric};

use crate::error::Result;

/// Row blocks holding roughly `total / parts` pairs each.
fn row_blocks(n: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let total = n_pairs(n);
    let parts = parts.clamp(1, n.max(1));
    let mut blocks = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 1..=parts {
        let target = total * p / parts;
        let mut end = start;
        while end < n && row_offset(end, n) < target {
            end += 1;
        }
        if p == parts {
            end = n;
        }
        if end > start {
            blocks.push(start..end);
            start = end;
        }
    }
    blocks
}

/// Same values as [`edd_core::pairwise_distances`], bit for bit, for any pool size.
pub fn pairwise_distances_par(data: &Dataset, metric: Metric) -> Result<CondensedDistances> {
    let n = data.n_points();
    if n < 2 {
        // Delegate for the error value.
        return Ok(edd_core::pairwise_distances(data, metric)?);
    }
    let mut values = vec![0.0; n_pairs(n)];
    let blocks = row_blocks(n, rayon::current_num_threads() * 4);
    let mut slices = Vec::with_capacity(blocks.len());
    let mut rest = values.as_mut_slice();
    for rows in blocks {
        let len = row_offset(rows.end, n) - row_offset(rows.start, n);
        let (head, tail) = rest.split_at_mut(len);
        slices.push((rows, head));
        rest = tail;
    }
    slices
        .into_par_iter()
        .for_each(|(rows, out)| fill_rows(data, metric, rows, out));
    Ok(from_filled(values, n))
}

/// EDD pipeline using the parallel kernel.
pub fn edd_par(data: &Dataset, config: &EddConfig) -> Result<EddResult> {
    let (prepared, params) = prepare(data, config)?;
    let distances = pairwise_distances_par(&prepared, config.metric)?;
    let mut result = edd_from_distances(&distances, config)?;
    result.zscore = params;
    Ok(result)
}
