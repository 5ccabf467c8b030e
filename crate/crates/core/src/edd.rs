//! Entropy of the distance distribution.
//!
//! The pairwise distances are binned into `B` equal-width bins, the counts are
//! normalized to a probability vector, and its Shannon entropy in bits is
//! divided by `log2(B)`. The result lies in `[0, 1]`: 0 when all distances
//! fall in one bin, 1 when every bin holds the same mass.

use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{zscore, ConstantDimPolicy, Dataset, ZScoreParams};
use crate::distances::{pairwise_distances, CondensedDistances, Metric};
use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 100;

/// Where the histogram edges come from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RangePolicy {
    /// `[min(d), max(d)]` of the distances being binned.
    #[default]
    Observed,
    /// A caller-chosen interval; values outside are clipped into the end bins.
    Fixed { lo: f64, hi: f64 },
}

impl RangePolicy {
    fn validate(self) -> Result<()> {
        match self {
            RangePolicy::Observed => Ok(()),
            RangePolicy::Fixed { lo, hi } if lo.is_finite() && hi.is_finite() && lo < hi => Ok(()),
            RangePolicy::Fixed { lo, hi } => Err(Error::BadRange { lo, hi }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddConfig {
    pub bins: usize,
    /// Z-score every dimension (factor 1) before measuring distances.
    pub zscore: bool,
    pub metric: Metric,
    pub range: RangePolicy,
}

impl Default for EddConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            zscore: true,
            metric: Metric::Euclidean,
            range: RangePolicy::Observed,
        }
    }
}

impl EddConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::TooFewBins(self.bins));
        }
        self.range.validate()
    }
}

/// Binned probability distribution of distance values.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceHistogram {
    probabilities: Vec<f64>,
    counts: Vec<u64>,
    edges: Vec<f64>,
    out_of_range: u64,
}

impl DistanceHistogram {
    pub fn bins(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `B + 1` ascending edges. In the degenerate single-value case every
    /// edge equals that value.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Values clipped into an end bin under a fixed range.
    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Midpoint of each bin.
    pub fn centers(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }
}

/// Bins `distances` into `bins` equal-width bins.
///
/// Bins are half-open `[e_k, e_{k+1})` except the last, which also holds its
/// right edge.
pub fn build_histogram(
    distances: &[f64],
    bins: usize,
    range: RangePolicy,
) -> Result<DistanceHistogram> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    range.validate()?;
    if distances.is_empty() {
        return Err(Error::EmptyDistances);
    }
    let (lo, hi) = match range {
        RangePolicy::Observed => distances
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
                (lo.min(d), hi.max(d))
            }),
        RangePolicy::Fixed { lo, hi } => (lo, hi),
    };

    let mut counts = vec![0u64; bins];
    let mut out_of_range = 0;
    if lo == hi {
        counts[0] = distances.len() as u64;
        return Ok(finish(counts, vec![lo; bins + 1], 0));
    }

    let span = hi - lo;
    let mut edges: Vec<f64> = (0..bins).map(|k| lo + span * k as f64 / bins as f64).collect();
    edges.push(hi);
    let scale = bins as f64 / span;
    for &d in distances {
        if d < lo || d > hi {
            out_of_range += 1;
        }
        let t = (d - lo) * scale;
        // `as` saturates; the last bin is closed on the right.
        let mut k = if t <= 0.0 { 0 } else { (t as usize).min(bins - 1) };
        // Rounding in `t` can land one bin off near an edge; settle against
        // the reported edges so counts and edges always agree.
        while k + 1 < bins && d >= edges[k + 1] {
            k += 1;
        }
        while k > 0 && d < edges[k] {
            k -= 1;
        }
        counts[k] += 1;
    }
    Ok(finish(counts, edges, out_of_range))
}

fn finish(counts: Vec<u64>, edges: Vec<f64>, out_of_range: u64) -> DistanceHistogram {
    let total = counts.iter().sum::<u64>() as f64;
    let probabilities = counts.iter().map(|&c| c as f64 / total).collect();
    DistanceHistogram {
        probabilities,
        counts,
        edges,
        out_of_range,
    }
}

/// Shannon entropy of the histogram in bits; empty bins contribute nothing.
pub fn shannon_entropy(hist: &DistanceHistogram) -> f64 {
    let h: f64 = hist
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log2(p))
        .sum();
    // A single occupied bin sums to -0.0.
    h.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EddResult {
    /// Normalized entropy in `[0, 1]`.
    pub edd: f64,
    pub entropy_bits: f64,
    pub histogram: DistanceHistogram,
    pub config: EddConfig,
    pub n_points: usize,
    /// Present when the input was z-scored.
    pub zscore: Option<ZScoreParams>,
}

/// Applies the configured preprocessing. Borrows the input when z-scoring is off.
pub fn prepare<'a>(
    data: &'a Dataset,
    config: &EddConfig,
) -> Result<(Cow<'a, Dataset>, Option<ZScoreParams>)> {
    config.validate()?;
    if data.n_points() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: data.n_points(),
        });
    }
    if config.zscore {
        let (z, params) = zscore(data, 1.0, ConstantDimPolicy::Error)?;
        Ok((Cow::Owned(z), Some(params)))
    } else {
        Ok((Cow::Borrowed(data), None))
    }
}

/// Histogram, entropy and normalization over precomputed distances.
pub fn edd_from_distances(distances: &CondensedDistances, config: &EddConfig) -> Result<EddResult> {
    config.validate()?;
    let histogram = build_histogram(distances.values(), config.bins, config.range)?;
    let entropy_bits = shannon_entropy(&histogram);
    let edd = (entropy_bits / libm::log2(config.bins as f64)).clamp(0.0, 1.0);
    Ok(EddResult {
        edd,
        entropy_bits,
        histogram,
        config: *config,
        n_points: distances.n_points(),
        zscore: None,
    })
}

/// Full pipeline: optional z-scoring, pairwise distances, histogram, entropy.
pub fn edd(data: &Dataset, config: &EddConfig) -> Result<EddResult> {
    let (prepared, params) = prepare(data, config)?;
    let distances = pairwise_distances(&prepared, config.metric)?;
    let mut result = edd_from_distances(&distances, config)?;
    result.zscore = params;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn uniform_hist(bins: usize) -> DistanceHistogram {
        finish(vec![3; bins], (0..=bins).map(|k| k as f64).collect(), 0)
    }

    #[test]
    fn single_value_collapses() {
        let h = build_histogram(&[5.0, 5.0, 5.0], 10, RangePolicy::Observed).unwrap();
        let mut expected = vec![0.0; 10];
        expected[0] = 1.0;
        assert_eq!(h.probabilities(), expected.as_slice());
        assert!(h.edges().iter().all(|&e| e == 5.0));
        assert_eq!(h.edges().len(), 11);
    }

    #[test]
    fn right_inclusive_last_bin() {
        let h = build_histogram(&[0.0, 1.0, 2.0, 3.0], 2, RangePolicy::Observed).unwrap();
        assert_eq!(h.probabilities(), &[0.5, 0.5]);
        assert_eq!(h.edges(), &[0.0, 1.5, 3.0]);
    }

    #[test]
    fn fixed_range_clips_and_counts() {
        let h = build_histogram(&[-1.0, 0.5, 2.0, 9.0], 4, RangePolicy::Fixed { lo: 0.0, hi: 4.0 })
            .unwrap();
        assert_eq!(h.counts(), &[2, 0, 1, 1]);
        assert_eq!(h.out_of_range(), 2);
    }

    #[test]
    fn histogram_errors() {
        assert_eq!(
            build_histogram(&[], 10, RangePolicy::Observed).unwrap_err(),
            Error::EmptyDistances
        );
        assert_eq!(
            build_histogram(&[1.0], 1, RangePolicy::Observed).unwrap_err(),
            Error::TooFewBins(1)
        );
        assert!(matches!(
            build_histogram(&[1.0], 4, RangePolicy::Fixed { lo: 2.0, hi: 2.0 }),
            Err(Error::BadRange { .. })
        ));
    }

    #[test]
    fn uniform_samples_against_direct_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let values: Vec<f64> = (0..100_000)
            .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
            .collect();
        let h = build_histogram(&values, 100, RangePolicy::Observed).unwrap();

        // Oracle: count membership against the reported edges one bin at a time.
        let e = h.edges();
        for k in 0..100 {
            let last = k == 99;
            let direct = values
                .iter()
                .filter(|&&x| x >= e[k] && (x < e[k + 1] || (last && x <= e[k + 1])))
                .count() as u64;
            assert_eq!(h.counts()[k], direct, "bin {k}");
            assert!((h.probabilities()[k] - 0.01).abs() < 0.005);
        }
    }

    #[test]
    fn entropy_reference_values() {
        assert_eq!(shannon_entropy(&uniform_hist(8)), 3.0);
        let delta = finish(vec![4, 0, 0, 0], vec![0.0, 1.0, 2.0, 3.0, 4.0], 0);
        assert_eq!(shannon_entropy(&delta), 0.0);
        let dyadic = finish(vec![2, 1, 1], vec![0.0, 1.0, 2.0, 3.0], 0);
        assert!((shannon_entropy(&dyadic) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_edd_values() {
        let same = Dataset::from_rows(&[[1.0, 2.0]; 5]).unwrap();
        let cfg = EddConfig {
            zscore: false,
            ..Default::default()
        };
        assert_eq!(edd(&same, &cfg).unwrap().edd, 0.0);

        let two = Dataset::from_rows(&[[0.0, 1.0], [3.0, -1.0]]).unwrap();
        for bins in [2, 7, 100] {
            let cfg = EddConfig {
                bins,
                ..Default::default()
            };
            assert_eq!(edd(&two, &cfg).unwrap().edd, 0.0);
        }
    }

    #[test]
    fn zscore_errors_propagate() {
        let flat = Dataset::from_rows(&[[1.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_eq!(
            edd(&flat, &EddConfig::default()).unwrap_err(),
            Error::ZeroVariance(0)
        );
        let one = Dataset::from_rows(&[[1.0]]).unwrap();
        assert!(matches!(
            edd(&one, &EddConfig::default()),
            Err(Error::TooFewPoints { .. })
        ));
    }

    proptest! {
        #[test]
        fn entropy_matches_naive_sum(counts in proptest::collection::vec(0u64..50, 2..40)) {
            prop_assume!(counts.iter().any(|&c| c > 0));
            let bins = counts.len();
            let h = finish(counts.clone(), (0..=bins).map(|k| k as f64).collect(), 0);
            let total: u64 = counts.iter().sum();
            let mut naive = 0.0;
            for &c in &counts {
                if c > 0 {
                    let p = c as f64 / total as f64;
                    naive -= p * p.log2();
                }
            }
            let got = shannon_entropy(&h);
            prop_assert!((got - naive).abs() < 1e-12);
            prop_assert!(got <= (bins as f64).log2() + 1e-12);
        }

        #[test]
        fn probabilities_normalized(values in proptest::collection::vec(0f64..100.0, 1..300), bins in 2usize..64) {
            let h = build_histogram(&values, bins, RangePolicy::Observed).unwrap();
            let sum: f64 = h.probabilities().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert_eq!(h.total(), values.len() as u64);
            prop_assert!(h.probabilities().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }
}
