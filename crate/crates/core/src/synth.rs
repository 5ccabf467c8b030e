//! Seeded isotropic Gaussian mixtures and the labeling scenarios used to
//! probe the GDV.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`, whose seed expansion is fixed and portable.
//! Cluster `k` draws from stream `k` of that generator, so clusters are
//! independent substreams: resizing one cluster leaves the others untouched.
//! Random labelings use the separate stream [`LABEL_STREAM`]. Normal variates
//! come from `rand_distr::StandardNormal` and are scaled as
//! `center + width * z`, so width 0 puts every point exactly on its center.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::dataset::{Dataset, Labels};
use crate::error::{Error, Result};

/// Stream id reserved for random label assignment.
pub const LABEL_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    /// K×D matrix of cluster means.
    pub centers: Dataset,
    /// Common per-dimension standard deviation.
    pub width: f64,
    pub points_per_cluster: usize,
    pub seed: u64,
}

impl ClusterSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width >= 0.0) {
            return Err(Error::InvalidSpec("cluster width must be finite and non-negative"));
        }
        if self.points_per_cluster == 0 {
            return Err(Error::InvalidSpec("points per cluster must be positive"));
        }
        Ok(())
    }

    pub fn n_clusters(&self) -> usize {
        self.centers.n_points()
    }
}

/// Corners of an axis-aligned square with the given side, centered at the origin.
pub fn square_corners(side: f64) -> Dataset {
    let h = side / 2.0;
    Dataset::from_rows(&[[-h, -h], [h, -h], [-h, h], [h, h]]).expect("finite corners")
}

/// Vertices of an equilateral triangle with the given side, centroid at the origin.
pub fn triangle_vertices(side: f64) -> Dataset {
    let r = side / libm::sqrt(3.0);
    Dataset::from_rows(&[[0.0, r], [-side / 2.0, -r / 2.0], [side / 2.0, -r / 2.0]])
        .expect("finite vertices")
}

/// Draws the mixture. Points are grouped by cluster; labels are cluster indices.
pub fn generate(spec: &ClusterSpec) -> Result<(Dataset, Labels)> {
    spec.validate()?;
    let k = spec.n_clusters();
    let d = spec.centers.n_dims();
    let per = spec.points_per_cluster;
    let mut values = Vec::with_capacity(k * per * d);
    let mut ids = Vec::with_capacity(k * per);
    for (c, center) in spec.centers.rows().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(c as u64);
        for _ in 0..per {
            for &mu in center {
                let z: f64 = StandardNormal.sample(&mut rng);
                values.push(mu + spec.width * z);
            }
            ids.push(c);
        }
    }
    let data = Dataset::new(values, k * per, d)?;
    Ok((data, Labels::new(ids)?))
}

/// How labels are (mis)assigned relative to the true cluster membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelScenario {
    Correct,
    /// Every point of the second class takes the first class's label.
    Merged(usize, usize),
    /// Each point gets a uniformly drawn label over the original classes.
    Random,
}

impl LabelScenario {
    pub fn name(&self) -> &'static str {
        match self {
            LabelScenario::Correct => "correct",
            LabelScenario::Merged(..) => "merged",
            LabelScenario::Random => "random",
        }
    }
}

/// Relabels according to `scenario`. `seed` only matters for `Random`.
///
/// Merging keeps ids dense: after `Merged(a, b)` ids above `b` shift down by
/// one. A random draw that leaves some class empty is an `EmptyClass` error;
/// callers retry with another seed.
pub fn apply_scenario(labels: &Labels, scenario: LabelScenario, seed: u64) -> Result<Labels> {
    let l = labels.n_classes();
    match scenario {
        LabelScenario::Correct => Ok(labels.clone()),
        LabelScenario::Merged(keep, absorb) => {
            for c in [keep, absorb] {
                if c >= l {
                    return Err(Error::UnknownClass(c));
                }
            }
            if keep == absorb {
                return Err(Error::SameClass(keep));
            }
            let ids = labels
                .ids()
                .iter()
                .map(|&id| {
                    let id = if id == absorb { keep } else { id };
                    if id > absorb {
                        id - 1
                    } else {
                        id
                    }
                })
                .collect();
            Labels::new(ids)
        }
        LabelScenario::Random => {
            if l == 0 {
                return Err(Error::TooFewClasses(0));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(LABEL_STREAM);
            let uniform = Uniform::new(0, l).map_err(|_| Error::TooFewClasses(l))?;
            let ids: Vec<usize> = (0..labels.len()).map(|_| uniform.sample(&mut rng)).collect();
            let mut seen = alloc::vec![false; l];
            for &id in &ids {
                seen[id] = true;
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                return Err(Error::EmptyClass(missing));
            }
            Labels::new(ids)
        }
    }
}
