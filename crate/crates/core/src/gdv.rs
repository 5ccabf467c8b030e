//! Generalized discrimination value.
//!
//! The raw data is z-scored per dimension with factor ½. For every class the
//! mean Euclidean distance between its own points is taken, and for every
//! pair of classes the mean distance across them. The GDV is
//!
//! ```text
//! GDV = (1/√D) · [ mean over l of intra(l) − mean over l<m of inter(l, m) ]
//! ```
//!
//! It is 0 for fully overlapping classes and grows more negative with
//! separation.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{zscore, ConstantDimPolicy, Dataset, Labels};
use crate::distances::Metric;
use crate::error::{Error, Result};

/// Z-scoring factor applied before measuring distances.
pub const GDV_ZSCORE_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct GdvResult {
    pub gdv: f64,
    /// Mean intra-class distance per class.
    pub mean_intra: Vec<f64>,
    /// L×L row-major, symmetric; the diagonal is zero.
    pub mean_inter: Vec<f64>,
    pub class_sizes: Vec<usize>,
    pub n_dims: usize,
    pub n_classes: usize,
}

impl GdvResult {
    pub fn inter(&self, l: usize, m: usize) -> f64 {
        self.mean_inter[l * self.n_classes + m]
    }

    /// L×L matrix with inter-class means off the diagonal and intra-class
    /// means on it.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let l = self.n_classes;
        let mut m = self.mean_inter.clone();
        for c in 0..l {
            m[c * l + c] = self.mean_intra[c];
        }
        m
    }

    /// Recomputes the GDV from the stored means.
    pub fn recombine(&self) -> f64 {
        combine(&self.mean_intra, &self.mean_inter, self.n_classes, self.n_dims)
    }
}

// Terms are summed in ascending order so the result does not depend on how
// the classes are numbered.
fn combine(intra: &[f64], inter: &[f64], l: usize, d: usize) -> f64 {
    let mut intra_terms = intra.to_vec();
    let mut inter_terms: Vec<f64> = (0..l)
        .flat_map(|a| (a + 1..l).map(move |b| inter[a * l + b]))
        .collect();
    intra_terms.sort_by(f64::total_cmp);
    inter_terms.sort_by(f64::total_cmp);
    let intra_avg = intra_terms.iter().sum::<f64>() / l as f64;
    let inter_avg = 2.0 * inter_terms.iter().sum::<f64>() / (l * (l - 1)) as f64;
    (intra_avg - inter_avg) / libm::sqrt(d as f64)
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    Metric::Euclidean.eval(a, b)
}

/// Mean Euclidean distance over the unordered pairs of `class`.
///
/// Operates on `points` as given; [`gdv`] passes the ½-factor z-scored data.
pub fn intra_class_mean(points: &Dataset, labels: &Labels, class: usize) -> Result<f64> {
    labels.check_len(points.n_points())?;
    let members = labels.members(class)?;
    let n = members.len();
    if n < 2 {
        return Err(Error::SingletonClass(class));
    }
    let mut sum = 0.0;
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            sum += euclid(points.point(i), points.point(j));
        }
    }
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// Mean Euclidean distance over all cross pairs of two distinct classes.
pub fn inter_class_mean(
    points: &Dataset,
    labels: &Labels,
    class_a: usize,
    class_b: usize,
) -> Result<f64> {
    labels.check_len(points.n_points())?;
    if class_a == class_b {
        if class_a >= labels.n_classes() {
            return Err(Error::UnknownClass(class_a));
        }
        return Err(Error::SameClass(class_a));
    }
    let a = labels.members(class_a)?;
    let b = labels.members(class_b)?;
    let mut sum = 0.0;
    for &i in &a {
        for &j in &b {
            sum += euclid(points.point(i), points.point(j));
        }
    }
    Ok(sum / (a.len() * b.len()) as f64)
}

/// Computes the GDV of raw `data` under `labels`.
///
/// The ½-factor z-scoring happens here; pass untransformed data.
pub fn gdv(data: &Dataset, labels: &Labels) -> Result<GdvResult> {
    let n = data.n_points();
    labels.check_len(n)?;
    let l = labels.n_classes();
    if l < 2 {
        return Err(Error::TooFewClasses(l));
    }
    if let Some(c) = labels.class_sizes().iter().position(|&s| s < 2) {
        return Err(Error::SingletonClass(c));
    }
    let (s, _) = zscore(data, GDV_ZSCORE_FACTOR, ConstantDimPolicy::Error)?;

    // One sweep over all pairs, accumulating into the (class, class) cell.
    // The pair order is fixed, so the sums are reproducible.
    let ids = labels.ids();
    let mut sums = vec![0.0; l * l];
    for i in 0..n {
        let (ci, pi) = (ids[i], s.point(i));
        for j in i + 1..n {
            let cj = ids[j];
            let (lo, hi) = if ci <= cj { (ci, cj) } else { (cj, ci) };
            sums[lo * l + hi] += euclid(pi, s.point(j));
        }
    }

    let sizes = labels.class_sizes();
    let mean_intra: Vec<f64> = (0..l)
        .map(|c| 2.0 * sums[c * l + c] / (sizes[c] * (sizes[c] - 1)) as f64)
        .collect();
    let mut mean_inter = vec![0.0; l * l];
    for a in 0..l {
        for b in a + 1..l {
            let m = sums[a * l + b] / (sizes[a] * sizes[b]) as f64;
            mean_inter[a * l + b] = m;
            mean_inter[b * l + a] = m;
        }
    }
    let d = s.n_dims();
    Ok(GdvResult {
        gdv: combine(&mean_intra, &mean_inter, l, d),
        mean_intra,
        mean_inter,
        class_sizes: sizes.to_vec(),
        n_dims: d,
        n_classes: l,
    })
}
