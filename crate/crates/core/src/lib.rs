//! Label-free and label-based quantification of clustering in point clouds.
//!
//! The crate is `no_std` (with `alloc`). It covers the numeric pipeline only:
//! z-scoring, all-pairs distances, the normalized entropy of the distance
//! histogram (EDD), the generalized discrimination value (GDV) and a seeded
//! Gaussian mixture generator. File formats, the parallel distance kernel and
//! the experiment harness live in the `edd` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dataset;
pub mod distances;
pub mod edd;
mod error;
pub mod gdv;
pub mod synth;

pub use dataset::{zscore, ConstantDimPolicy, Dataset, Labels, ZScoreParams};
pub use distances::{
    distance, fill_rows, n_pairs, pair_index, pairwise_distances, row_offset, CondensedDistances,
    Metric,
};
pub use edd::{
    build_histogram, edd, edd_from_distances, prepare, shannon_entropy, DistanceHistogram, EddConfig,
    EddResult, RangePolicy,
};
pub use error::{Error, Result};
pub use gdv::{gdv, inter_class_mean, intra_class_mean, GdvResult};
pub use synth::{apply_scenario, generate, ClusterSpec, LabelScenario};
