//! IO, parallel execution and experiment orchestration around `edd-core`.
//!
//! * [`csv_io`]: CSV point clouds with optional label column.
//! * [`dump`]: binary cache of condensed distances.
//! * [`parallel`]: rayon all-pairs kernel, bit-identical to the sequential one.
//! * [`report`]: `key=value` records, histogram and class-matrix CSVs.
//! * [`harness`]: width and labeling sweeps over synthetic mixtures.
//! * [`config`], [`cli`]: the `edd` command-line tool.

pub mod cli;
pub mod config;
pub mod csv_io;
pub mod dump;
mod error;
pub mod harness;
pub mod parallel;
pub mod report;

pub use edd_core;
pub use error::{Error, Result};
