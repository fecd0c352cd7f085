//! Rectifying self-organizing maps.
//!
//! A SOM is trained online with the delta rule and a Gaussian window over the
//! grid. While it trains, every unit accumulates an excitation score from its
//! own win counts and from the wins of its grid neighbours. At the end of the
//! single training pass the normalized scores split the units into salient
//! clusters and outlier clusters, and box-plot statistics over the
//! instance-to-weight distances prune outlier elements from the salient ones.
//!
//! The crate also ships a PCA estimator for the number of units, a weighted
//! spatial-pyramid score fusion, and an evaluation harness (synthetic data,
//! k-means baseline, ARI and outlier precision/recall, JSON reports).
//!
//! All randomness flows through [`rand_chacha::ChaCha8Rng`] seeded from a
//! `u64`, so a seed means the same thing on every platform.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod kestimator;
pub mod pyramid;
pub mod rectifier;
pub mod som;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use kestimator::{estimate_k, grid_shape, EstimatorConfig};
pub use pyramid::{classify, fuse, FusionConfig, PyramidConfidences};
pub use rectifier::{rectify, RectifiedClustering, RsomConfig, WhiskerRule};
pub use som::{train, GridPos, SomConfig, SomMap, TrainingTrace};
