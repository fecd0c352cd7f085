//! Number of clusters from PCA explained variance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{invalid, Result};

/// Eigenvalues below this fraction of the largest one count as zero.
pub const RELATIVE_EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Fraction of total variance the kept components must explain.
    pub nu: f64,
    pub center: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            nu: 0.4,
            center: true,
        }
    }
}

/// Sample covariance (`1 / (M - 1)`), optionally about the mean.
pub fn covariance(dataset: &Dataset, center: bool) -> DMatrix<f64> {
    let d = dataset.dim();
    let mean = if center {
        dataset.mean()
    } else {
        vec![0.0; d]
    };
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for row in dataset.rows() {
        for a in 0..d {
            let da = row[a] - mean[a];
            for b in a..d {
                cov[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    let denom = (dataset.len() - 1) as f64;
    for a in 0..d {
        for b in a..d {
            let v = cov[(a, b)] / denom;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    cov
}

/// Covariance eigenvalues in descending order, with negligible ones set to
/// zero.
pub fn explained_variances(dataset: &Dataset, center: bool) -> Vec<f64> {
    let eig = covariance(dataset, center).symmetric_eigenvalues();
    let mut vals: Vec<f64> = eig.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    floor_eigenvalues(&mut vals);
    vals
}

/// Zero out eigenvalues below the relative floor (and any negative round-off).
pub fn floor_eigenvalues(desc: &mut [f64]) {
    let largest = desc.first().copied().unwrap_or(0.0).max(0.0);
    for v in desc.iter_mut() {
        if *v < RELATIVE_EIGEN_FLOOR * largest || *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Smallest count of leading eigenvalues whose share of the total reaches
/// `nu`; `1` when there is no variance at all.
pub fn components_for_variance(desc: &[f64], nu: f64) -> usize {
    let total: f64 = desc.iter().sum();
    if !(total > 0.0) {
        return 1;
    }
    let mut acc = 0.0;
    for (m, v) in desc.iter().enumerate() {
        acc += v;
        if acc / total >= nu {
            return m + 1;
        }
    }
    desc.len().max(1)
}

pub fn estimate_k(dataset: &Dataset, nu: f64) -> Result<usize> {
    estimate_k_with(
        dataset,
        &EstimatorConfig {
            nu,
            ..EstimatorConfig::default()
        },
    )
}

pub fn estimate_k_with(dataset: &Dataset, config: &EstimatorConfig) -> Result<usize> {
    if dataset.len() < 2 {
        return invalid("estimating K needs at least 2 instances");
    }
    if !(config.nu > 0.0 && config.nu <= 1.0) {
        return invalid(format!("nu must lie in (0, 1], got {}", config.nu));
    }
    let vals = explained_variances(dataset, config.center);
    Ok(components_for_variance(&vals, config.nu))
}

/// Near-square `(rows, cols)` with `rows = floor(sqrt K)` and
/// `cols = ceil(K / rows)`.
pub fn grid_shape(k: usize) -> (usize, usize) {
    let k = k.max(1);
    let mut rows = (k as f64).sqrt().floor() as usize;
    // Guard against sqrt rounding for large perfect squares.
    while rows * rows > k {
        rows -= 1;
    }
    while (rows + 1) * (rows + 1) <= k {
        rows += 1;
    }
    let cols = k.div_ceil(rows);
    (rows, cols)
}
