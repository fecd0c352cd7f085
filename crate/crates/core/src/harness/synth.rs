//! Seeded Gaussian blobs plus uniform background outliers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{invalid, Result};

/// Label given to background outliers.
pub const OUTLIER_LABEL: i64 = -1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub mean: Vec<f64>,
    pub stddev: f64,
    pub count: usize,
}

/// Uniform points in the axis-aligned box `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierSpec {
    pub count: usize,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub blobs: Vec<BlobSpec>,
    #[serde(default)]
    pub outliers: Option<OutlierSpec>,
    #[serde(default)]
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<usize> {
        let Some(first) = self.blobs.first() else {
            return invalid("at least one blob is required");
        };
        let dim = first.mean.len();
        if dim == 0 {
            return invalid("blob means must have at least one component");
        }
        for (i, b) in self.blobs.iter().enumerate() {
            if b.mean.len() != dim {
                return invalid(format!("blob {i} has dimension {}, expected {dim}", b.mean.len()));
            }
            if !(b.stddev > 0.0 && b.stddev.is_finite()) {
                return invalid(format!("blob {i} stddev must be positive"));
            }
            if b.count == 0 {
                return invalid(format!("blob {i} count must be positive"));
            }
            if b.mean.iter().any(|v| !v.is_finite()) {
                return invalid(format!("blob {i} mean must be finite"));
            }
        }
        if let Some(o) = &self.outliers {
            if o.min.len() != dim || o.max.len() != dim {
                return invalid("outlier box must match the blob dimension");
            }
            if o.min.iter().zip(&o.max).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
                return invalid("outlier box must satisfy min <= max");
            }
            for (i, b) in self.blobs.iter().enumerate() {
                let inside = b
                    .mean
                    .iter()
                    .zip(o.min.iter().zip(&o.max))
                    .all(|(m, (l, h))| l <= m && m <= h);
                if !inside {
                    return invalid(format!("blob {i} mean lies outside the outlier box"));
                }
            }
        }
        Ok(dim)
    }
}

/// Blob instances in blob order, then outliers; labels are the blob index or
/// `-1`.
pub fn synthesize(spec: &SynthSpec) -> Result<Dataset> {
    let dim = spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (id, blob) in spec.blobs.iter().enumerate() {
        for _ in 0..blob.count {
            for &m in &blob.mean {
                let z: f64 = rng.sample(StandardNormal);
                data.push(m + blob.stddev * z);
            }
            labels.push(id as i64);
        }
    }
    if let Some(o) = &spec.outliers {
        for _ in 0..o.count {
            for (&l, &h) in o.min.iter().zip(&o.max) {
                data.push(rng.random_range(l..=h));
            }
            labels.push(OUTLIER_LABEL);
        }
    }
    Dataset::from_flat(data, dim)?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(outliers: usize) -> SynthSpec {
        SynthSpec {
            blobs: vec![
                BlobSpec { mean: vec![0.2, 0.2], stddev: 0.05, count: 100 },
                BlobSpec { mean: vec![0.8, 0.8], stddev: 0.05, count: 100 },
            ],
            outliers: Some(OutlierSpec { count: outliers, min: vec![0.0, 0.0], max: vec![1.0, 1.0] }),
            seed: 9,
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(synthesize(&spec(20)).unwrap(), synthesize(&spec(20)).unwrap());
    }

    #[test]
    fn counts_and_labels() {
        let ds = synthesize(&spec(20)).unwrap();
        assert_eq!(ds.len(), 220);
        let labels = ds.labels().unwrap();
        assert_eq!(labels.iter().filter(|&&l| l == OUTLIER_LABEL).count(), 20);
        for i in 200..220 {
            assert!(ds.row(i).iter().all(|v| (0.0..=1.0).contains(v)));
        }
        let ds = synthesize(&spec(0)).unwrap();
        assert!(ds.labels().unwrap().iter().all(|&l| l >= 0));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec(1);
        s.blobs[0].mean = vec![2.0, 0.2];
        assert!(synthesize(&s).is_err());
        let mut s = spec(1);
        s.blobs.clear();
        assert!(synthesize(&s).is_err());
        let mut s = spec(1);
        s.blobs[1].stddev = 0.0;
        assert!(synthesize(&s).is_err());
    }
}
