//! Shared fixtures for the criterion benchmarks.

use rsom::harness::{synthesize, BlobSpec, OutlierSpec, SynthSpec};
use rsom::Dataset;

/// Five tight blobs in the unit square with uniform background noise.
pub fn blobs_with_noise(per_blob: usize, outliers: usize, seed: u64) -> Dataset {
    let means = [[0.1, 0.1], [0.9, 0.1], [0.1, 0.9], [0.9, 0.9], [0.5, 0.5]];
    synthesize(&SynthSpec {
        blobs: means
            .iter()
            .map(|m| BlobSpec {
                mean: m.to_vec(),
                stddev: 0.05,
                count: per_blob,
            })
            .collect(),
        outliers: Some(OutlierSpec {
            count: outliers,
            min: vec![0.0, 0.0],
            max: vec![1.0, 1.0],
        }),
        seed,
    })
    .expect("fixture spec is valid")
}

/// `m` instances of dimension `d` with a few dominant directions.
pub fn correlated(m: usize, d: usize) -> Dataset {
    let rows = (0..m)
        .map(|i| {
            let t = i as f64;
            (0..d)
                .map(|k| (t * 0.37 + k as f64).sin() * (k + 1) as f64 + (t * 1.71 * k as f64).cos() * 0.1)
                .collect()
        })
        .collect();
    Dataset::new(rows).expect("fixture rows are consistent")
}
