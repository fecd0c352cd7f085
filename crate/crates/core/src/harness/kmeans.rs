//! Lloyd's k-means baseline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dataset::{sq_euclidean, Dataset};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

fn nearest(x: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_euclidean(x, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Seeds with `k` distinct instances and iterates assignment/update until
/// the assignment stops changing or `max_iters` updates have run. A cluster
/// that empties is re-seeded at the instance farthest from its centroid.
pub fn kmeans(dataset: &Dataset, k: usize, seed: u64, max_iters: usize) -> Result<KMeansResult> {
    let m = dataset.len();
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if k > m {
        return invalid(format!("k = {k} exceeds the {m} instances"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = rand::seq::index::sample(&mut rng, m, k)
        .into_iter()
        .map(|i| dataset.row(i).to_vec())
        .collect();

    let assign = |centroids: &[Vec<f64>]| -> (Vec<usize>, Vec<f64>) {
        dataset.rows().map(|x| nearest(x, centroids)).unzip()
    };
    let (mut assignment, mut dist) = assign(&centroids);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        update_centroids(dataset, &assignment, &dist, &mut centroids);
        let (next, next_dist) = assign(&centroids);
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
        dist = next_dist;
    }
    Ok(KMeansResult {
        assignment,
        centroids,
        iterations,
        converged,
    })
}

fn update_centroids(
    dataset: &Dataset,
    assignment: &[usize],
    sq_dist: &[f64],
    centroids: &mut [Vec<f64>],
) {
    let k = centroids.len();
    let dim = dataset.dim();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (x, &j) in dataset.rows().zip(assignment) {
        counts[j] += 1;
        for (s, &v) in sums[j].iter_mut().zip(x) {
            *s += v;
        }
    }
    // Candidates for re-seeding, farthest first; ties by lower index.
    let mut far: Vec<usize> = (0..assignment.len()).collect();
    far.sort_by(|&a, &b| sq_dist[b].total_cmp(&sq_dist[a]).then(a.cmp(&b)));
    let mut far = far.into_iter();
    for j in 0..k {
        if counts[j] > 0 {
            let n = counts[j] as f64;
            centroids[j] = sums[j].iter().map(|s| s / n).collect();
        } else if let Some(i) = far.next() {
            centroids[j] = dataset.row(i).to_vec();
        }
    }
}
