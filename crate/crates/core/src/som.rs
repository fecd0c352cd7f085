//! Online self-organizing map on a rectangular lattice.
//!
//! Each presented instance picks the unit whose weight is nearest in
//! Euclidean distance, then every unit moves towards the instance by the
//! Gaussian window of its grid distance to the winner:
//!
//! ```text
//! h(n_j, n_win) = eps_t * exp(-|n_j - n_win|^2 / (2 sigma_t^2))
//! w_j <- w_j + h(n_j, n_win) (x - w_j)
//! ```
//!
//! `eps_t` and `sigma_t` decay geometrically once per epoch, and instances are
//! presented in a seeded shuffle that changes every epoch.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{sq_euclidean, Dataset};
use crate::error::{invalid, Result};

/// Integer lattice coordinate of a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

impl GridPos {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn sq_dist(&self, other: &GridPos) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        dr * dr + dc * dc
    }
}

impl From<GridPos> for [usize; 2] {
    fn from(p: GridPos) -> Self {
        [p.row, p.col]
    }
}

impl From<[usize; 2]> for GridPos {
    fn from([row, col]: [usize; 2]) -> Self {
        Self { row, col }
    }
}

/// Training hyper-parameters. `K = rows * cols`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SomConfig {
    pub rows: usize,
    pub cols: usize,
    pub epochs: usize,
    pub eps_start: f64,
    pub eps_end: f64,
    pub sigma_start: f64,
    pub sigma_end: f64,
    pub seed: u64,
}

impl SomConfig {
    /// Defaults: 30 epochs, learning rate 0.5 -> 0.01, neighbourhood width
    /// from half the longer grid side (at least 1) down to 0.3, seed 0.
    pub fn new(rows: usize, cols: usize) -> Self {
        let sigma_start = (rows.max(cols) as f64 / 2.0).max(1.0);
        Self {
            rows,
            cols,
            epochs: 30,
            eps_start: 0.5,
            eps_end: 0.01,
            sigma_start,
            sigma_end: 0.3,
            seed: 0,
        }
    }

    pub fn units(&self) -> usize {
        self.rows * self.cols
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return invalid("grid rows and cols must be positive");
        }
        if self.units() < 2 {
            return invalid("grid must contain at least 2 units");
        }
        if self.epochs == 0 {
            return invalid("epochs must be at least 1");
        }
        let eps_ok = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !eps_ok(self.eps_start) || !eps_ok(self.eps_end) || self.eps_start < self.eps_end {
            return invalid(format!(
                "learning rate must satisfy 1 >= eps_start >= eps_end >= 0, got {}:{}",
                self.eps_start, self.eps_end
            ));
        }
        let sigma_ok = |v: f64| v.is_finite() && v > 0.0;
        if !sigma_ok(self.sigma_start)
            || !sigma_ok(self.sigma_end)
            || self.sigma_start < self.sigma_end
        {
            return invalid(format!(
                "neighbourhood width must satisfy sigma_start >= sigma_end > 0, got {}:{}",
                self.sigma_start, self.sigma_end
            ));
        }
        Ok(())
    }

    pub fn eps_at(&self, epoch: usize) -> f64 {
        decay(self.eps_start, self.eps_end, epoch, self.epochs)
    }

    pub fn sigma_at(&self, epoch: usize) -> f64 {
        decay(self.sigma_start, self.sigma_end, epoch, self.epochs)
    }
}

/// Row-major lattice `{0..rows} x {0..cols}`; unit `j` sits at
/// `(j / cols, j % cols)`.
pub fn neuron_positions(rows: usize, cols: usize) -> Result<Vec<GridPos>> {
    if rows == 0 || cols == 0 {
        return invalid("grid rows and cols must be positive");
    }
    if rows * cols < 2 {
        return invalid("grid must contain at least 2 units");
    }
    Ok((0..rows * cols)
        .map(|j| GridPos::new(j / cols, j % cols))
        .collect())
}

/// Geometric interpolation from `start` at epoch 0 to `end` at the last epoch.
pub fn decay(start: f64, end: f64, epoch: usize, epochs: usize) -> f64 {
    debug_assert!(epoch < epochs);
    if epochs <= 1 || start == end || epoch == 0 {
        return start;
    }
    if epoch + 1 >= epochs {
        return end;
    }
    let frac = epoch as f64 / (epochs - 1) as f64;
    start * (end / start).powf(frac)
}

/// Gaussian window of the grid distance between a unit and the winner.
pub fn window(pos: &GridPos, winner: &GridPos, eps_t: f64, sigma_t: f64) -> f64 {
    eps_t * (-pos.sq_dist(winner) / (2.0 * sigma_t * sigma_t)).exp()
}

/// Grid positions and weight vectors of a map.
#[derive(Debug, Clone, PartialEq)]
pub struct SomMap {
    positions: Vec<GridPos>,
    weights: Vec<f64>,
    dim: usize,
}

impl SomMap {
    /// `weights` holds `rows * cols` row-major vectors of dimension `dim`.
    pub fn new(rows: usize, cols: usize, dim: usize, weights: Vec<f64>) -> Result<Self> {
        let positions = neuron_positions(rows, cols)?;
        if dim == 0 {
            return invalid("weight dimension must be at least 1");
        }
        if weights.len() != positions.len() * dim {
            return invalid(format!(
                "expected {} weight components, got {}",
                positions.len() * dim,
                weights.len()
            ));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return invalid("weights must be finite");
        }
        Ok(Self {
            positions,
            weights,
            dim,
        })
    }

    pub fn units(&self) -> usize {
        self.positions.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positions(&self) -> &[GridPos] {
        &self.positions
    }

    pub fn weight(&self, j: usize) -> &[f64] {
        &self.weights[j * self.dim..(j + 1) * self.dim]
    }

    pub fn weights(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.weights.chunks_exact(self.dim)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return invalid(format!(
                "instance has dimension {}, map expects {}",
                x.len(),
                self.dim
            ));
        }
        Ok(())
    }

    /// Index of the nearest weight; ties go to the lowest index.
    pub fn find_winner(&self, x: &[f64]) -> Result<usize> {
        self.check_dim(x)?;
        Ok(self.nearest(x).0)
    }

    /// Winner index and squared distance, dimension assumed checked.
    fn nearest(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (j, w) in self.weights().enumerate() {
            let d = sq_euclidean(x, w);
            if d < best.1 {
                best = (j, d);
            }
        }
        best
    }

    /// Delta-rule step of every unit towards `x`.
    pub fn update_weights(
        &mut self,
        x: &[f64],
        winner: usize,
        eps_t: f64,
        sigma_t: f64,
    ) -> Result<()> {
        self.check_dim(x)?;
        if winner >= self.units() {
            return invalid(format!(
                "winner {winner} out of range for {} units",
                self.units()
            ));
        }
        self.step(x, winner, eps_t, sigma_t);
        Ok(())
    }

    fn step(&mut self, x: &[f64], winner: usize, eps_t: f64, sigma_t: f64) {
        let win_pos = self.positions[winner];
        for (pos, w) in self
            .positions
            .iter()
            .zip(self.weights.chunks_exact_mut(self.dim))
        {
            let h = window(pos, &win_pos, eps_t, sigma_t);
            for (wk, &xk) in w.iter_mut().zip(x) {
                *wk += h * (xk - *wk);
            }
        }
    }

    /// Final winner and Euclidean distance for every instance.
    pub fn assign(&self, dataset: &Dataset) -> Result<Vec<(usize, f64)>> {
        self.check_dim(dataset.row(0))?;
        Ok(dataset
            .rows()
            .map(|x| {
                let (j, d2) = self.nearest(x);
                (j, d2.sqrt())
            })
            .collect())
    }
}

/// Initial weights: `k` distinct instances drawn without replacement, topped
/// up with uniform draws from the data bounding box when `M < k`.
pub fn init_weights(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<f64>> {
    if dataset.is_empty() {
        return invalid("dataset must contain at least one instance");
    }
    if k < 2 {
        return invalid("at least 2 units are required");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = dataset.len();
    let sampled = m.min(k);
    let mut weights = Vec::with_capacity(k * dataset.dim());
    for i in rand::seq::index::sample(&mut rng, m, sampled) {
        weights.extend_from_slice(dataset.row(i));
    }
    if sampled < k {
        let (lo, hi) = dataset.bounding_box();
        for _ in sampled..k {
            for (&l, &h) in lo.iter().zip(&hi) {
                weights.push(rng.random_range(l..=h));
            }
        }
    }
    Ok(weights)
}

/// What happened during one epoch of training.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTrace {
    pub epoch: usize,
    pub eps: f64,
    pub sigma: f64,
    /// Winner of every instance, indexed by instance, taken at presentation time.
    pub winners: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingTrace {
    pub epochs: Vec<EpochTrace>,
}

/// Train a map and record the per-epoch trace.
pub fn train(dataset: &Dataset, config: &SomConfig) -> Result<(SomMap, TrainingTrace)> {
    train_with(dataset, config, |_, _| ())
}

/// Like [`train`], calling `on_epoch` with the map and that epoch's trace
/// after each epoch completes.
pub fn train_with<F>(
    dataset: &Dataset,
    config: &SomConfig,
    mut on_epoch: F,
) -> Result<(SomMap, TrainingTrace)>
where
    F: FnMut(&SomMap, &EpochTrace),
{
    config.validate()?;
    let k = config.units();
    let weights = init_weights(dataset, k, config.seed)?;
    let mut map = SomMap::new(config.rows, config.cols, dataset.dim(), weights)?;

    // The presentation order uses its own stream so that it does not depend on
    // how many draws initialization consumed.
    let mut order_rng = ChaCha8Rng::seed_from_u64(config.seed);
    order_rng.set_stream(1);
    let mut order: Vec<usize> = (0..dataset.len()).collect();

    let mut trace = TrainingTrace::default();
    for epoch in 0..config.epochs {
        let eps = config.eps_at(epoch);
        let sigma = config.sigma_at(epoch);
        order.shuffle(&mut order_rng);
        let mut winners = vec![0; dataset.len()];
        for &i in &order {
            let x = dataset.row(i);
            let (winner, _) = map.nearest(x);
            winners[i] = winner;
            map.step(x, winner, eps, sigma);
        }
        let record = EpochTrace {
            epoch,
            eps,
            sigma,
            winners,
        };
        on_epoch(&map, &record);
        trace.epochs.push(record);
    }
    Ok((map, trace))
}
