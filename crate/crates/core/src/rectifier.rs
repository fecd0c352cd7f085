//! Excitation bookkeeping and outlier removal on top of SOM training.
//!
//! Per epoch, with `z_j` the win count of unit `j` and `h` the training window
//! of that epoch:
//!
//! ```text
//! beta_j = sum_{v != j} h(n_j, n_v) z_v
//! e_j   += rho_t (beta_j + z_j),   rho_t = 1 / eps_t
//! ```
//!
//! After training, min-max normalized scores below `theta` mark outlier
//! units, whose members are all discarded. Members of the remaining salient
//! units whose distance to the unit weight lies strictly above the box-plot
//! upper whisker are discarded as outlier elements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{invalid, Result};
use crate::som::{self, window, GridPos, SomConfig, SomMap};

/// How `tau` turns a unit's member distances into a cut-off.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WhiskerRule {
    /// `Q3 + tau * IQR`.
    #[default]
    Coefficient,
    /// The `tau` quantile of the distances (`tau` clamped to `[0, 1]`).
    Coverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsomConfig {
    pub som: SomConfig,
    pub theta: f64,
    pub tau: f64,
    #[serde(default)]
    pub whisker: WhiskerRule,
}

impl RsomConfig {
    /// Generic defaults: `theta = 0.3`, `tau = 0.4`.
    pub fn new(som: SomConfig) -> Self {
        Self {
            som,
            theta: 0.3,
            tau: 0.4,
            whisker: WhiskerRule::Coefficient,
        }
    }

    /// Configuration under which nothing is discarded, i.e. a plain SOM.
    pub fn plain(som: SomConfig) -> Self {
        Self {
            som,
            theta: 0.0,
            tau: 1e9,
            whisker: WhiskerRule::Coefficient,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.som.validate()?;
        if self.som.eps_end <= 0.0 {
            return invalid("eps_end must be positive: solidity is its reciprocal");
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return invalid(format!("theta must lie in [0, 1], got {}", self.theta));
        }
        if !self.tau.is_finite() || self.tau < 0.0 {
            return invalid(format!("tau must be finite and nonnegative, got {}", self.tau));
        }
        Ok(())
    }
}

/// Running excitation state of every unit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationLedger {
    /// Cumulative excitation scores.
    pub e: Vec<f64>,
    /// Win counts of the current epoch.
    pub z: Vec<usize>,
    /// Neighbourhood activations of the current epoch.
    pub beta: Vec<f64>,
    /// Solidity used by the most recent update.
    pub rho: f64,
}

impl ExcitationLedger {
    pub fn new(units: usize) -> Self {
        Self {
            e: vec![0.0; units],
            z: vec![0; units],
            beta: vec![0.0; units],
            rho: 1.0,
        }
    }

    /// Fill `z` and `beta` from one epoch's winners.
    pub fn record_epoch(
        &mut self,
        winners: &[usize],
        positions: &[GridPos],
        eps_t: f64,
        sigma_t: f64,
    ) -> Result<()> {
        self.z = epoch_win_counts(winners, self.e.len())?;
        self.beta = neighborhood_activation(&self.z, positions, eps_t, sigma_t)?;
        Ok(())
    }

    /// `e_j += rho_t (beta_j + z_j)`, then clear the epoch counters.
    pub fn update_excitation(&mut self, rho_t: f64) {
        debug_assert!(rho_t > 0.0);
        for ((e, &b), &z) in self.e.iter_mut().zip(&self.beta).zip(&self.z) {
            *e += rho_t * (b + z as f64);
        }
        self.rho = rho_t;
        self.z.iter_mut().for_each(|z| *z = 0);
        self.beta.iter_mut().for_each(|b| *b = 0.0);
    }
}

pub fn epoch_win_counts(winners: &[usize], units: usize) -> Result<Vec<usize>> {
    let mut z = vec![0; units];
    for &w in winners {
        match z.get_mut(w) {
            Some(c) => *c += 1,
            None => return invalid(format!("winner {w} out of range for {units} units")),
        }
    }
    Ok(z)
}

/// Window-weighted win counts of every other unit; the unit's own wins are
/// excluded.
pub fn neighborhood_activation(
    z: &[usize],
    positions: &[GridPos],
    eps_t: f64,
    sigma_t: f64,
) -> Result<Vec<f64>> {
    if z.len() != positions.len() {
        return invalid(format!(
            "{} win counts for {} positions",
            z.len(),
            positions.len()
        ));
    }
    Ok(positions
        .iter()
        .enumerate()
        .map(|(j, pj)| {
            positions
                .iter()
                .zip(z)
                .enumerate()
                .filter(|&(v, (_, &zv))| v != j && zv > 0)
                .map(|(_, (pv, &zv))| window(pj, pv, eps_t, sigma_t) * zv as f64)
                .sum()
        })
        .collect())
}

/// Min-max normalization; a map without contrast normalizes to all ones.
pub fn normalize_excitation(e: &[f64]) -> Vec<f64> {
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    let max = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if !(range > 0.0) {
        return vec![1.0; e.len()];
    }
    e.iter().map(|&v| (v - min) / range).collect()
}

/// `(salient, outlier)` unit indices, both ascending.
pub fn split_clusters(e_norm: &[f64], theta: f64) -> (Vec<usize>, Vec<usize>) {
    (0..e_norm.len()).partition(|&j| e_norm[j] >= theta)
}

/// Box-plot summary of a unit's member distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub upper_whisker: f64,
}

/// Linear interpolation at position `(n - 1) q` of an ascending sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn cluster_distance_stats(distances: &[f64], tau: f64) -> Result<BoxStats> {
    if distances.is_empty() {
        return invalid("box-plot statistics need at least one distance");
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok(BoxStats {
        q1,
        q3,
        iqr,
        upper_whisker: q3 + tau * iqr,
    })
}

fn cutoff(distances: &[f64], tau: f64, rule: WhiskerRule) -> Result<f64> {
    match rule {
        WhiskerRule::Coefficient => Ok(cluster_distance_stats(distances, tau)?.upper_whisker),
        WhiskerRule::Coverage => {
            if distances.is_empty() {
                return invalid("box-plot statistics need at least one distance");
            }
            let mut sorted = distances.to_vec();
            sorted.sort_by(f64::total_cmp);
            Ok(quantile_sorted(&sorted, tau.clamp(0.0, 1.0)))
        }
    }
}

/// Members of salient units lying strictly beyond their unit's cut-off,
/// ascending by instance index.
pub fn element_outliers(
    assignment: &[usize],
    distances: &[f64],
    salient_units: &[usize],
    tau: f64,
    rule: WhiskerRule,
) -> Result<Vec<usize>> {
    if assignment.len() != distances.len() {
        return invalid(format!(
            "{} assignments for {} distances",
            assignment.len(),
            distances.len()
        ));
    }
    let mut flagged = Vec::new();
    for &unit in salient_units {
        let members: Vec<usize> = (0..assignment.len())
            .filter(|&i| assignment[i] == unit)
            .collect();
        if members.is_empty() {
            continue;
        }
        let d: Vec<f64> = members.iter().map(|&i| distances[i]).collect();
        let limit = cutoff(&d, tau, rule)?;
        flagged.extend(members.into_iter().filter(|&i| distances[i] > limit));
    }
    flagged.sort_unstable();
    Ok(flagged)
}

/// Outcome of a rectifying training run.
#[derive(Debug, Clone, PartialEq)]
pub struct RectifiedClustering {
    pub config: RsomConfig,
    pub map: SomMap,
    /// Raw cumulative excitation scores.
    pub excitation: Vec<f64>,
    pub e_norm: Vec<f64>,
    pub salient_units: Vec<usize>,
    pub outlier_units: Vec<usize>,
    /// Final winner of each instance.
    pub assignment: Vec<usize>,
    /// Distance of each instance to its final winner's weight.
    pub distances: Vec<f64>,
    pub element_outliers: Vec<usize>,
    /// Surviving members of each salient unit.
    pub retained: BTreeMap<usize, Vec<usize>>,
}

impl RectifiedClustering {
    /// Every discarded instance (outlier-unit members and outlier elements),
    /// ascending.
    pub fn discarded(&self) -> Vec<usize> {
        let mut out = self.outlier_unit_members();
        out.extend_from_slice(&self.element_outliers);
        out.sort_unstable();
        out
    }

    pub fn outlier_unit_members(&self) -> Vec<usize> {
        let mut is_outlier = vec![false; self.e_norm.len()];
        for &j in &self.outlier_units {
            is_outlier[j] = true;
        }
        (0..self.assignment.len())
            .filter(|&i| is_outlier[self.assignment[i]])
            .collect()
    }

    /// `(instance, unit)` pairs of retained instances, ascending by instance.
    pub fn retained_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .retained
            .iter()
            .flat_map(|(&u, members)| members.iter().map(move |&i| (i, u)))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

/// Train once while accumulating excitation, then classify units and prune
/// elements from a single assignment pass over the final weights.
pub fn rectify(dataset: &Dataset, config: &RsomConfig) -> Result<RectifiedClustering> {
    config.validate()?;
    let mut ledger = ExcitationLedger::new(config.som.units());
    let mut failure = None;
    let (map, _) = som::train_with(dataset, &config.som, |map, epoch| {
        if failure.is_some() {
            return;
        }
        match ledger.record_epoch(&epoch.winners, map.positions(), epoch.eps, epoch.sigma) {
            Ok(()) => ledger.update_excitation(1.0 / epoch.eps),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    let (assignment, distances): (Vec<usize>, Vec<f64>) =
        map.assign(dataset)?.into_iter().unzip();
    let e_norm = normalize_excitation(&ledger.e);
    let (salient_units, outlier_units) = split_clusters(&e_norm, config.theta);
    let element_outliers = element_outliers(
        &assignment,
        &distances,
        &salient_units,
        config.tau,
        config.whisker,
    )?;

    let mut retained: BTreeMap<usize, Vec<usize>> =
        salient_units.iter().map(|&j| (j, Vec::new())).collect();
    let mut flagged = element_outliers.iter().peekable();
    for (i, &unit) in assignment.iter().enumerate() {
        if flagged.peek() == Some(&&i) {
            flagged.next();
            continue;
        }
        if let Some(members) = retained.get_mut(&unit) {
            members.push(i);
        }
    }

    Ok(RectifiedClustering {
        config: config.clone(),
        map,
        excitation: ledger.e,
        e_norm,
        salient_units,
        outlier_units,
        assignment,
        distances,
        element_outliers,
        retained,
    })
}
