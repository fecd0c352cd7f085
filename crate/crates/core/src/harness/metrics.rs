//! Clustering and outlier-detection metrics.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

fn pairs(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

fn contingency<A, B>(a: &[A], b: &[B]) -> (HashMap<(A, B), u64>, HashMap<A, u64>, HashMap<B, u64>)
where
    A: Hash + Eq + Copy,
    B: Hash + Eq + Copy,
{
    let mut joint = HashMap::new();
    let mut rows = HashMap::new();
    let mut cols = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0) += 1;
        *rows.entry(x).or_insert(0) += 1;
        *cols.entry(y).or_insert(0) += 1;
    }
    (joint, rows, cols)
}

/// Adjusted Rand index from the pair-counting contingency table.
///
/// When the expected and maximum indices coincide (both labelings put
/// everything in one cluster, or both are all singletons) the partitions are
/// identical and the result is 1.
pub fn adjusted_rand_index<A, B>(a: &[A], b: &[B]) -> Result<f64>
where
    A: Hash + Eq + Copy,
    B: Hash + Eq + Copy,
{
    if a.len() != b.len() {
        return invalid(format!("labelings have lengths {} and {}", a.len(), b.len()));
    }
    let n = a.len() as u64;
    if n < 2 {
        return Ok(1.0);
    }
    let (joint, rows, cols) = contingency(a, b);
    let index: f64 = joint.values().map(|&c| pairs(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| pairs(c)).sum();
    let expected = sum_a * sum_b / pairs(n);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// Fraction of instances that belong to the majority true class of their
/// predicted cluster.
pub fn purity<A, B>(predicted: &[A], truth: &[B]) -> Result<f64>
where
    A: Hash + Eq + Copy,
    B: Hash + Eq + Copy,
{
    if predicted.len() != truth.len() {
        return invalid(format!(
            "labelings have lengths {} and {}",
            predicted.len(),
            truth.len()
        ));
    }
    if predicted.is_empty() {
        return Ok(1.0);
    }
    let (joint, _, _) = contingency(predicted, truth);
    let mut best: HashMap<A, u64> = HashMap::new();
    for (&(p, _), &c) in &joint {
        let e = best.entry(p).or_insert(0);
        *e = (*e).max(c);
    }
    Ok(best.values().sum::<u64>() as f64 / predicted.len() as f64)
}

/// `(precision, recall)` of a flagged set against the true outliers. An empty
/// flagged set has precision 1; an empty truth set has recall 1.
pub fn outlier_pr(flagged: &[usize], truth: &[usize]) -> (f64, f64) {
    let flagged: BTreeSet<usize> = flagged.iter().copied().collect();
    let truth: BTreeSet<usize> = truth.iter().copied().collect();
    let hits = flagged.intersection(&truth).count() as f64;
    let precision = if flagged.is_empty() {
        1.0
    } else {
        hits / flagged.len() as f64
    };
    let recall = if truth.is_empty() {
        1.0
    } else {
        hits / truth.len() as f64
    };
    (precision, recall)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// ARI of the unit assignment against the true classes, over retained
    /// instances that belong to a true class (label >= 0).
    pub ari: f64,
    /// Purity over the same instances.
    pub purity: f64,
    pub outlier_precision: f64,
    pub outlier_recall: f64,
    pub retained_count: usize,
    pub discarded_count: usize,
}

/// Score a clustering with discards against ground-truth labels, where a
/// negative label marks a true outlier.
pub fn evaluate(assignment: &[usize], discarded: &[usize], labels: &[i64]) -> Result<EvalReport> {
    if assignment.len() != labels.len() {
        return invalid(format!(
            "{} assignments for {} labels",
            assignment.len(),
            labels.len()
        ));
    }
    if let Some(&i) = discarded.iter().find(|&&i| i >= labels.len()) {
        return invalid(format!("discarded index {i} out of range"));
    }
    let mut is_discarded = vec![false; labels.len()];
    for &i in discarded {
        is_discarded[i] = true;
    }
    let (pred, truth): (Vec<usize>, Vec<i64>) = (0..labels.len())
        .filter(|&i| !is_discarded[i] && labels[i] >= 0)
        .map(|i| (assignment[i], labels[i]))
        .unzip();
    let true_outliers: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] < 0).collect();
    let (outlier_precision, outlier_recall) = outlier_pr(discarded, &true_outliers);
    let discarded_count = is_discarded.iter().filter(|&&d| d).count();
    Ok(EvalReport {
        ari: adjusted_rand_index(&pred, &truth)?,
        purity: purity(&pred, &truth)?,
        outlier_precision,
        outlier_recall,
        retained_count: labels.len() - discarded_count,
        discarded_count,
    })
}
