use crate::error::{invalid, Result};

/// `M` instances of dimension `D`, stored row-major, with optional integer
/// ground-truth labels used only for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    data: Vec<f64>,
    dim: usize,
    labels: Option<Vec<i64>>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match rows.first() {
            Some(r) => r.len(),
            None => return invalid("dataset must contain at least one instance"),
        };
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return invalid(format!(
                    "instance {i} has dimension {}, expected {dim}",
                    row.len()
                ));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, dim)
    }

    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be at least 1");
        }
        if data.is_empty() {
            return invalid("dataset must contain at least one instance");
        }
        if !data.len().is_multiple_of(dim) {
            return invalid(format!(
                "{} values do not divide into rows of dimension {dim}",
                data.len()
            ));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return invalid(format!(
                "non-finite value in instance {} component {}",
                pos / dim,
                pos % dim
            ));
        }
        Ok(Self {
            data,
            dim,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.len() {
            return invalid(format!(
                "{} labels for {} instances",
                labels.len(),
                self.len()
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Number of instances `M`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Instance dimension `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Per-dimension `(min, max)` over all instances.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.row(0).to_vec();
        let mut hi = lo.clone();
        for row in self.rows() {
            for ((l, h), &v) in lo.iter_mut().zip(hi.iter_mut()).zip(row) {
                *l = l.min(v);
                *h = h.max(v);
            }
        }
        (lo, hi)
    }

    /// Component-wise mean of all instances.
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for row in self.rows() {
            for (m, &v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        let n = self.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }
}

pub(crate) fn sq_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        assert!(Dataset::new(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Dataset::new(vec![vec![1.0, f64::NAN]]).is_err());
        assert!(Dataset::new(vec![vec![f64::INFINITY]]).is_err());
    }

    #[test]
    fn rejects_empty_and_zero_dim() {
        assert!(Dataset::new(vec![]).is_err());
        assert!(Dataset::new(vec![vec![]]).is_err());
    }

    #[test]
    fn label_count_must_match() {
        let ds = Dataset::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(ds.clone().with_labels(vec![0]).is_err());
        assert_eq!(ds.with_labels(vec![0, 1]).unwrap().labels(), Some(&[0, 1][..]));
    }

    #[test]
    fn bounding_box_and_mean() {
        let ds = Dataset::new(vec![vec![0.0, 5.0], vec![2.0, -1.0]]).unwrap();
        assert_eq!(ds.bounding_box(), (vec![0.0, -1.0], vec![2.0, 5.0]));
        assert_eq!(ds.mean(), vec![1.0, 2.0]);
    }
}
