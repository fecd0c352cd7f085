//! Weighted spatial-pyramid fusion of per-grid classifier confidences.
//!
//! For every class `c`:
//!
//! ```text
//! D_c = sum_l sum_grids 2^-(3 - l) * h_c * exp(-|x_hat - x|^2 / (2 sigma_s^2))
//! ```
//!
//! where `x` is the grid centre and `x_hat` the image centre, both in
//! normalized image coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub center: [f64; 2],
    pub conf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidLevel {
    pub level: u8,
    pub grids: Vec<Grid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidConfidences {
    pub levels: Vec<PyramidLevel>,
}

impl PyramidConfidences {
    /// Checks the level layout and returns the class count `C`.
    pub fn validate(&self) -> Result<usize> {
        if self.levels.len() != LEVELS {
            return invalid(format!(
                "pyramid must have {LEVELS} levels, got {}",
                self.levels.len()
            ));
        }
        let mut seen = [false; LEVELS];
        for lvl in &self.levels {
            level_weight(lvl.level)?;
            let slot = &mut seen[lvl.level as usize - 1];
            if *slot {
                return invalid(format!("level {} appears twice", lvl.level));
            }
            *slot = true;
        }
        let mut classes = None;
        for (lvl, grid) in self.grids() {
            let c = grid.conf.len();
            if c == 0 {
                return invalid(format!("empty confidence vector at level {lvl}"));
            }
            if grid.conf.iter().chain(&grid.center).any(|v| !v.is_finite()) {
                return invalid(format!("non-finite value at level {lvl}"));
            }
            match classes {
                None => classes = Some(c),
                Some(expected) if expected != c => {
                    return invalid(format!(
                        "confidence vector of length {c} at level {lvl}, expected {expected}"
                    ))
                }
                _ => {}
            }
        }
        match classes {
            Some(c) => Ok(c),
            None => invalid("pyramid contains no grids"),
        }
    }

    fn grids(&self) -> impl Iterator<Item = (u8, &Grid)> {
        self.levels
            .iter()
            .flat_map(|l| l.grids.iter().map(move |g| (l.level, g)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    /// Width of the centre prior, in normalized image units.
    pub sigma_s: f64,
    pub image_center: [f64; 2],
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            sigma_s: 0.25,
            image_center: [0.5, 0.5],
        }
    }
}

/// `1 / 2^(3 - l)` for `l` in `1..=3`.
pub fn level_weight(level: u8) -> Result<f64> {
    match level {
        1..=3 => Ok(1.0 / f64::from(1u32 << (3 - level))),
        _ => invalid(format!("pyramid level must be 1, 2 or 3, got {level}")),
    }
}

pub fn center_prior(x: [f64; 2], x_hat: [f64; 2], sigma_s: f64) -> f64 {
    let d2 = (x_hat[0] - x[0]).powi(2) + (x_hat[1] - x[1]).powi(2);
    (-d2 / (2.0 * sigma_s * sigma_s)).exp()
}

/// Per-class fused scores.
pub fn fuse(pyramid: &PyramidConfidences, config: &FusionConfig) -> Result<Vec<f64>> {
    if !(config.sigma_s > 0.0) {
        return invalid(format!("sigma_s must be positive, got {}", config.sigma_s));
    }
    let classes = pyramid.validate()?;
    let mut scores = vec![0.0; classes];
    for (level, grid) in pyramid.grids() {
        let coef = level_weight(level)? * center_prior(grid.center, config.image_center, config.sigma_s);
        for (s, &h) in scores.iter_mut().zip(&grid.conf) {
            *s += coef * h;
        }
    }
    Ok(scores)
}

/// Index of the largest score, lowest index on ties.
pub fn classify(scores: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pyramid(grids: [Vec<Grid>; 3]) -> PyramidConfidences {
        let [a, b, c] = grids;
        PyramidConfidences {
            levels: vec![
                PyramidLevel { level: 1, grids: a },
                PyramidLevel { level: 2, grids: b },
                PyramidLevel { level: 3, grids: c },
            ],
        }
    }

    fn at_center(conf: Vec<f64>) -> Grid {
        Grid {
            center: [0.5, 0.5],
            conf,
        }
    }

    #[test]
    fn weights() {
        assert_eq!(level_weight(3).unwrap(), 1.0);
        assert_eq!(level_weight(2).unwrap(), 0.5);
        assert_eq!(level_weight(1).unwrap(), 0.25);
        assert!(level_weight(0).is_err());
        assert!(level_weight(4).is_err());
    }

    #[test]
    fn prior() {
        assert_eq!(center_prior([0.3, 0.8], [0.3, 0.8], 0.1), 1.0);
        // |d|^2 = 0.25 + 0.25 = 0.5
        assert_abs_diff_eq!(
            center_prior([0.0, 0.0], [0.5, 0.5], 0.5),
            (-1.0f64).exp(),
            epsilon = 1e-12
        );
        assert!(center_prior([0.0, 0.0], [0.5, 0.5], 1e6) > 1.0 - 1e-12);
    }

    #[test]
    fn fusion_examples() {
        let cfg = FusionConfig::default();
        let p = pyramid([vec![], vec![], vec![at_center(vec![0.7])]]);
        assert_abs_diff_eq!(fuse(&p, &cfg).unwrap()[0], 0.7, epsilon = 1e-12);

        let p = pyramid([vec![at_center(vec![1.0])], vec![], vec![]]);
        assert_abs_diff_eq!(fuse(&p, &cfg).unwrap()[0], 0.25, epsilon = 1e-12);

        let one = pyramid([vec![], vec![at_center(vec![0.3, 0.6])], vec![]]);
        let two = pyramid([
            vec![],
            vec![at_center(vec![0.3, 0.6]), at_center(vec![0.3, 0.6])],
            vec![],
        ]);
        let a = fuse(&one, &cfg).unwrap();
        let b = fuse(&two, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(2.0 * x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn invalid_pyramids() {
        let cfg = FusionConfig::default();
        let ragged = pyramid([vec![at_center(vec![1.0])], vec![at_center(vec![1.0, 2.0])], vec![]]);
        assert!(fuse(&ragged, &cfg).is_err());
        let mut two_levels = pyramid([vec![at_center(vec![1.0])], vec![], vec![]]);
        two_levels.levels.pop();
        assert!(fuse(&two_levels, &cfg).is_err());
        let mut dup = pyramid([vec![at_center(vec![1.0])], vec![], vec![]]);
        dup.levels[2].level = 2;
        assert!(fuse(&dup, &cfg).is_err());
        let empty = pyramid([vec![], vec![], vec![]]);
        assert!(fuse(&empty, &cfg).is_err());
        let p = pyramid([vec![at_center(vec![1.0])], vec![], vec![]]);
        assert!(fuse(&p, &FusionConfig { sigma_s: 0.0, ..cfg }).is_err());
    }

    #[test]
    fn argmax() {
        assert_eq!(classify(&[0.2, 0.9]), Some(1));
        assert_eq!(classify(&[0.5, 0.5]), Some(0));
        assert_eq!(classify(&[]), None);
    }
}
