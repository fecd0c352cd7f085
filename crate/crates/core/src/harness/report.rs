//! JSON report of a rectified clustering.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::metrics::EvalReport;
use crate::error::{Error, Result};
use crate::rectifier::{RectifiedClustering, RsomConfig};

/// Serialized form of a [`RectifiedClustering`]. Field order is the key
/// order in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RsomConfig,
    pub e_norm: Vec<f64>,
    pub salient_units: Vec<usize>,
    pub outlier_units: Vec<usize>,
    pub assignment: Vec<usize>,
    pub element_outliers: Vec<usize>,
    pub retained: BTreeMap<usize, Vec<usize>>,
    pub weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalReport>,
}

impl Report {
    pub fn new(result: &RectifiedClustering, eval: Option<&EvalReport>) -> Self {
        Self {
            config: result.config.clone(),
            e_norm: result.e_norm.clone(),
            salient_units: result.salient_units.clone(),
            outlier_units: result.outlier_units.clone(),
            assignment: result.assignment.clone(),
            element_outliers: result.element_outliers.clone(),
            retained: result.retained.clone(),
            weights: result.map.weights().map(<[f64]>::to_vec).collect(),
            eval: eval.cloned(),
        }
    }

    /// Members of outlier units plus outlier elements, ascending.
    pub fn discarded(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.assignment.len())
            .filter(|&i| self.outlier_units.contains(&self.assignment[i]))
            .collect();
        out.extend_from_slice(&self.element_outliers);
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }
}

pub fn write_report(
    result: &RectifiedClustering,
    eval: Option<&EvalReport>,
    path: &Path,
) -> Result<()> {
    let json = Report::new(result, eval).to_json();
    File::create(path)
        .and_then(|mut f| f.write_all(json.as_bytes()))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn read_report(path: &Path) -> Result<Report> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
