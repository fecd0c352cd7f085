//! Data ingestion, synthetic data, baselines, metrics and reporting.

pub mod io;
pub mod kmeans;
pub mod metrics;
pub mod report;
pub mod synth;

pub use io::{load_csv, load_labels, read_csv, write_csv, LabelColumn};
pub use kmeans::{kmeans, KMeansResult};
pub use metrics::{adjusted_rand_index, evaluate, outlier_pr, purity, EvalReport};
pub use report::{read_report, write_report, Report};
pub use synth::{synthesize, BlobSpec, OutlierSpec, SynthSpec, OUTLIER_LABEL};
