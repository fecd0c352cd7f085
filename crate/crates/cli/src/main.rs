//! `rsom` command-line interface.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or parameter
//! values), 2 for data, parse and IO errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rsom::harness::{self, LabelColumn, Report};
use rsom::pyramid::{classify, fuse, FusionConfig, PyramidConfidences};
use rsom::{estimate_k, grid_shape, rectify, Dataset, RsomConfig, SomConfig, WhiskerRule};

#[derive(Parser)]
#[command(name = "rsom", version, about = "Rectifying self-organizing map clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labelled synthetic dataset from a JSON spec.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the number of clusters with PCA and print a grid shape.
    EstimateK {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.4)]
        nu: f64,
    },
    /// Train a rectifying SOM and report salient clusters and outliers.
    Rectify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 0.3)]
        theta: f64,
        #[arg(long, default_value_t = 0.4)]
        tau: f64,
        #[arg(long, value_enum, default_value_t = Whisker::Coefficient)]
        whisker: Whisker,
    },
    /// Train a plain SOM (rectify with theta = 0 and tau = 1e9).
    Train {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Run the k-means baseline.
    Kmeans {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
    },
    /// Score a report against ground-truth labels (negative label = outlier).
    Eval {
        #[arg(long)]
        report: PathBuf,
        /// CSV whose last column holds the integer label of each instance.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Fuse spatial-pyramid confidences into per-class scores and a label.
    Fuse {
        #[arg(long)]
        pyramid: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        sigma_s: f64,
        /// Image centre as `x,y` in normalized coordinates.
        #[arg(long, default_value = "0.5,0.5", value_parser = parse_point)]
        center: [f64; 2],
    },
}

#[derive(Args)]
struct Input {
    #[arg(long = "in")]
    input: PathBuf,
    /// Treat the last CSV column as integer labels.
    #[arg(long, value_enum, default_value_t = LabelCol::None)]
    label_col: LabelCol,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, required_unless_present = "auto_k", requires = "cols")]
    rows: Option<usize>,
    #[arg(long, required_unless_present = "auto_k", requires = "rows")]
    cols: Option<usize>,
    /// Size the grid from a PCA estimate of the cluster count.
    #[arg(long, conflicts_with_all = ["rows", "cols"])]
    auto_k: bool,
    #[arg(long, default_value_t = 0.4)]
    nu: f64,
    #[arg(long, default_value_t = 30)]
    epochs: usize,
    /// Learning-rate schedule `start:end`.
    #[arg(long, default_value = "0.5:0.01", value_parser = parse_range)]
    eps: (f64, f64),
    /// Neighbourhood-width schedule `start:end`; defaults to half the longer
    /// grid side down to 0.3.
    #[arg(long, value_parser = parse_range)]
    sigma: Option<(f64, f64)>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelCol {
    None,
    Last,
}

#[derive(Clone, Copy, ValueEnum)]
enum Whisker {
    Coefficient,
    Coverage,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    match s.split_once(':') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|v| (v, v)),
    }
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok([parse(a)?, parse(b)?])
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<rsom::Error> for Failure {
    fn from(e: rsom::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn usage(e: rsom::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(input: &Input) -> Result<Dataset, Failure> {
    let labels = match input.label_col {
        LabelCol::None => LabelColumn::None,
        LabelCol::Last => LabelColumn::Last,
    };
    Ok(harness::load_csv(&input.input, labels)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn som_config(args: &MapArgs, dataset: &Dataset) -> Result<SomConfig, Failure> {
    let (rows, cols) = match (args.rows, args.cols) {
        (Some(r), Some(c)) => (r, c),
        _ => {
            if !(args.nu > 0.0 && args.nu <= 1.0) {
                return Err(Failure::Usage(format!("nu must lie in (0, 1], got {}", args.nu)));
            }
            let k = estimate_k(dataset, args.nu)?;
            // A map needs at least two units.
            grid_shape(k.max(2))
        }
    };
    let mut cfg = SomConfig {
        epochs: args.epochs,
        eps_start: args.eps.0,
        eps_end: args.eps.1,
        seed: args.seed,
        ..SomConfig::new(rows, cols)
    };
    if let Some((s0, s1)) = args.sigma {
        cfg.sigma_start = s0;
        cfg.sigma_end = s1;
    }
    Ok(cfg)
}

fn run_map(args: &MapArgs, make: impl FnOnce(SomConfig) -> RsomConfig) -> Result<(), Failure> {
    let dataset = load(&args.input)?;
    let config = make(som_config(args, &dataset)?);
    config.validate().map_err(usage)?;
    let result = rectify(&dataset, &config)?;
    let eval = match dataset.labels() {
        Some(labels) => Some(harness::evaluate(&result.assignment, &result.discarded(), labels)?),
        None => None,
    };
    match &args.report {
        Some(path) => harness::write_report(&result, eval.as_ref(), path)?,
        None => print!("{}", Report::new(&result, eval.as_ref()).to_json()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Synth { spec, out } => {
            let spec: harness::SynthSpec = read_json(&spec)?;
            spec.validate().map_err(usage)?;
            let dataset = harness::synthesize(&spec)?;
            harness::write_csv(&dataset, &out)?;
        }
        Command::EstimateK { input, nu } => {
            if !(nu > 0.0 && nu <= 1.0) {
                return Err(Failure::Usage(format!("nu must lie in (0, 1], got {nu}")));
            }
            let dataset = load(&input)?;
            let k = estimate_k(&dataset, nu)?;
            let (rows, cols) = grid_shape(k);
            print_json(&json!({ "k": k, "rows": rows, "cols": cols }));
        }
        Command::Rectify {
            map,
            theta,
            tau,
            whisker,
        } => {
            let whisker = match whisker {
                Whisker::Coefficient => WhiskerRule::Coefficient,
                Whisker::Coverage => WhiskerRule::Coverage,
            };
            run_map(&map, |som| RsomConfig {
                som,
                theta,
                tau,
                whisker,
            })?;
        }
        Command::Train { map } => run_map(&map, RsomConfig::plain)?,
        Command::Kmeans {
            input,
            k,
            seed,
            max_iters,
        } => {
            let dataset = load(&input)?;
            if k == 0 || k > dataset.len() {
                return Err(Failure::Usage(format!(
                    "k must lie in 1..={}, got {k}",
                    dataset.len()
                )));
            }
            let result = harness::kmeans(&dataset, k, seed, max_iters)?;
            let mut value = serde_json::to_value(&result).expect("k-means result serializes");
            if let Some(labels) = dataset.labels() {
                value["ari"] = json!(harness::adjusted_rand_index(&result.assignment, labels)?);
            }
            print_json(&value);
        }
        Command::Eval { report, labels } => {
            let report = harness::read_report(&report)?;
            let labels = harness::load_labels(&labels)?;
            let eval = harness::evaluate(&report.assignment, &report.discarded(), &labels)?;
            print_json(&eval);
        }
        Command::Fuse {
            pyramid,
            sigma_s,
            center,
        } => {
            if !(sigma_s > 0.0 && sigma_s.is_finite()) {
                return Err(Failure::Usage(format!("sigma-s must be positive, got {sigma_s}")));
            }
            let pyramid: PyramidConfidences = read_json(&pyramid)?;
            let config = FusionConfig {
                sigma_s,
                image_center: center,
            };
            let scores = fuse(&pyramid, &config)?;
            print_json(&json!({ "scores": scores, "label": classify(&scores) }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
