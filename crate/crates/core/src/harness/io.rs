use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Whether the final CSV column carries integer labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LabelColumn {
    #[default]
    None,
    Last,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_csv(path: &Path, labels: LabelColumn) -> Result<Dataset> {
    let file = File::open(path).map_err(io_err(path))?;
    read_csv(file, labels)
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader)
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Parse comma-separated reals, one instance per row, row order preserved.
pub fn read_csv<R: Read>(reader: R, labels: LabelColumn) -> Result<Dataset> {
    let mut rdr = csv_reader(reader);
    let mut data = Vec::new();
    let mut label_values = Vec::new();
    let mut width = None;
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record_line(&record);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} columns, found {}",
                    width.unwrap_or(0),
                    record.len()
                ),
            });
        }
        let features = match labels {
            LabelColumn::None => record.len(),
            LabelColumn::Last => {
                if record.len() < 2 {
                    return Err(Error::Parse {
                        line,
                        message: "label column requested but row has a single column".into(),
                    });
                }
                let cell = &record[record.len() - 1];
                label_values.push(cell.parse::<i64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("label {cell:?} is not an integer"),
                })?);
                record.len() - 1
            }
        };
        for cell in record.iter().take(features) {
            let v = cell.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("{cell:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("{cell:?} is not finite"),
                });
            }
            data.push(v);
        }
    }
    let dim = match (width, labels) {
        (None, _) => {
            return Err(Error::Parse {
                line: 0,
                message: "no data rows".into(),
            })
        }
        (Some(w), LabelColumn::None) => w,
        (Some(w), LabelColumn::Last) => w - 1,
    };
    let ds = Dataset::from_flat(data, dim)?;
    match labels {
        LabelColumn::None => Ok(ds),
        LabelColumn::Last => ds.with_labels(label_values),
    }
}

/// Integer labels from the last column of every row.
pub fn load_labels(path: &Path) -> Result<Vec<i64>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv_reader(file);
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record_line(&record);
        let Some(cell) = record.iter().next_back().filter(|c| !c.is_empty()) else {
            continue;
        };
        labels.push(cell.parse::<i64>().map_err(|_| Error::Parse {
            line,
            message: format!("label {cell:?} is not an integer"),
        })?);
    }
    Ok(labels)
}

/// Write instances (and labels as a last column, when present).
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    for (i, row) in dataset.rows().enumerate() {
        let mut line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        if let Some(labels) = dataset.labels() {
            line.push(',');
            line.push_str(&labels[i].to_string());
        }
        writeln!(out, "{line}").map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_rows() {
        let ds = read_csv("1.0,2.0\n3.0,4.0".as_bytes(), LabelColumn::None).unwrap();
        assert_eq!((ds.len(), ds.dim()), (2, 2));
        assert_eq!(ds.row(1), &[3.0, 4.0]);
        assert!(ds.labels().is_none());
    }

    #[test]
    fn label_column() {
        let ds = read_csv("1,2,0\n3,4,1\n".as_bytes(), LabelColumn::Last).unwrap();
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels(), Some(&[0, 1][..]));
        let err = read_csv("1,2,0.5\n".as_bytes(), LabelColumn::Last).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn ragged_row_names_line() {
        let err = read_csv("1,2\n3".as_bytes(), LabelColumn::None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn non_numeric_cell() {
        let err = read_csv("1,2\n3,x\n".as_bytes(), LabelColumn::None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(read_csv("nan,1\n".as_bytes(), LabelColumn::None).is_err());
        assert!(read_csv("".as_bytes(), LabelColumn::None).is_err());
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        let ds = Dataset::new(vec![vec![0.1, -2.5], vec![1e-7, 3.0]])
            .unwrap()
            .with_labels(vec![4, -1])
            .unwrap();
        write_csv(&ds, &path).unwrap();
        assert_eq!(load_csv(&path, LabelColumn::Last).unwrap(), ds);
        assert_eq!(load_labels(&path).unwrap(), vec![4, -1]);
    }
}
