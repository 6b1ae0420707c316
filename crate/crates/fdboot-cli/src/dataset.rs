//! Dataset files: CSV with header `t,<curve-id-1>,...,<curve-id-n>`, grid
//! points ascending in the first column and one column per curve.
//!
//! Values are serialized with 17 significant digits so that a written file
//! re-ingests to bit-identical grids and samples.

use std::path::Path;

use fdboot::{FunctionalSample, Grid};

use crate::errors::{CliError, CliResult};

/// 17-significant-digit serialization; round-trips every f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// A parsed dataset: the sample plus the curve ids from the header.
#[derive(Debug)]
pub struct Dataset {
    pub sample: FunctionalSample,
    pub curve_ids: Vec<String>,
}

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(&format!("opening {}", path.display()), into_io(e)))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::Validation(format!("{}: bad header: {e}", path.display())))?
        .clone();
    if headers.len() < 2 || headers.get(0) != Some("t") {
        return Err(CliError::Validation(format!(
            "{}: header must be \"t,<curve-id>,...\", got {:?}",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let curve_ids: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    for (i, id) in curve_ids.iter().enumerate() {
        if curve_ids[..i].contains(id) {
            return Err(CliError::Validation(format!(
                "{}: duplicate curve id {id:?}",
                path.display()
            )));
        }
    }

    let n = curve_ids.len();
    let mut grid_points = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n];
    for record in reader.records() {
        let record = record
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(grid_points.len() as u64 + 2);
        if record.len() != n + 1 {
            return Err(CliError::Validation(format!(
                "{}: line {line}: expected {} fields, got {}",
                path.display(),
                n + 1,
                record.len()
            )));
        }
        let parse = |field: &str, col: usize| -> CliResult<f64> {
            field.parse::<f64>().map_err(|_| {
                CliError::Validation(format!(
                    "{}: line {line}, column {}: not a number: {field:?}",
                    path.display(),
                    col + 1
                ))
            })
        };
        grid_points.push(parse(&record[0], 0)?);
        for (j, col) in columns.iter_mut().enumerate() {
            col.push(parse(&record[j + 1], j + 1)?);
        }
    }

    let grid = Grid::new(grid_points)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let sample = FunctionalSample::build(grid, &columns)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(Dataset { sample, curve_ids })
}

pub fn write_dataset(path: &Path, sample: &FunctionalSample, ids: &[String]) -> CliResult<()> {
    debug_assert_eq!(ids.len(), sample.n());
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::io(&format!("writing {}", path.display()), into_io(e)))?;
    let mut header = vec!["t".to_string()];
    header.extend_from_slice(ids);
    writer
        .write_record(&header)
        .map_err(|e| CliError::io("writing header", into_io(e)))?;
    for (j, &t) in sample.grid().points().iter().enumerate() {
        let mut record = Vec::with_capacity(sample.n() + 1);
        record.push(fmt_g17(t));
        for i in 0..sample.n() {
            record.push(fmt_g17(sample.row(i)[j]));
        }
        writer
            .write_record(&record)
            .map_err(|e| CliError::io("writing record", into_io(e)))?;
    }
    writer
        .flush()
        .map_err(|e| CliError::io(&format!("flushing {}", path.display()), e))?;
    Ok(())
}

/// Default curve ids `c001, c002, ...`, zero-padded to the sample size.
pub fn default_ids(n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("c{i:0width$}")).collect()
}

fn into_io(err: csv::Error) -> std::io::Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}
