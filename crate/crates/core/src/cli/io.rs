//! Dataset, mask and output file handling.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};

use super::CliError;
use crate::missing::MissingMask;
use crate::sample::RegressionSample;

/// Parsed CSV dataset. `date` columns are dropped, a `mask` column (1 =
/// observed) is split off, and the remaining columns are kept in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    /// Column-major values, one `Vec` per retained column.
    pub columns: Vec<Vec<f64>>,
    pub mask: Option<Vec<bool>>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// First column as `y`, the rest as `z` (optionally after a constant).
    pub fn regression(&self, intercept: bool) -> Result<RegressionSample, CliError> {
        if self.columns.is_empty() || (self.columns.len() < 2 && !intercept) {
            return Err(CliError::Input(
                "regression data needs a y column and at least one regressor column (or --intercept)".into(),
            ));
        }
        let n = self.n();
        let mut z_cols: Vec<&[f64]> = Vec::new();
        let ones = vec![1.0; n];
        if intercept {
            z_cols.push(&ones);
        }
        z_cols.extend(self.columns[1..].iter().map(Vec::as_slice));
        let z = DMatrix::from_fn(n, z_cols.len(), |t, k| z_cols[k][t]);
        Ok(RegressionSample::new(DVector::from_column_slice(&self.columns[0]), z)?)
    }

    /// Named column, or the first retained column.
    pub fn series(&self, column: Option<&str>) -> Result<&[f64], CliError> {
        let idx = match column {
            Some(name) => self
                .names
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| CliError::Input(format!("no column named `{name}`")))?,
            None if self.columns.is_empty() => return Err(CliError::Input("dataset has no numeric column".into())),
            None => 0,
        };
        Ok(&self.columns[idx])
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_dataset(text: &str) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("line 1: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(CliError::Input("line 1: missing header".into()));
    }
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| !matches!(header[i].to_ascii_lowercase().as_str(), "date" | "mask"))
        .collect();
    let mask_col = header.iter().position(|h| h.eq_ignore_ascii_case("mask"));

    let mut columns = vec![Vec::new(); keep.len()];
    let mut mask = mask_col.map(|_| Vec::new());
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        for (slot, &c) in keep.iter().enumerate() {
            let field = &record[c];
            let value: f64 = field
                .parse()
                .map_err(|_| CliError::Input(format!("line {line}: column `{}`: `{field}` is not a number", header[c])))?;
            if !value.is_finite() {
                return Err(CliError::Input(format!("line {line}: column `{}` is not finite", header[c])));
            }
            columns[slot].push(value);
        }
        if let (Some(c), Some(m)) = (mask_col, mask.as_mut()) {
            m.push(match &record[c] {
                "1" => true,
                "0" => false,
                other => return Err(CliError::Input(format!("line {line}: mask value `{other}` is not 0 or 1"))),
            });
        }
    }
    if columns.first().is_none_or(Vec::is_empty) && mask.as_ref().is_none_or(Vec::is_empty) {
        return Err(CliError::Input("dataset has no data rows".into()));
    }
    Ok(Dataset { names: keep.iter().map(|&c| header[c].clone()).collect(), columns, mask })
}

/// Mask file: either one 0/1 per line (1 = observed) or a JSON list of
/// 1-based missing indices.
pub fn parse_mask(text: &str, n: usize) -> Result<MissingMask, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let missing: Vec<usize> =
            serde_json::from_str(trimmed).map_err(|e| CliError::Input(format!("mask JSON: {e}")))?;
        if let Some(bad) = missing.iter().find(|&&i| i == 0 || i > n) {
            return Err(CliError::Input(format!("mask index {bad} outside 1..={n}")));
        }
        let zero_based: Vec<usize> = missing.iter().map(|i| i - 1).collect();
        return Ok(MissingMask::from_missing(n, &zero_based)?);
    }
    let mut tau = Vec::with_capacity(n);
    for (i, line) in trimmed.lines().enumerate() {
        tau.push(match line.trim() {
            "1" => true,
            "0" => false,
            other => return Err(CliError::Input(format!("mask line {}: `{other}` is not 0 or 1", i + 1))),
        });
    }
    if tau.len() != n {
        return Err(CliError::Input(format!("mask has {} entries for {n} observations", tau.len())));
    }
    Ok(MissingMask::new(tau)?)
}

/// Mask from `--mask FILE`, else from the dataset's mask column.
pub fn resolve_mask(file: Option<&Path>, data: &Dataset) -> Result<Option<MissingMask>, CliError> {
    match (file, &data.mask) {
        (Some(path), _) => Ok(Some(parse_mask(&read_text(path)?, data.n())?)),
        (None, Some(tau)) => Ok(Some(MissingMask::new(tau.clone())?)),
        (None, None) => Ok(None),
    }
}

/// Writes CSV rows (header first) to `dir/name`, creating `dir`.
pub fn write_csv(dir: &Path, name: &str, rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, csv_string(rows)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn csv_string(rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_bytes(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_with_date_and_mask() {
        let d = parse_dataset("date,y,z1,mask\n2001-01-02,1.5,2,1\n2001-01-03,2.5,3,0\n").unwrap();
        assert_eq!(d.names, vec!["y", "z1"]);
        assert_eq!(d.columns, vec![vec![1.5, 2.5], vec![2.0, 3.0]]);
        assert_eq!(d.mask, Some(vec![true, false]));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_dataset("y,z\n1,2\n3,abc\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_dataset("y,z,mask\n1,2,1\n3,4,2\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_dataset("y,z\n1,2\n3\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn mask_formats() {
        let a = parse_mask("1\n1\n0\n1\n", 4).unwrap();
        let b = parse_mask("[3]", 4).unwrap();
        assert_eq!(a, b);
        assert!(parse_mask("[0]", 4).is_err());
        assert!(parse_mask("[5]", 4).is_err());
        assert!(parse_mask("1\n1\n", 4).is_err());
        assert!(parse_mask("1\n2\n1\n1", 4).is_err());
    }

    #[test]
    fn round_trip_numbers() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.12345679] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
