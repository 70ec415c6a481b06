use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Observed pairs `(y_t, z_t)`, the only input the estimators see.
///
/// Row `t` of `z` is the regressor vector `z_t'`. Construction validates
/// shape and finiteness, so every estimator can assume a clean sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSample {
    y: DVector<f64>,
    z: DMatrix<f64>,
}

impl RegressionSample {
    pub fn new(y: DVector<f64>, z: DMatrix<f64>) -> Result<Self> {
        let (n, p) = z.shape();
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "y has {} rows but Z has {n}",
                y.len()
            )));
        }
        if p == 0 {
            return Err(Error::DimensionMismatch("Z has no columns".into()));
        }
        if n < p {
            return Err(Error::DimensionMismatch(format!("n = {n} is smaller than p = {p}")));
        }
        if let Some(row) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "y", row });
        }
        for row in 0..n {
            if z.row(row).iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { what: "Z", row });
            }
        }
        Ok(Self { y, z })
    }

    /// Builds a sample from row-major regressor rows.
    pub fn from_rows(y: &[f64], rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} columns, expected {p}",
                rows[bad].len()
            )));
        }
        let z = DMatrix::from_fn(rows.len(), p, |i, k| rows[i][k]);
        Self::new(DVector::from_column_slice(y), z)
    }

    /// Builds a sample with a leading intercept column followed by `columns`.
    pub fn with_intercept(y: &[f64], columns: &[&[f64]]) -> Result<Self> {
        let n = y.len();
        if let Some(bad) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "regressor {bad} has length {}, expected {n}",
                columns[bad].len()
            )));
        }
        let z = DMatrix::from_fn(n, columns.len() + 1, |i, k| if k == 0 { 1.0 } else { columns[k - 1][i] });
        Self::new(DVector::from_column_slice(y), z)
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.z.nrows()
    }

    pub fn p(&self) -> usize {
        self.z.ncols()
    }

    /// Regressor row `t` as an owned vector.
    pub fn z_row(&self, t: usize) -> Vec<f64> {
        self.z.row(t).iter().copied().collect()
    }

    /// Rows selected by `keep`, in order.
    pub fn select_rows(&self, keep: &[usize]) -> Result<Self> {
        let z = DMatrix::from_fn(keep.len(), self.p(), |i, k| self.z[(keep[i], k)]);
        let y = DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.y[i]));
        Self::new(y, z)
    }

    pub fn into_parts(self) -> (DVector<f64>, DMatrix<f64>) {
        (self.y, self.z)
    }
}
