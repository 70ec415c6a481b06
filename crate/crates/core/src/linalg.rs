//! Least-squares kernels shared by the fixed and time-varying estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative threshold on the triangular factor diagonal below which a design
/// is declared rank deficient.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// Solution of a least-squares problem `min |A b - r|` via Householder QR.
#[derive(Debug, Clone)]
pub(crate) struct LsSolution {
    pub coef: DVector<f64>,
    /// `(A'A)^{-1}` assembled as `R^{-1} R^{-T}`.
    pub gram_inv: DMatrix<f64>,
}

/// Ratio `max |R_ii| / min |R_ii|` of the triangular factor.
fn condition_estimate(r: &DMatrix<f64>) -> f64 {
    let diag: Vec<f64> = (0..r.ncols()).map(|i| r[(i, i)].abs()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub(crate) fn solve_least_squares(design: DMatrix<f64>, response: DVector<f64>) -> Result<LsSolution> {
    let (m, p) = design.shape();
    if m < p {
        return Err(Error::RankDeficient { condition: f64::INFINITY });
    }
    let qr = design.qr();
    let r = qr.r();
    let max = (0..p).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let min = (0..p).map(|i| r[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min < RANK_TOL * max {
        return Err(Error::RankDeficient { condition: condition_estimate(&r) });
    }
    let mut qty = response;
    qr.q_tr_mul(&mut qty);
    let head = qty.rows(0, p).into_owned();
    let coef = r
        .solve_upper_triangular(&head)
        .ok_or(Error::RankDeficient { condition: condition_estimate(&r) })?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or(Error::RankDeficient { condition: condition_estimate(&r) })?;
    let gram_inv = symmetrize(&r_inv * r_inv.transpose());
    Ok(LsSolution { coef, gram_inv })
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Sandwich `B^{-1} M B^{-1}`, symmetrized.
pub(crate) fn sandwich(bread_inv: &DMatrix<f64>, meat: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(bread_inv * meat * bread_inv)
}

/// Adds `w * x x'` to the symmetric accumulator `acc`.
pub(crate) fn add_outer(acc: &mut DMatrix<f64>, x: &[f64], w: f64) {
    let p = x.len();
    for a in 0..p {
        let xa = w * x[a];
        for b in 0..p {
            acc[(a, b)] += xa * x[b];
        }
    }
}

/// `y - beta'z` for one observation, accumulated in column order.
pub(crate) fn residual(y: f64, z: &[f64], beta: &[f64]) -> f64 {
    let mut fitted = 0.0;
    for (zk, bk) in z.iter().zip(beta) {
        fitted += zk * bk;
    }
    y - fitted
}

pub(crate) fn diag_sqrt(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.nrows(), (0..m.nrows()).map(|i| m[(i, i)].max(0.0).sqrt()))
}
