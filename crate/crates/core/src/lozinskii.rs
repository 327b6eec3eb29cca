//! Lozinskii measures (logarithmic norms) for the 1-, 2- and infinity-norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{symmetric_eigenvalues, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    One,
    Two,
    Inf,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [MeasureKind::One, MeasureKind::Two, MeasureKind::Inf];
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureKind::One => "one",
            MeasureKind::Two => "two",
            MeasureKind::Inf => "inf",
        };
        f.write_str(s)
    }
}

impl FromStr for MeasureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "one" | "1" | "mu1" => Ok(MeasureKind::One),
            "two" | "2" | "mu2" => Ok(MeasureKind::Two),
            "inf" | "infinity" | "mu_inf" => Ok(MeasureKind::Inf),
            other => Err(Error::Argument(format!(
                "unknown measure {:?} (expected one, two or inf)",
                other
            ))),
        }
    }
}

/// Operator norm induced by the chosen vector norm.
pub fn induced_norm(a: &Matrix, kind: MeasureKind) -> Result<f64> {
    a.order()?;
    match kind {
        MeasureKind::One => Ok(a.norm_one()),
        MeasureKind::Inf => Ok(a.norm_inf()),
        MeasureKind::Two => {
            let ata = a.transpose().matmul(a)?;
            let top = symmetric_eigenvalues(&symmetrize(&ata))?.last().copied().unwrap_or(0.0);
            Ok(top.max(0.0).sqrt())
        }
    }
}

/// `(A + A^T) / 2`, exactly symmetric.
fn symmetrize(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// Lozinskii measure of `a`.
///
/// `One` takes the largest column value `a_jj + sum_{i != j} |a_ij|`, `Inf`
/// the row analogue, and `Two` the largest eigenvalue of the symmetric part.
pub fn measure(a: &Matrix, kind: MeasureKind) -> Result<f64> {
    let n = a.order()?;
    if n == 0 {
        return Ok(0.0);
    }
    match kind {
        MeasureKind::Inf => Ok((0..n)
            .map(|i| a[(i, i)] + (0..n).filter(|&k| k != i).map(|k| a[(i, k)].abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)),
        MeasureKind::One => Ok((0..n)
            .map(|j| a[(j, j)] + (0..n).filter(|&i| i != j).map(|i| a[(i, j)].abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)),
        MeasureKind::Two => {
            let vals = symmetric_eigenvalues(&symmetrize(a))?;
            Ok(*vals.last().expect("non-empty spectrum"))
        }
    }
}

/// Finite-step evaluation of the defining limit `(||I + hA|| - 1) / h`.
///
/// The norm excess `||I + hA|| - 1` is accumulated directly instead of
/// forming the norm and subtracting 1, which would cancel almost every
/// significant digit at the step sizes of interest.
pub fn measure_limit_probe(a: &Matrix, kind: MeasureKind, h: f64) -> Result<f64> {
    let n = a.order()?;
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::Argument(format!("probe step h = {} must lie in (0, 1e-3]", h)));
    }
    if n == 0 {
        return Ok(0.0);
    }
    // |1 + x| - 1 without cancellation
    let unit_excess = |x: f64| if 1.0 + x >= 0.0 { x } else { -2.0 - x };
    match kind {
        MeasureKind::Inf => Ok((0..n)
            .map(|i| {
                let off: f64 = (0..n).filter(|&k| k != i).map(|k| (h * a[(i, k)]).abs()).sum();
                (unit_excess(h * a[(i, i)]) + off) / h
            })
            .fold(f64::NEG_INFINITY, f64::max)),
        MeasureKind::One => Ok((0..n)
            .map(|j| {
                let off: f64 = (0..n).filter(|&i| i != j).map(|i| (h * a[(i, j)]).abs()).sum();
                (unit_excess(h * a[(j, j)]) + off) / h
            })
            .fold(f64::NEG_INFINITY, f64::max)),
        MeasureKind::Two => {
            // (I + hA)^T (I + hA) = I + hK with K = A + A^T + h A^T A, so
            // ||I + hA||_2 - 1 = sqrt(1 + h k) - 1 = h k / (sqrt(1 + h k) + 1).
            let ata = a.transpose().matmul(a)?;
            let k = Matrix::from_fn(n, n, |i, j| {
                a[(i, j)] + a[(j, i)] + h * 0.5 * (ata[(i, j)] + ata[(j, i)])
            });
            let top = *symmetric_eigenvalues(&k)?.last().expect("non-empty spectrum");
            Ok(top / ((1.0 + h * top).sqrt() + 1.0))
        }
    }
}
