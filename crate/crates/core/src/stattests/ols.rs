use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple least-squares fit of `y` on `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub intercept: f64,
    pub slope: f64,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Closed-form simple regression. Centered two-pass sums keep the slope
/// accurate when the regressor has a large level.
pub fn ols_fit(y: &[f64], x: &[f64], with_intercept: bool) -> Result<OlsFit> {
    if y.len() != x.len() {
        return Err(Error::Shape { left: y.len(), right: x.len() });
    }
    if y.len() < 3 {
        return Err(Error::TooShort { needed: 3, got: y.len() });
    }
    let (intercept, slope) = if with_intercept {
        let (mx, my) = (mean(x), mean(y));
        let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
        if sxx == 0.0 || sxx <= f64::EPSILON * x.iter().map(|v| v * v).sum::<f64>() {
            return Err(Error::SingularRegressor);
        }
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let slope = sxy / sxx;
        (my - slope * mx, slope)
    } else {
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        if sxx == 0.0 {
            return Err(Error::SingularRegressor);
        }
        (0.0, x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sxx)
    };
    let residuals: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - intercept - slope * a).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let my = mean(y);
    let tss: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let r_squared = if tss > 0.0 { (1.0 - rss / tss).clamp(0.0, 1.0) } else { 1.0 };
    Ok(OlsFit { intercept, slope, residuals, r_squared })
}

/// Cross-product moments of a regression, from which any model using a
/// leading subset of the columns can be solved without revisiting the data.
pub(crate) struct Moments {
    xtx: DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    nobs: usize,
}

impl Moments {
    /// `rows` yields one design row per observation, paired with the response.
    pub fn accumulate<'a>(ncols: usize, rows: impl Iterator<Item = (&'a [f64], f64)>) -> Self {
        let mut xtx = DMatrix::zeros(ncols, ncols);
        let mut xty = DVector::zeros(ncols);
        let mut yty = 0.0;
        let mut nobs = 0;
        for (row, y) in rows {
            for i in 0..ncols {
                let ri = row[i];
                xty[i] += ri * y;
                for j in i..ncols {
                    xtx[(i, j)] += ri * row[j];
                }
            }
            yty += y * y;
            nobs += 1;
        }
        for i in 0..ncols {
            for j in 0..i {
                xtx[(i, j)] = xtx[(j, i)];
            }
        }
        Self { xtx, xty, yty, nobs }
    }

    /// Coefficients and residual sum of squares of the regression on the first `k` columns.
    pub fn solve(&self, k: usize) -> Option<(DVector<f64>, f64)> {
        let a = self.xtx.view((0, 0), (k, k)).into_owned();
        let b = self.xty.rows(0, k).into_owned();
        let chol = a.cholesky()?;
        let coef = chol.solve(&b);
        let rss = (self.yty - coef.dot(&b)).max(0.0);
        self.nobs.checked_sub(k).filter(|&d| d > 0)?;
        Some((coef, rss))
    }

    /// Akaike criterion `n ln(RSS/n) + 2k` for the first `k` columns.
    pub fn aic(&self, k: usize) -> Option<f64> {
        let (_, rss) = self.solve(k)?;
        let n = self.nobs as f64;
        Some(n * (rss / n).ln() + 2.0 * k as f64)
    }
}
