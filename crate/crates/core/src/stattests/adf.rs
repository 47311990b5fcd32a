use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::mackinnon::{pvalue, Surface};
use super::ols::Moments;
use crate::error::{Error, Result};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deterministic {
    Constant,
    None,
}

impl Deterministic {
    fn count(self) -> usize {
        match self {
            Deterministic::Constant => 1,
            Deterministic::None => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub p_value: f64,
    pub lags_used: usize,
    pub n_obs: usize,
}

/// Schwert's rule of thumb, `floor(12 (n/100)^(1/4))`.
pub fn schwert_max_lags(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Augmented Dickey-Fuller test with a constant, AIC lag selection over
/// `0..=max_lags`, and a MacKinnon p-value.
pub fn adf_test(series: &[f64], max_lags: usize) -> Result<AdfResult> {
    if series.len() < max_lags + 10 {
        return Err(Error::TooShort { needed: max_lags + 10, got: series.len() });
    }
    let (statistic, lags_used, n_obs) = unit_root_statistic(series, max_lags, Deterministic::Constant)?;
    Ok(AdfResult { statistic, p_value: pvalue(statistic, Surface::AdfConstant), lags_used, n_obs })
}

/// t-ratio on the lagged level, the selected lag order and the number of
/// observations in the final regression.
///
/// Lag selection fits every candidate on the common sample implied by the
/// largest lag; the chosen model is then refit on its own full sample.
pub(crate) fn unit_root_statistic(series: &[f64], max_lags: usize, det: Deterministic) -> Result<(f64, usize, usize)> {
    let n = series.len();
    let ntrend = det.count();
    let max_lags = max_lags.min((n / 2).saturating_sub(ntrend + 1));
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("non-finite value in series".into()));
    }
    let diff: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    if diff.iter().all(|d| *d == 0.0) {
        return Err(Error::Degenerate("constant series".into()));
    }

    let best = if max_lags == 0 {
        0
    } else {
        let ncols = ntrend + 1 + max_lags;
        let rows: Vec<Vec<f64>> = (max_lags..diff.len()).map(|t| design_row(series, &diff, t, max_lags, det)).collect();
        let moments = Moments::accumulate(ncols, rows.iter().map(Vec::as_slice).zip(diff[max_lags..].iter().copied()));
        let mut best = (f64::INFINITY, 0);
        for lag in 0..=max_lags {
            if let Some(aic) = moments.aic(ntrend + 1 + lag) {
                if aic < best.0 {
                    best = (aic, lag);
                }
            }
        }
        best.1
    };

    let rows: Vec<Vec<f64>> = (best..diff.len()).map(|t| design_row(series, &diff, t, best, det)).collect();
    let k = ntrend + 1 + best;
    let m = rows.len();
    let x = DMatrix::from_fn(m, k, |i, j| rows[i][j]);
    let y = DVector::from_column_slice(&diff[best..]);
    let qr = x.clone().qr();
    let r = qr.r();
    let qty = qr.q().transpose() * &y;
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Degenerate("rank-deficient unit-root regression".into()))?;
    let resid = &y - &x * &coef;
    let rss = resid.dot(&resid);
    let df = m.checked_sub(k).filter(|&d| d > 0).ok_or(Error::TooShort { needed: k + 1, got: m })?;
    let sigma2 = rss / df as f64;
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("rank-deficient unit-root regression".into()))?;
    let level = ntrend;
    let var = sigma2 * (0..k).map(|c| r_inv[(level, c)].powi(2)).sum::<f64>();
    if !(var > 0.0) {
        return Err(Error::Degenerate("zero residual variance in unit-root regression".into()));
    }
    Ok((coef[level] / var.sqrt(), best, m))
}

// Columns: [constant?] level y_{t}, then diff_{t-1} .. diff_{t-lags}; response diff_t.
fn design_row(series: &[f64], diff: &[f64], t: usize, lags: usize, det: Deterministic) -> Vec<f64> {
    let mut row = Vec::with_capacity(det.count() + 1 + lags);
    if det == Deterministic::Constant {
        row.push(1.0);
    }
    row.push(series[t]);
    row.extend((1..=lags).map(|i| diff[t - i]));
    row
}
