use serde::{Deserialize, Serialize};

use super::adf::{schwert_max_lags, unit_root_statistic, Deterministic};
use super::mackinnon::{pvalue, Surface};
use super::ols::ols_fit;
use crate::error::{Error, Result};

/// Outcome of the two-step Engle-Granger test of `y` on `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointResult {
    /// Step-one OLS slope of `y` on `x`.
    pub hedge_ratio: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    /// Residual unit-root statistic; `-inf` when degenerate.
    pub statistic: f64,
    pub p_value: f64,
    pub lags_used: usize,
    /// The two series are (almost) perfectly collinear; the test is uninformative
    /// and `p_value` is reported as 0.
    pub degenerate: bool,
}

/// Step one regresses `y` on `x` with an intercept; step two runs a
/// no-constant ADF (AIC lags up to Schwert's bound) on the residuals and
/// evaluates the two-variable MacKinnon surface.
pub fn engle_granger(y: &[f64], x: &[f64]) -> Result<CointResult> {
    if y.len() != x.len() {
        return Err(Error::Shape { left: y.len(), right: x.len() });
    }
    if y.len() < 30 {
        return Err(Error::TooShort { needed: 30, got: y.len() });
    }
    let fit = ols_fit(y, x, true)?;
    let collinear = fit.r_squared >= 1.0 - 100.0 * f64::EPSILON.sqrt();
    let (statistic, lags_used) = if collinear {
        (f64::NEG_INFINITY, 0)
    } else {
        match unit_root_statistic(&fit.residuals, schwert_max_lags(y.len()), Deterministic::None) {
            Ok((stat, lags, _)) => (stat, lags),
            Err(Error::Degenerate(_)) => (f64::NEG_INFINITY, 0),
            Err(e) => return Err(e),
        }
    };
    let degenerate = statistic == f64::NEG_INFINITY;
    Ok(CointResult {
        hedge_ratio: fit.slope,
        intercept: fit.intercept,
        residuals: fit.residuals,
        statistic,
        p_value: if degenerate { 0.0 } else { pvalue(statistic, Surface::EngleGranger2) },
        lags_used,
        degenerate,
    })
}
