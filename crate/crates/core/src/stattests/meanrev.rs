use serde::{Deserialize, Serialize};

use super::ols::{mean, ols_fit};
use crate::error::{Error, Result};

/// Mean-reversion summary of one spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanReversionStats {
    /// Bars for a deviation to halve. Negative when the series diverges;
    /// infinite when `lambda` is exactly zero.
    pub half_life: f64,
    pub lambda: f64,
    pub hurst: f64,
    pub cross_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLife {
    pub half_life: f64,
    pub lambda: f64,
}

impl HalfLife {
    pub fn is_infinite(&self) -> bool {
        self.lambda == 0.0
    }
}

/// Regresses `Δy_t` on `y_{t-1} - mean(y)` with an intercept. The slope is
/// the mean-reversion factor `lambda`; the half-life `-ln 2 / lambda` keeps
/// its sign.
pub fn half_life(series: &[f64]) -> Result<HalfLife> {
    if series.len() < 20 {
        return Err(Error::TooShort { needed: 20, got: series.len() });
    }
    let m = mean(series);
    let lagged: Vec<f64> = series[..series.len() - 1].iter().map(|v| v - m).collect();
    let delta: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let lambda = ols_fit(&delta, &lagged, true)?.slope;
    let half_life = if lambda == 0.0 { f64::INFINITY } else { -std::f64::consts::LN_2 / lambda };
    Ok(HalfLife { half_life, lambda })
}

/// Hurst exponent from the scaling of lagged differences: the slope of
/// `ln sqrt(mean((y_{t+τ} - y_t)^2))` against `ln τ` for `τ` in
/// `min_lag..=max_lag`.
///
/// The second moment is taken about zero, so a deterministic trend scales
/// like `τ` (H = 1) and a random walk like `sqrt(τ)` (H = 0.5).
pub fn hurst_exponent(series: &[f64], min_lag: usize, max_lag: usize) -> Result<f64> {
    if min_lag < 2 || max_lag <= min_lag {
        return Err(Error::Parameter(format!("hurst lags must satisfy 2 <= min < max, got {min_lag}..={max_lag}")));
    }
    if series.len() < 2 * max_lag {
        return Err(Error::TooShort { needed: 2 * max_lag, got: series.len() });
    }
    let mut log_lag = Vec::with_capacity(max_lag - min_lag + 1);
    let mut log_scale = Vec::with_capacity(max_lag - min_lag + 1);
    for tau in min_lag..=max_lag {
        let n = series.len() - tau;
        let msd = (0..n).map(|t| (series[t + tau] - series[t]).powi(2)).sum::<f64>() / n as f64;
        if !(msd > 0.0) || !msd.is_finite() {
            return Err(Error::Degenerate(format!("zero variance of differences at lag {tau}")));
        }
        log_lag.push((tau as f64).ln());
        log_scale.push(0.5 * msd.ln());
    }
    Ok(ols_fit(&log_scale, &log_lag, true)?.slope)
}

/// Exponential moving average with `alpha = 2 / (span + 1)`, seeded with
/// the first observation.
pub fn ema(series: &[f64], span: usize) -> Result<Vec<f64>> {
    if span < 1 {
        return Err(Error::Parameter("EMA span must be >= 1".into()));
    }
    let first = *series.first().ok_or(Error::TooShort { needed: 1, got: 0 })?;
    let alpha = 2.0 / (span as f64 + 1.0);
    let mut out = Vec::with_capacity(series.len());
    let mut prev = first;
    out.push(prev);
    for &y in &series[1..] {
        prev = alpha * y + (1.0 - alpha) * prev;
        out.push(prev);
    }
    Ok(out)
}

/// Sign changes of the mean-centered series. Zeros inherit the previous sign.
pub fn zero_crossings(series: &[f64]) -> usize {
    if series.len() < 2 {
        return 0;
    }
    let m = mean(series);
    let mut crossings = 0;
    let mut last: Option<bool> = None;
    for v in series {
        let c = v - m;
        if c == 0.0 {
            continue;
        }
        let positive = c > 0.0;
        if last.is_some_and(|prev| prev != positive) {
            crossings += 1;
        }
        last = Some(positive);
    }
    crossings
}

/// Half-life, Hurst exponent (default lag range `2..=20`) and crossing count of a spread.
pub fn mean_reversion_stats(spread: &[f64]) -> Result<MeanReversionStats> {
    let hl = half_life(spread)?;
    Ok(MeanReversionStats {
        half_life: hl.half_life,
        lambda: hl.lambda,
        hurst: hurst_exponent(spread, DEFAULT_HURST_LAGS.0, DEFAULT_HURST_LAGS.1)?,
        cross_count: zero_crossings(spread),
    })
}

pub const DEFAULT_HURST_LAGS: (usize, usize) = (2, 20);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{ar1, random_walk};
    use proptest::prelude::*;

    #[test]
    fn alternating_series_half_life() {
        let y: Vec<f64> = (0..40).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let hl = half_life(&y).unwrap();
        assert!((hl.lambda + 2.0).abs() < 1e-12);
        assert!((hl.half_life - std::f64::consts::LN_2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ar1_half_life_close_to_analytic() {
        let y = ar1(0.9, 5000, 1.0, 77);
        let hl = half_life(&y).unwrap();
        let target = std::f64::consts::LN_2 / 0.1;
        assert!((hl.half_life - target).abs() / target < 0.2, "{}", hl.half_life);
    }

    #[test]
    fn explosive_series_has_negative_half_life() {
        let y: Vec<f64> = (0..30).map(|i| 1.05f64.powi(i)).collect();
        assert!(half_life(&y).unwrap().half_life < 0.0);
    }

    #[test]
    fn half_life_errors() {
        assert!(matches!(half_life(&[1.0; 10]), Err(Error::TooShort { .. })));
        assert!(matches!(half_life(&[3.0; 25]), Err(Error::SingularRegressor)));
    }

    #[test]
    fn hurst_of_linear_trend_is_one() {
        let y: Vec<f64> = (0..500).map(f64::from).collect();
        assert!((hurst_exponent(&y, 2, 20).unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn hurst_random_walk_and_ar1() {
        let rw = random_walk(5000, 1.0, 8);
        let h = hurst_exponent(&rw, 2, 20).unwrap();
        assert!((0.45..=0.55).contains(&h), "{h}");
        let ar = ar1(0.2, 5000, 1.0, 8);
        assert!(hurst_exponent(&ar, 2, 20).unwrap() < 0.40);
    }

    #[test]
    fn hurst_errors() {
        assert!(matches!(hurst_exponent(&[1.0; 30], 2, 20), Err(Error::TooShort { .. })));
        assert!(matches!(hurst_exponent(&[1.0; 60], 2, 20), Err(Error::Degenerate(_))));
        assert!(hurst_exponent(&[1.0; 60], 1, 20).is_err());
    }

    #[test]
    fn ema_fixed_point_and_identity() {
        assert_eq!(ema(&[4.0; 6], 7).unwrap(), vec![4.0; 6]);
        let y = [1.0, -2.0, 5.0, 0.5];
        assert_eq!(ema(&y, 1).unwrap(), y.to_vec());
        assert!(ema(&y, 0).is_err());
    }

    #[test]
    fn ema_step_response() {
        // span 3: alpha = 1/2, so after the step e = 1/2, 3/4, 7/8.
        let e = ema(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!(e, vec![0.0, 0.0, 0.0, 0.5, 0.75, 0.875]);
    }

    #[test]
    fn crossings() {
        assert_eq!(zero_crossings(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0]), 5);
        assert_eq!(zero_crossings(&[2.5; 10]), 0);
        // Mean is 0; the zero inherits the positive sign.
        assert_eq!(zero_crossings(&[1.0, 0.0, 1.0, -2.0]), 1);
    }

    #[test]
    fn crossings_match_brute_force_scan() {
        let y = ar1(0.6, 400, 1.0, 31);
        let m = y.iter().sum::<f64>() / y.len() as f64;
        let signs: Vec<f64> = y.iter().map(|v| (v - m).signum()).filter(|s| *s != 0.0).collect();
        let brute = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(zero_crossings(&y), brute);
    }

    proptest! {
        #[test]
        fn ema_bounded_by_running_extremes(ys in prop::collection::vec(-1e3f64..1e3, 1..60), span in 1usize..30) {
            let e = ema(&ys, span).unwrap();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (y, v) in ys.iter().zip(&e) {
                lo = lo.min(*y);
                hi = hi.max(*y);
                prop_assert!(*v >= lo - 1e-9 * lo.abs().max(1.0) && *v <= hi + 1e-9 * hi.abs().max(1.0));
            }
        }

        #[test]
        fn crossings_scale_invariant(y in prop::collection::vec(-10f64..10.0, 2..60), c in 0.01f64..100.0) {
            let scaled: Vec<f64> = y.iter().map(|v| v * c).collect();
            prop_assert_eq!(zero_crossings(&y), zero_crossings(&scaled));
        }

        #[test]
        fn half_life_identity(seed in 0u64..500, phi in 0.1f64..0.95) {
            let hl = half_life(&ar1(phi, 200, 1.0, seed)).unwrap();
            prop_assert!((hl.half_life * hl.lambda + std::f64::consts::LN_2).abs() < 1e-12);
        }
    }
}
