//! MacKinnon (1994) response-surface approximation to the asymptotic
//! distribution of Dickey-Fuller type statistics.
//!
//! Coefficients are the published "constant" (`c`) case for one series
//! (plain ADF) and two series (Engle-Granger residual test), identical to
//! the tables shipped with statsmodels' `adfvalues` module.

use statrs::distribution::{ContinuousCDF, Normal};

/// Which response surface to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    /// ADF regression with a constant, one variable.
    AdfConstant,
    /// Engle-Granger residual test, two variables, constant in the cointegrating regression.
    EngleGranger2,
}

struct Coefficients {
    max: f64,
    min: f64,
    star: f64,
    small_p: [f64; 3],
    large_p: [f64; 4],
}

const ADF_C: Coefficients = Coefficients {
    max: 2.74,
    min: -18.83,
    star: -1.61,
    small_p: [2.1659, 1.4412, 3.8269e-2],
    large_p: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
};

const EG_C2: Coefficients = Coefficients {
    max: 0.92,
    min: -18.86,
    star: -2.62,
    small_p: [2.92, 1.5012, 3.9796e-2],
    large_p: [2.1945, 6.4695e-1, -2.9198e-1, -4.2377e-2],
};

fn polyval(coef: &[f64], x: f64) -> f64 {
    // Coefficients are stored lowest order first.
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Asymptotic p-value of a unit-root t-statistic.
pub fn pvalue(statistic: f64, surface: Surface) -> f64 {
    let c = match surface {
        Surface::AdfConstant => &ADF_C,
        Surface::EngleGranger2 => &EG_C2,
    };
    if statistic.is_nan() {
        return f64::NAN;
    }
    if statistic > c.max {
        return 1.0;
    }
    if statistic < c.min {
        return 0.0;
    }
    let z = if statistic <= c.star { polyval(&c.small_p, statistic) } else { polyval(&c.large_p, statistic) };
    Normal::standard().cdf(z)
}
