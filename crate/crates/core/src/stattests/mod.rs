//! Unit-root, cointegration and mean-reversion statistics.

mod adf;
mod coint;
pub mod mackinnon;
mod meanrev;
mod ols;

pub use adf::{adf_test, schwert_max_lags, AdfResult};
pub use coint::{engle_granger, CointResult};
pub use meanrev::{
    ema, half_life, hurst_exponent, mean_reversion_stats, zero_crossings, HalfLife, MeanReversionStats,
    DEFAULT_HURST_LAGS,
};
pub use ols::{ols_fit, OlsFit};
