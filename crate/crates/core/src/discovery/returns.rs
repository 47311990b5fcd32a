use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PriceTable;

/// Per-ticker simple returns scaled to zero mean and unit population variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnsMatrix {
    pub tickers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ReturnsMatrix {
    pub fn n_tickers(&self) -> usize {
        self.tickers.len()
    }

    pub fn n_returns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

pub fn build_returns_matrix(prices: &PriceTable) -> Result<ReturnsMatrix> {
    if prices.n_dates() < 2 {
        return Err(Error::TooShort { needed: 2, got: prices.n_dates() });
    }
    let mut rows = Vec::with_capacity(prices.n_tickers());
    for (i, ticker) in prices.tickers().iter().enumerate() {
        let closes = prices.closes_at(i);
        if let Some(bar) = closes.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::NonFinitePrice(bar));
        }
        let r: Vec<f64> = closes.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
        let n = r.len() as f64;
        let mean = r.iter().sum::<f64>() / n;
        let std = (r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        if !(std > 1e-12) {
            return Err(Error::ZeroVariance(ticker.clone()));
        }
        rows.push(r.iter().map(|v| (v - mean) / std).collect());
    }
    Ok(ReturnsMatrix { tickers: prices.tickers().to_vec(), rows })
}
