use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::optics::{ClusterLabels, NOISE};
use crate::error::{Error, Result};
use crate::ingest::PriceTable;
use crate::stattests::{engle_granger, mean_reversion_stats};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairCandidate {
    pub ticker_a: String,
    pub ticker_b: String,
    pub cluster_id: i32,
}

impl PairCandidate {
    /// Orders the two tickers lexicographically.
    pub fn new(a: &str, b: &str, cluster_id: i32) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self { ticker_a: a.to_string(), ticker_b: b.to_string(), cluster_id }
    }
}

/// Every unordered pair inside each non-noise cluster, by cluster id and
/// then lexicographically.
pub fn enumerate_pairs(labels: &ClusterLabels) -> Vec<PairCandidate> {
    let mut clusters: BTreeMap<i32, Vec<&str>> = BTreeMap::new();
    for (ticker, &label) in labels.tickers.iter().zip(&labels.labels) {
        if label != NOISE {
            clusters.entry(label).or_default().push(ticker);
        }
    }
    let mut out = Vec::new();
    for (id, mut members) in clusters {
        members.sort_unstable();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                out.push(PairCandidate::new(a, b, id));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub pair: PairCandidate,
    pub hedge_ratio: f64,
    pub coint_p: f64,
    pub half_life: f64,
    pub hurst: f64,
    pub cross_count: usize,
}

/// Engle-Granger of `a` on `b` in price levels, then mean-reversion
/// statistics of the spread `a - h·b`.
pub fn score_pair(train_prices: &PriceTable, pair: &PairCandidate) -> Result<PairStats> {
    let a = train_prices.closes(&pair.ticker_a).ok_or_else(|| Error::UnknownTicker(pair.ticker_a.clone()))?;
    let b = train_prices.closes(&pair.ticker_b).ok_or_else(|| Error::UnknownTicker(pair.ticker_b.clone()))?;
    if pair.ticker_a == pair.ticker_b {
        return Err(Error::Degenerate(format!("pair {} with itself", pair.ticker_a)));
    }
    let coint = engle_granger(a, b)?;
    if coint.degenerate {
        return Err(Error::Degenerate(format!("{} and {} are collinear", pair.ticker_a, pair.ticker_b)));
    }
    let h = coint.hedge_ratio;
    let spread: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - h * y).collect();
    let mr = mean_reversion_stats(&spread)?;
    Ok(PairStats {
        pair: pair.clone(),
        hedge_ratio: h,
        coint_p: coint.p_value,
        half_life: mr.half_life,
        hurst: mr.hurst,
        cross_count: mr.cross_count,
    })
}

/// Each threshold is optional; `None` disables that test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionCriteria {
    /// Keep `coint_p <= max_coint_p`.
    pub max_coint_p: Option<f64>,
    pub min_half_life: Option<f64>,
    pub max_half_life: Option<f64>,
    /// Keep `hurst < max_hurst`.
    pub max_hurst: Option<f64>,
    pub min_cross: Option<usize>,
}

impl SelectionCriteria {
    /// `coint_p <= 0.05`, `1 <= half_life <= train_len / 2`, `hurst < 0.5`, at least one crossing.
    pub fn defaults(train_len: usize) -> Self {
        Self {
            max_coint_p: Some(0.05),
            min_half_life: Some(1.0),
            max_half_life: Some(train_len as f64 / 2.0),
            max_hurst: Some(0.5),
            min_cross: Some(1),
        }
    }

    pub fn accepts(&self, s: &PairStats) -> bool {
        self.max_coint_p.is_none_or(|m| s.coint_p <= m)
            && self.min_half_life.is_none_or(|m| s.half_life >= m)
            && self.max_half_life.is_none_or(|m| s.half_life <= m)
            && self.max_hurst.is_none_or(|m| s.hurst < m)
            && self.min_cross.is_none_or(|m| s.cross_count >= m)
    }
}

pub fn filter_pairs(stats: &[PairStats], criteria: &SelectionCriteria) -> Vec<PairStats> {
    stats.iter().filter(|s| criteria.accepts(s)).cloned().collect()
}
