//! ESG descriptive statistics and universe selection.
//!
//! Every operation works on an as-of snapshot: the latest record of each
//! firm at or before the requested month. A firm whose latest record has no
//! score counts as missing even when an older record was scored.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{EsgRecord, EsgTable, Month};

pub const HISTOGRAM_BIN_WIDTH: f64 = 5.0;
pub const HISTOGRAM_BINS: usize = 20;
const MARGIN_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirmScore {
    pub ticker: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlyMean {
    pub month: Month,
    pub mean: f64,
    pub n_scored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsgSummary {
    pub as_of: Month,
    pub mean_firm_score: f64,
    /// Mean of the per-industry means.
    pub mean_industry_score: f64,
    pub n_firms: usize,
    /// Industries carried by at least one scored firm.
    pub n_industries: usize,
    pub n_missing: usize,
    pub top_firm: FirmScore,
    pub bottom_firm: FirmScore,
    pub industry_means: BTreeMap<String, f64>,
    /// Bins `[0,5), [5,10), …, [95,100]`.
    pub histogram: Vec<HistogramBin>,
    /// Mean score of every month up to `as_of`, over all records of that month.
    pub monthly_means: Vec<MonthlyMean>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionMethod {
    TopOfIndustry,
    AboveIndustryMean,
}

impl SelectionMethod {
    fn parameter_name(self) -> &'static str {
        match self {
            SelectionMethod::TopOfIndustry => "zeta",
            SelectionMethod::AboveIndustryMean => "xi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    pub tickers: Vec<String>,
    pub method: SelectionMethod,
    pub parameter: f64,
    pub as_of: Month,
}

impl Universe {
    pub fn contains(&self, ticker: &str) -> bool {
        self.tickers.binary_search_by(|t| t.as_str().cmp(ticker)).is_ok()
    }
}

/// Latest record per ticker at or before `as_of`, ordered by ticker.
pub fn snapshot(esg: &EsgTable, as_of: Month) -> Vec<&EsgRecord> {
    let mut latest: BTreeMap<&str, &EsgRecord> = BTreeMap::new();
    for r in esg.records().iter().filter(|r| r.month <= as_of) {
        let slot = latest.entry(&r.ticker).or_insert(r);
        if r.month > slot.month {
            *slot = r;
        }
    }
    latest.into_values().collect()
}

fn scored<'a>(records: &[&'a EsgRecord]) -> Vec<(&'a EsgRecord, f64)> {
    records.iter().filter_map(|r| r.score.map(|s| (*r, s))).collect()
}

/// Mean score per industry label over scored firms carrying that label.
pub fn industry_means(records: &[&EsgRecord]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (r, s) in scored(records) {
        for label in &r.industries {
            let e = acc.entry(label).or_insert((0.0, 0));
            e.0 += s;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (sum, n))| (k.to_string(), sum / n as f64)).collect()
}

fn histogram(scores: impl Iterator<Item = f64>) -> Vec<HistogramBin> {
    let mut counts = [0usize; HISTOGRAM_BINS];
    for s in scores {
        let bin = ((s / HISTOGRAM_BIN_WIDTH).floor() as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramBin { lower: i as f64 * HISTOGRAM_BIN_WIDTH, count })
        .collect()
}

pub fn summarize(esg: &EsgTable, as_of: Month) -> Result<EsgSummary> {
    let snap = snapshot(esg, as_of);
    let firms = scored(&snap);
    if firms.is_empty() {
        return Err(Error::EmptySummary(as_of.to_string()));
    }
    let mean_firm_score = firms.iter().map(|(_, s)| s).sum::<f64>() / firms.len() as f64;
    let means = industry_means(&snap);
    let mean_industry_score = means.values().sum::<f64>() / means.len() as f64;

    // Ties resolve to the lexicographically first ticker since `firms` is ticker-ordered.
    let mut top = firms[0];
    let mut bottom = firms[0];
    for &(r, s) in &firms[1..] {
        if s > top.1 {
            top = (r, s);
        }
        if s < bottom.1 {
            bottom = (r, s);
        }
    }

    let mut monthly: BTreeMap<Month, (f64, usize)> = BTreeMap::new();
    for r in esg.records().iter().filter(|r| r.month <= as_of) {
        if let Some(s) = r.score {
            let e = monthly.entry(r.month).or_insert((0.0, 0));
            e.0 += s;
            e.1 += 1;
        }
    }

    Ok(EsgSummary {
        as_of,
        mean_firm_score,
        mean_industry_score,
        n_firms: snap.len(),
        n_industries: means.len(),
        n_missing: snap.len() - firms.len(),
        top_firm: FirmScore { ticker: top.0.ticker.clone(), score: top.1 },
        bottom_firm: FirmScore { ticker: bottom.0.ticker.clone(), score: bottom.1 },
        industry_means: means,
        histogram: histogram(firms.iter().map(|(_, s)| *s)),
        monthly_means: monthly
            .into_iter()
            .map(|(month, (sum, n))| MonthlyMean { month, mean: sum / n as f64, n_scored: n })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndustryScore {
    pub industry: String,
    pub mean: f64,
}

/// The `k` highest- and `k` lowest-mean industries. Ties go to the
/// lexicographically smaller label in both lists.
pub fn rank_industries(summary: &EsgSummary, k: usize) -> Result<(Vec<IndustryScore>, Vec<IndustryScore>)> {
    let n = summary.industry_means.len();
    if k > n {
        return Err(Error::Bounds { requested: k, available: n });
    }
    let mut all: Vec<IndustryScore> = summary
        .industry_means
        .iter()
        .map(|(industry, &mean)| IndustryScore { industry: industry.clone(), mean })
        .collect();
    all.sort_by(|a, b| b.mean.total_cmp(&a.mean).then_with(|| a.industry.cmp(&b.industry)));
    let top = all[..k].to_vec();
    all.sort_by(|a, b| a.mean.total_cmp(&b.mean).then_with(|| a.industry.cmp(&b.industry)));
    let bottom = all[..k].to_vec();
    Ok((top, bottom))
}

fn finish(tickers: BTreeSet<&str>, method: SelectionMethod, parameter: f64, as_of: Month) -> Result<Universe> {
    if tickers.is_empty() {
        return Err(Error::EmptySelection { method: method.parameter_name(), parameter });
    }
    Ok(Universe { tickers: tickers.into_iter().map(str::to_string).collect(), method, parameter, as_of })
}

/// Approach 1: in each industry keep the highest-scoring firm (all of them
/// when tied) provided its score strictly exceeds `zeta`.
pub fn select_top_of_industry(esg: &EsgTable, as_of: Month, zeta: f64) -> Result<Universe> {
    if !(0.0..=100.0).contains(&zeta) {
        return Err(Error::Parameter(format!("zeta must lie in [0, 100], got {zeta}")));
    }
    let snap = snapshot(esg, as_of);
    let firms = scored(&snap);
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for (r, s) in &firms {
        for label in &r.industries {
            let e = best.entry(label).or_insert(f64::NEG_INFINITY);
            *e = e.max(*s);
        }
    }
    let picked = firms
        .iter()
        .filter(|(r, s)| *s > zeta && r.industries.iter().any(|l| best[l.as_str()] == *s))
        .map(|(r, _)| r.ticker.as_str())
        .collect();
    finish(picked, SelectionMethod::TopOfIndustry, zeta, as_of)
}

/// Approach 2: keep every firm scoring at least `xi` above the mean of any
/// one of its industries.
pub fn select_above_industry_mean(esg: &EsgTable, as_of: Month, xi: f64) -> Result<Universe> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::Parameter(format!("xi must be a finite value >= 0, got {xi}")));
    }
    let snap = snapshot(esg, as_of);
    let means = industry_means(&snap);
    let picked = scored(&snap)
        .into_iter()
        .filter(|(r, s)| r.industries.iter().any(|l| *s >= means[l] + xi - MARGIN_EPS))
        .map(|(r, _)| r.ticker.as_str())
        .collect();
    finish(picked, SelectionMethod::AboveIndustryMean, xi, as_of)
}
