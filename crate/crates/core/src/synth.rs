//! Seeded synthetic series and a planted-pair market.
//!
//! The market has a common random-walk factor, one random-walk factor per
//! sector, idiosyncratic random walks, and in every sector one planted pair
//! `A = c + h·B + u` with `u` a stationary AR(1). A few unrelated noise
//! tickers sit outside every sector. The generated ESG file scores every
//! listed firm above its industry mean by padding each industry with
//! low-scoring unlisted firms.

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{EsgRecord, EsgTable, Month, PriceTable};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| sigma * normal(&mut r)).collect()
}

/// Starts at zero.
pub fn random_walk(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let mut level = 0.0;
    (0..n)
        .map(|i| {
            if i > 0 {
                level += sigma * normal(&mut r);
            }
            level
        })
        .collect()
}

/// Zero-mean AR(1) `x_t = phi x_{t-1} + e_t`, started from its stationary
/// distribution when `|phi| < 1` and from zero otherwise.
pub fn ar1(phi: f64, n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    let mut x = if phi.abs() < 1.0 { sigma * normal(&mut r) / (1.0 - phi * phi).sqrt() } else { 0.0 };
    for _ in 0..n {
        out.push(x);
        x = phi * x + sigma * normal(&mut r);
    }
    out
}

/// Weekdays starting at `start` (inclusive when it is a weekday).
pub fn business_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_days: usize,
    pub n_sectors: usize,
    /// Tickers per sector, including the planted pair.
    pub sector_size: usize,
    pub n_noise: usize,
    /// AR(1) coefficient of each planted spread.
    pub phi: f64,
    pub spread_sigma: f64,
    pub market_sigma: f64,
    pub sector_sigma: f64,
    pub idio_sigma: f64,
    pub noise_sigma: f64,
    pub base_price: f64,
    pub hedge_range: (f64, f64),
    pub esg_months: usize,
    pub start_date: NaiveDate,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_days: 750,
            n_sectors: 3,
            sector_size: 6,
            n_noise: 2,
            phi: 0.7,
            spread_sigma: 0.5,
            market_sigma: 0.5,
            sector_sigma: 1.0,
            idio_sigma: 0.6,
            noise_sigma: 1.2,
            base_price: 200.0,
            hedge_range: (0.5, 2.0),
            esg_months: 6,
            start_date: NaiveDate::from_ymd_opt(2020, 1, 1).expect("valid date"),
        }
    }
}

/// Generated market plus the ground truth needed to score recovery.
#[derive(Debug, Clone)]
pub struct SynthMarket {
    pub prices: PriceTable,
    pub esg: EsgTable,
    /// Planted pairs as `(dependent, regressor, hedge_ratio)`.
    pub planted: Vec<PlantedPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPair {
    pub ticker_a: String,
    pub ticker_b: String,
    pub hedge_ratio: f64,
}

impl SynthConfig {
    pub fn n_tickers(&self) -> usize {
        self.n_sectors * self.sector_size + self.n_noise
    }

    pub fn validate(&self) -> Result<()> {
        if self.sector_size < 2 || self.n_sectors == 0 {
            return Err(Error::Parameter("synth needs at least one sector of two tickers".into()));
        }
        if self.n_days < 60 {
            return Err(Error::Parameter("synth needs at least 60 days".into()));
        }
        if !(self.phi.abs() < 1.0) {
            return Err(Error::Parameter(format!("planted spread phi must satisfy |phi| < 1, got {}", self.phi)));
        }
        if self.hedge_range.0 > self.hedge_range.1 || self.hedge_range.0 <= 0.0 {
            return Err(Error::Parameter("hedge_range must be positive and ordered".into()));
        }
        Ok(())
    }
}

fn walk(rng: &mut ChaCha8Rng, n: usize, sigma: f64) -> Vec<f64> {
    let mut level = 0.0;
    (0..n)
        .map(|i| {
            if i > 0 {
                level += sigma * normal(rng);
            }
            level
        })
        .collect()
}

fn lift_positive(series: &mut [f64], floor: f64) {
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    if min < floor {
        let shift = floor - min;
        series.iter_mut().for_each(|v| *v += shift);
    }
}

fn sector_letter(j: usize) -> char {
    (b'A' + j as u8) as char
}

pub fn generate_market(cfg: &SynthConfig) -> Result<SynthMarket> {
    cfg.validate()?;
    let n = cfg.n_days;
    let mut r = rng(cfg.seed);
    let market = walk(&mut r, n, cfg.market_sigma);
    let floor = 0.1 * cfg.base_price;

    let mut tickers = Vec::new();
    let mut closes = Vec::new();
    let mut planted = Vec::new();
    let mut industries = Vec::new();

    for s in 0..cfg.n_sectors {
        let sector = walk(&mut r, n, cfg.sector_sigma);
        let industry = format!("Industry {}", s + 1);
        let mut members = Vec::new();
        for j in 1..cfg.sector_size {
            let base = cfg.base_price * r.random_range(0.75..1.25);
            let idio = walk(&mut r, n, cfg.idio_sigma);
            let mut p: Vec<f64> = (0..n).map(|t| base + market[t] + sector[t] + idio[t]).collect();
            lift_positive(&mut p, floor);
            members.push((format!("S{}{}", s + 1, sector_letter(j)), p));
        }
        // Leg A sits on top of the sector's first member (leg B).
        let hedge = r.random_range(cfg.hedge_range.0..=cfg.hedge_range.1);
        let offset = cfg.base_price * r.random_range(0.1..0.5);
        let mut u = Vec::with_capacity(n);
        let mut x = cfg.spread_sigma * normal(&mut r) / (1.0 - cfg.phi * cfg.phi).sqrt();
        for _ in 0..n {
            u.push(x);
            x = cfg.phi * x + cfg.spread_sigma * normal(&mut r);
        }
        let leg_b = &members[0].1;
        let mut leg_a: Vec<f64> = (0..n).map(|t| offset + hedge * leg_b[t] + u[t]).collect();
        lift_positive(&mut leg_a, floor);
        let a_name = format!("S{}A", s + 1);
        planted.push(PlantedPair { ticker_a: a_name.clone(), ticker_b: members[0].0.clone(), hedge_ratio: hedge });
        members.insert(0, (a_name, leg_a));
        for (name, p) in members {
            industries.push((name.clone(), industry.clone()));
            tickers.push(name);
            closes.push(p);
        }
    }
    let noise_industry = format!("Industry {}", cfg.n_sectors + 1);
    for k in 0..cfg.n_noise {
        let base = cfg.base_price * r.random_range(0.75..1.25);
        let own = walk(&mut r, n, cfg.noise_sigma);
        let mut p: Vec<f64> = (0..n).map(|t| base + 0.3 * market[t] + own[t]).collect();
        lift_positive(&mut p, floor);
        let name = format!("N{}", k + 1);
        industries.push((name.clone(), noise_industry.clone()));
        tickers.push(name);
        closes.push(p);
    }

    let calendar = business_days(cfg.start_date, n);
    let prices = PriceTable::new(calendar.clone(), tickers, closes)?;
    let esg = synth_esg(cfg, &mut r, &industries, Month::of(*calendar.last().expect("n_days > 0")))?;
    Ok(SynthMarket { prices, esg, planted })
}

fn synth_esg(
    cfg: &SynthConfig,
    r: &mut ChaCha8Rng,
    listed: &[(String, String)],
    last: Month,
) -> Result<EsgTable> {
    let months = cfg.esg_months.max(1);
    let mut first = last;
    for _ in 1..months {
        first = if first.month == 1 { Month { year: first.year - 1, month: 12 } } else { Month { year: first.year, month: first.month - 1 } };
    }
    let mut firms: Vec<(String, String, f64)> =
        listed.iter().map(|(t, ind)| (t.clone(), ind.clone(), r.random_range(70.0..95.0))).collect();
    let mut industry_names: Vec<&String> = listed.iter().map(|(_, i)| i).collect();
    industry_names.sort();
    industry_names.dedup();
    for (i, industry) in industry_names.iter().enumerate() {
        let count = listed.iter().filter(|(_, ind)| ind == *industry).count();
        for j in 0..count {
            firms.push((format!("U{}{}", i + 1, sector_letter(j)), (*industry).clone(), r.random_range(5.0..30.0)));
        }
    }

    let mut records = Vec::new();
    for (ticker, industry, base) in &firms {
        let mut month = first;
        for _ in 0..months {
            let score = ((base + r.random_range(-2.0..2.0)) * 100.0).round() / 100.0;
            records.push(EsgRecord {
                ticker: ticker.clone(),
                name: format!("{ticker} Ltd"),
                industries: vec![industry.clone()],
                month,
                score: Some(score.clamp(0.01, 100.0)),
            });
            month = month.succ();
        }
    }
    EsgTable::new(records)
}
