//! APO spread strategy: spread construction, fast/slow EMAs, band entries
//! and a mid-band exit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stattests::ema;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyParams {
    pub fast_span: usize,
    pub slow_span: usize,
    /// Enter long the spread below this APO level.
    pub buy_threshold: f64,
    /// Enter short the spread above this APO level.
    pub sell_threshold: f64,
}

impl Default for StrategyParams {
    fn default() -> Self {
        Self { fast_span: 10, slow_span: 40, buy_threshold: -1.0, sell_threshold: 1.0 }
    }
}

impl StrategyParams {
    pub fn validate(&self) -> Result<()> {
        if self.fast_span < 1 || self.fast_span >= self.slow_span {
            return Err(Error::Parameter(format!(
                "spans must satisfy 1 <= fast < slow, got fast={} slow={}",
                self.fast_span, self.slow_span
            )));
        }
        if self.buy_threshold.is_nan() || self.sell_threshold.is_nan() || self.buy_threshold >= self.sell_threshold {
            return Err(Error::Parameter(format!(
                "thresholds must satisfy buy < sell, got buy={} sell={}",
                self.buy_threshold, self.sell_threshold
            )));
        }
        Ok(())
    }

    pub fn with_thresholds(self, (buy, sell): (f64, f64)) -> Self {
        Self { buy_threshold: buy, sell_threshold: sell, ..self }
    }

    /// Exit level: the middle of the entry band, zero for symmetric thresholds.
    pub fn exit_level(&self) -> f64 {
        0.5 * (self.buy_threshold + self.sell_threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadState {
    pub spread: Vec<f64>,
    pub fast_ema: Vec<f64>,
    pub slow_ema: Vec<f64>,
    pub apo: Vec<f64>,
}

impl SpreadState {
    pub fn len(&self) -> usize {
        self.spread.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spread.is_empty()
    }
}

/// `spread_t = s1_t - h·s2_t` with its fast and slow EMAs and `apo = fast - slow`.
pub fn build_spread(s1: &[f64], s2: &[f64], hedge_ratio: f64, params: &StrategyParams) -> Result<SpreadState> {
    params.validate()?;
    if s1.len() != s2.len() {
        return Err(Error::Shape { left: s1.len(), right: s2.len() });
    }
    if s1.len() < params.slow_span {
        return Err(Error::TooShort { needed: params.slow_span, got: s1.len() });
    }
    let spread: Vec<f64> = s1.iter().zip(s2).map(|(a, b)| a - hedge_ratio * b).collect();
    let fast_ema = ema(&spread, params.fast_span)?;
    let slow_ema = ema(&spread, params.slow_span)?;
    let apo = fast_ema.iter().zip(&slow_ema).map(|(f, s)| f - s).collect();
    Ok(SpreadState { spread, fast_ema, slow_ema, apo })
}

/// `(-z·σ, +z·σ)` with `σ` the sample standard deviation of the APO.
pub fn auto_thresholds(train: &SpreadState, z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Parameter(format!("threshold z must be positive and finite, got {z}")));
    }
    let n = train.apo.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let mean = train.apo.iter().sum::<f64>() / n as f64;
    let sigma = (train.apo.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Degenerate("training APO has zero variance; thresholds undefined".into()));
    }
    Ok((-z * sigma, z * sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signal {
    /// Buy leg A, short leg B.
    EnterLong,
    /// Short leg A, buy leg B.
    EnterShort,
    Exit,
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Short = -1,
    Flat = 0,
    Long = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub side: Side,
    /// Signed quantity of leg A.
    pub units_a: f64,
    /// Signed quantity of leg B, `-h·units_a`.
    pub units_b: f64,
    pub entry_bar: Option<usize>,
}

impl Position {
    pub const FLAT: Position = Position { side: Side::Flat, units_a: 0.0, units_b: 0.0, entry_bar: None };

    pub fn is_flat(&self) -> bool {
        self.side == Side::Flat
    }
}

pub fn next_signal(apo: f64, params: &StrategyParams, current: &Position) -> Signal {
    match current.side {
        Side::Flat if apo < params.buy_threshold => Signal::EnterLong,
        Side::Flat if apo > params.sell_threshold => Signal::EnterShort,
        Side::Long if apo >= params.exit_level() => Signal::Exit,
        Side::Short if apo <= params.exit_level() => Signal::Exit,
        _ => Signal::Hold,
    }
}

/// Fixed number of leg-A units per entry; leg B carries `h` times as many.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sizing {
    pub units: f64,
}

impl Default for Sizing {
    fn default() -> Self {
        Self { units: 1.0 }
    }
}

/// Entries apply only from flat, so a position never flips side in one bar.
pub fn position_after(signal: Signal, hedge_ratio: f64, sizing: Sizing, current: &Position, bar: usize) -> Position {
    let open = |side: Side, units_a: f64| Position { side, units_a, units_b: -hedge_ratio * units_a, entry_bar: Some(bar) };
    match (signal, current.side) {
        (Signal::EnterLong, Side::Flat) => open(Side::Long, sizing.units),
        (Signal::EnterShort, Side::Flat) => open(Side::Short, -sizing.units),
        (Signal::Exit, _) => Position::FLAT,
        _ => *current,
    }
}
