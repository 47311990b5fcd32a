//! Bar-by-bar simulation of the spread strategy with per-leg commissions.
//!
//! Fills happen at the signalling bar's close, adjusted by an optional
//! adverse slippage fraction. Every open and every close pays
//! `commission_rate` on the notional of both legs. Short proceeds are
//! credited to cash. Any position still open on the final bar is closed
//! there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategy::{build_spread, next_signal, position_after, Position, Side, Signal, Sizing, StrategyParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExecutionParams {
    pub commission_rate: f64,
    pub initial_capital: f64,
    pub annualization_factor: f64,
    /// Adverse price move per fill, as a fraction of the close.
    pub slippage: f64,
    pub sizing: Sizing,
}

impl Default for ExecutionParams {
    fn default() -> Self {
        Self {
            commission_rate: 0.001,
            initial_capital: 1000.0,
            annualization_factor: 252.0,
            slippage: 0.0,
            sizing: Sizing::default(),
        }
    }
}

impl ExecutionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::Parameter(format!("{what} out of range: {v}")));
        if !(self.commission_rate >= 0.0 && self.commission_rate.is_finite()) {
            return bad("commission_rate", self.commission_rate);
        }
        if !(self.initial_capital > 0.0 && self.initial_capital.is_finite()) {
            return bad("initial_capital", self.initial_capital);
        }
        if !(self.annualization_factor > 0.0 && self.annualization_factor.is_finite()) {
            return bad("annualization_factor", self.annualization_factor);
        }
        if !(0.0..1.0).contains(&self.slippage) {
            return bad("slippage", self.slippage);
        }
        if !(self.sizing.units > 0.0 && self.sizing.units.is_finite()) {
            return bad("sizing.units", self.sizing.units);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeAction {
    OpenLong,
    OpenShort,
    Close,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trade {
    pub bar: usize,
    pub action: TradeAction,
    /// Fill prices.
    pub price_a: f64,
    pub price_b: f64,
    /// Signed quantities traded on this bar.
    pub units_a: f64,
    pub units_b: f64,
    pub commission_paid: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub equity_curve: Vec<f64>,
    pub cash_curve: Vec<f64>,
    pub trades: Vec<Trade>,
    /// `None` when the per-bar returns have zero variance.
    pub sharpe: Option<f64>,
    pub max_drawdown_pct: f64,
    pub total_return_pct: f64,
}

impl BacktestReport {
    pub fn commissions(&self) -> f64 {
        self.trades.iter().map(|t| t.commission_paid).sum()
    }

    pub fn round_trips(&self) -> usize {
        self.trades.iter().filter(|t| t.action == TradeAction::Close).count()
    }
}

fn fill(price: f64, qty: f64, slippage: f64) -> f64 {
    if qty > 0.0 {
        price * (1.0 + slippage)
    } else if qty < 0.0 {
        price * (1.0 - slippage)
    } else {
        price
    }
}

pub fn run_backtest(
    s1: &[f64],
    s2: &[f64],
    hedge_ratio: f64,
    sp: &StrategyParams,
    ep: &ExecutionParams,
) -> Result<BacktestReport> {
    ep.validate()?;
    if !hedge_ratio.is_finite() {
        return Err(Error::Parameter(format!("hedge ratio must be finite, got {hedge_ratio}")));
    }
    if s1.len() != s2.len() {
        return Err(Error::Shape { left: s1.len(), right: s2.len() });
    }
    let needed = sp.slow_span + 2;
    if s1.len() < needed {
        return Err(Error::TooShort { needed, got: s1.len() });
    }
    if let Some(bar) = (0..s1.len()).find(|&t| !(s1[t].is_finite() && s1[t] > 0.0 && s2[t].is_finite() && s2[t] > 0.0)) {
        return Err(Error::NonFinitePrice(bar));
    }
    let state = build_spread(s1, s2, hedge_ratio, sp)?;
    let n = s1.len();
    let last = n - 1;

    let mut cash = ep.initial_capital;
    let mut pos = Position::FLAT;
    let mut trades = Vec::new();
    let mut equity_curve = Vec::with_capacity(n);
    let mut cash_curve = Vec::with_capacity(n);
    equity_curve.push(cash);
    cash_curve.push(cash);

    for t in 1..n {
        let mut signal = next_signal(state.apo[t], sp, &pos);
        if t == last {
            signal = if pos.is_flat() { Signal::Hold } else { Signal::Exit };
        }
        let next = position_after(signal, hedge_ratio, ep.sizing, &pos, t);
        let (qa, qb) = (next.units_a - pos.units_a, next.units_b - pos.units_b);
        if qa != 0.0 || qb != 0.0 {
            let (pa, pb) = (fill(s1[t], qa, ep.slippage), fill(s2[t], qb, ep.slippage));
            let commission = ep.commission_rate * (qa.abs() * pa + qb.abs() * pb);
            cash -= qa * pa + qb * pb + commission;
            let action = match next.side {
                Side::Long => TradeAction::OpenLong,
                Side::Short => TradeAction::OpenShort,
                Side::Flat => TradeAction::Close,
            };
            trades.push(Trade { bar: t, action, price_a: pa, price_b: pb, units_a: qa, units_b: qb, commission_paid: commission });
        }
        pos = next;
        let equity = cash + pos.units_a * s1[t] + pos.units_b * s2[t];
        if !(equity > 0.0) {
            return Err(Error::Accounting { bar: t, equity });
        }
        equity_curve.push(equity);
        cash_curve.push(cash);
    }

    Ok(BacktestReport {
        sharpe: sharpe(&equity_curve, ep.annualization_factor),
        max_drawdown_pct: max_drawdown(&equity_curve)?,
        total_return_pct: total_return(&equity_curve),
        equity_curve,
        cash_curve,
        trades,
    })
}

/// Annualized mean over sample standard deviation of per-bar simple returns.
pub fn sharpe(equity_curve: &[f64], annualization: f64) -> Option<f64> {
    if equity_curve.len() < 3 {
        return None;
    }
    let r: Vec<f64> = equity_curve.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let var = r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    (std > 0.0 && std.is_finite()).then(|| mean / std * annualization.sqrt())
}

/// Largest peak-relative decline, in percent.
pub fn max_drawdown(equity_curve: &[f64]) -> Result<f64> {
    if equity_curve.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let mut peak = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for (bar, &e) in equity_curve.iter().enumerate() {
        if !(e > 0.0) {
            return Err(Error::Accounting { bar, equity: e });
        }
        peak = peak.max(e);
        worst = worst.max((peak - e) / peak);
    }
    Ok(worst * 100.0)
}

/// `(final / initial - 1) · 100`; zero for an empty curve.
pub fn total_return(equity_curve: &[f64]) -> f64 {
    match (equity_curve.first(), equity_curve.last()) {
        (Some(first), Some(last)) => (last / first - 1.0) * 100.0,
        _ => 0.0,
    }
}
