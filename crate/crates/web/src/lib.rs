//! Browser bindings for three interactive views: a pair lab, a
//! stationarity lab and a cluster map. Each export takes a JSON request
//! and returns a JSON response, so the page needs no generated types.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use esgpairs::backtest::{run_backtest, ExecutionParams, TradeAction};
use esgpairs::discovery::{build_returns_matrix, optics_cluster, pca_reduce};
use esgpairs::stattests::{adf_test, engle_granger, mean_reversion_stats, schwert_max_lags};
use esgpairs::strategy::{auto_thresholds, build_spread, StrategyParams};
use esgpairs::synth::{ar1, generate_market, random_walk, white_noise, SynthConfig};

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct PairLabRequest {
    pub seed: u64,
    pub n: usize,
    pub phi: f64,
    pub hedge: f64,
    pub spread_sigma: f64,
    pub fast_span: usize,
    pub slow_span: usize,
    pub threshold_z: f64,
    pub commission_rate: f64,
}

impl Default for PairLabRequest {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 500,
            phi: 0.7,
            hedge: 1.5,
            spread_sigma: 1.0,
            fast_span: 10,
            slow_span: 40,
            threshold_z: 1.0,
            commission_rate: 0.001,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TradeMark {
    pub bar: usize,
    pub action: TradeAction,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairLabResponse {
    pub hedge_ratio: f64,
    pub coint_statistic: f64,
    pub coint_p: f64,
    pub half_life: f64,
    pub hurst: f64,
    pub cross_count: usize,
    pub buy_threshold: f64,
    pub sell_threshold: f64,
    pub spread: Vec<f64>,
    pub apo: Vec<f64>,
    pub equity: Vec<f64>,
    pub trades: Vec<TradeMark>,
    pub sharpe: Option<f64>,
    pub max_drawdown_pct: f64,
    pub total_return_pct: f64,
}

/// Planted pair `a = 20 + hedge·b + AR(1)`, tested, then traded on the estimated hedge ratio.
pub fn pair_lab(req: &PairLabRequest) -> esgpairs::Result<PairLabResponse> {
    if !(req.phi.abs() < 1.0) {
        return Err(esgpairs::Error::Parameter(format!("phi must lie in (-1, 1), got {}", req.phi)));
    }
    let b: Vec<f64> = random_walk(req.n, 1.0, req.seed).iter().map(|v| v + 100.0).collect();
    let u = ar1(req.phi, req.n, req.spread_sigma, req.seed.wrapping_add(1));
    let a: Vec<f64> = b.iter().zip(&u).map(|(x, e)| 20.0 + req.hedge * x + e).collect();
    let floor = a.iter().chain(&b).copied().fold(f64::INFINITY, f64::min);
    let lift = if floor < 1.0 { 1.0 - floor } else { 0.0 };
    let (a, b): (Vec<f64>, Vec<f64>) = a.iter().zip(&b).map(|(x, y)| (x + lift, y + lift)).unzip();

    let coint = engle_granger(&a, &b)?;
    let h = coint.hedge_ratio;
    let base = StrategyParams { fast_span: req.fast_span, slow_span: req.slow_span, ..Default::default() };
    let state = build_spread(&a, &b, h, &base)?;
    let params = base.with_thresholds(auto_thresholds(&state, req.threshold_z)?);
    let mr = mean_reversion_stats(&state.spread)?;
    let ep = ExecutionParams { commission_rate: req.commission_rate, ..Default::default() };
    let report = run_backtest(&a, &b, h, &params, &ep)?;
    Ok(PairLabResponse {
        hedge_ratio: h,
        coint_statistic: coint.statistic,
        coint_p: coint.p_value,
        half_life: mr.half_life,
        hurst: mr.hurst,
        cross_count: mr.cross_count,
        buy_threshold: params.buy_threshold,
        sell_threshold: params.sell_threshold,
        spread: state.spread,
        apo: state.apo,
        equity: report.equity_curve,
        trades: report.trades.iter().map(|t| TradeMark { bar: t.bar, action: t.action }).collect(),
        sharpe: report.sharpe,
        max_drawdown_pct: report.max_drawdown_pct,
        total_return_pct: report.total_return_pct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    WhiteNoise,
    Ar1,
    RandomWalk,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct StationarityRequest {
    pub process: Process,
    pub phi: f64,
    pub n: usize,
    pub seed: u64,
}

impl Default for StationarityRequest {
    fn default() -> Self {
        Self { process: Process::Ar1, phi: 0.9, n: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StationarityResponse {
    pub series: Vec<f64>,
    pub adf_statistic: f64,
    pub adf_p: f64,
    pub lags_used: usize,
    pub half_life: f64,
    pub hurst: f64,
    pub cross_count: usize,
}

pub fn stationarity_lab(req: &StationarityRequest) -> esgpairs::Result<StationarityResponse> {
    let series = match req.process {
        Process::WhiteNoise => white_noise(req.n, 1.0, req.seed),
        Process::RandomWalk => random_walk(req.n, 1.0, req.seed),
        Process::Ar1 if req.phi.abs() < 1.0 => ar1(req.phi, req.n, 1.0, req.seed),
        Process::Ar1 => return Err(esgpairs::Error::Parameter(format!("phi must lie in (-1, 1), got {}", req.phi))),
    };
    let adf = adf_test(&series, schwert_max_lags(series.len()))?;
    let mr = mean_reversion_stats(&series)?;
    Ok(StationarityResponse {
        series,
        adf_statistic: adf.statistic,
        adf_p: adf.p_value,
        lags_used: adf.lags_used,
        half_life: mr.half_life,
        hurst: mr.hurst,
        cross_count: mr.cross_count,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct ClusterRequest {
    pub seed: u64,
    pub n_days: usize,
    pub min_samples: usize,
    pub xi: f64,
    pub variance_target: f64,
    pub max_dims: usize,
}

impl Default for ClusterRequest {
    fn default() -> Self {
        Self { seed: 42, n_days: 500, min_samples: 3, xi: 0.05, variance_target: 0.9, max_dims: 10 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterPoint {
    pub ticker: String,
    pub x: f64,
    pub y: f64,
    pub cluster: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterResponse {
    pub points: Vec<ClusterPoint>,
    pub dims: usize,
    pub explained_variance: Vec<f64>,
    pub n_clusters: usize,
    /// Reachability in visit order, for the reachability plot.
    pub reachability: Vec<f64>,
    pub planted: Vec<[String; 2]>,
}

/// Synthetic market, PCA embedding and OPTICS labels; points use the first two components.
pub fn cluster_map(req: &ClusterRequest) -> esgpairs::Result<ClusterResponse> {
    let market = generate_market(&SynthConfig { seed: req.seed, n_days: req.n_days, ..Default::default() })?;
    let returns = build_returns_matrix(&market.prices)?;
    let e = pca_reduce(&returns, req.variance_target, req.max_dims)?;
    let labels = optics_cluster(&e, req.min_samples, req.xi)?;
    let points = e
        .tickers
        .iter()
        .zip(&e.coordinates)
        .zip(&labels.labels)
        .map(|((t, c), &l)| ClusterPoint { ticker: t.clone(), x: c[0], y: c.get(1).copied().unwrap_or(0.0), cluster: l })
        .collect();
    Ok(ClusterResponse {
        points,
        dims: e.dims(),
        n_clusters: labels.n_clusters(),
        reachability: labels.ordering.iter().map(|&i| labels.reachability[i]).collect(),
        explained_variance: e.explained_variance,
        planted: market.planted.into_iter().map(|p| [p.ticker_a, p.ticker_b]).collect(),
    })
}

fn call<Req, Resp>(json: &str, f: impl FnOnce(&Req) -> esgpairs::Result<Resp>) -> Result<String, JsValue>
where
    Req: for<'de> Deserialize<'de>,
    Resp: Serialize,
{
    let req: Req = serde_json::from_str(json).map_err(|e| JsValue::from_str(&format!("bad request: {e}")))?;
    let resp = f(&req).map_err(|e| JsValue::from_str(&e.to_string()))?;
    serde_json::to_string(&resp).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = pairLab)]
pub fn pair_lab_js(request: &str) -> Result<String, JsValue> {
    call(request, pair_lab)
}

#[wasm_bindgen(js_name = stationarityLab)]
pub fn stationarity_lab_js(request: &str) -> Result<String, JsValue> {
    call(request, stationarity_lab)
}

#[wasm_bindgen(js_name = clusterMap)]
pub fn cluster_map_js(request: &str) -> Result<String, JsValue> {
    call(request, cluster_map)
}
