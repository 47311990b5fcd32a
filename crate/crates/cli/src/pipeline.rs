//! Staged end-to-end run: load, clean, ESG select, split, discover, score,
//! filter, backtest both windows, emit.
//!
//! Stages run in order on one thread. Scoring and backtesting fan out per
//! pair with rayon and are re-sorted by pair before anything is written.
//! On failure every file written by the run is removed; `manifest.json` is
//! written only after all other artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use esgpairs::backtest::{run_backtest, BacktestReport};
use esgpairs::discovery::{
    build_returns_matrix, enumerate_pairs, filter_pairs, optics_cluster, pca_reduce, score_pair, ClusterLabels,
    PairCandidate, PairStats,
};
use esgpairs::esg::{select_above_industry_mean, select_top_of_industry, summarize, Universe};
use esgpairs::ingest::{clean_and_align, load_esg, load_prices, train_test_split, EsgTable, PriceFormat, PriceTable};
use esgpairs::strategy::{auto_thresholds, build_spread, StrategyParams};
use esgpairs::synth::{generate_market, PlantedPair, SynthConfig};
use esgpairs::ErrorKind;

use crate::config::{PipelineConfig, Stage};
use crate::error::CliError;
use crate::tables::{emit_boxplot_data, emit_pairstats_table, emit_results_table, Metric, PairStatsRow, ResultRow};

/// Cluster id given to pairs supplied explicitly rather than discovered.
pub const EXPLICIT_CLUSTER: i32 = -1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub rows_in: usize,
    pub rows_out: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTrade {
    pub pair1: String,
    pub pair2: String,
    pub hedge_ratio: f64,
    pub buy_threshold: f64,
    pub sell_threshold: f64,
    pub train_round_trips: usize,
    pub test_round_trips: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Replaying this configuration reproduces every artifact byte for byte.
    pub config: PipelineConfig,
    /// Generator settings when prices were synthesized instead of loaded.
    pub synth: Option<SynthConfig>,
    pub planted: Vec<PlantedPair>,
    pub stages: Vec<StageRecord>,
    /// File names relative to the output directory, in write order.
    pub artifacts: Vec<String>,
    pub universe: Vec<String>,
    /// Pairs that passed the filter (or the explicit list), sorted.
    pub selected_pairs: Vec<[String; 2]>,
    /// Discovered pairs whose scoring failed on degenerate data.
    pub unscored_pairs: Vec<[String; 2]>,
    pub trades: Vec<PairTrade>,
    /// Boxplot files not written because the metric was undefined for every pair.
    pub skipped_boxplots: Vec<String>,
}

struct Run<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
    manifest: RunManifest,
}

impl Run<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        self.manifest.artifacts.push(name.to_string());
        p
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let p = self.path(name);
        let text = serde_json::to_string_pretty(value).expect("artifact serializes") + "\n";
        std::fs::write(&p, text).map_err(CliError::io(p))
    }

    fn write_lines(&mut self, name: &str, lines: Vec<String>) -> Result<(), CliError> {
        let p = self.path(name);
        let text: String = lines.into_iter().map(|l| l + "\n").collect();
        std::fs::write(&p, text).map_err(CliError::io(p))
    }

    fn stage<T>(&mut self, name: &str, rows_in: usize, f: impl FnOnce(&mut Self) -> Result<(T, usize), CliError>) -> Result<T, CliError> {
        let start = Instant::now();
        let (value, rows_out) = f(self)?;
        self.manifest.stages.push(StageRecord {
            name: name.to_string(),
            rows_in,
            rows_out,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        Ok(value)
    }

    fn cleanup(&self) {
        for p in &self.written {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// Runs the stages selected in `config`, writing artifacts under `config.output_dir`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunManifest, CliError> {
    config.validate()?;
    let dir = config.output_dir.clone();
    let created = !dir.exists();
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    let mut run = Run {
        dir: &dir,
        written: Vec::new(),
        manifest: RunManifest {
            config: config.clone(),
            synth: None,
            planted: Vec::new(),
            stages: Vec::new(),
            artifacts: Vec::new(),
            universe: Vec::new(),
            selected_pairs: Vec::new(),
            unscored_pairs: Vec::new(),
            trades: Vec::new(),
            skipped_boxplots: Vec::new(),
        },
    };
    match execute(config, &mut run) {
        Ok(()) => {
            let path = run.path("manifest.json");
            let text = serde_json::to_string_pretty(&run.manifest).expect("manifest serializes") + "\n";
            std::fs::write(&path, text).map_err(CliError::io(path)).inspect_err(|_| run.cleanup())?;
            Ok(run.manifest)
        }
        Err(e) => {
            run.cleanup();
            if created {
                let _ = std::fs::remove_dir(&dir);
            }
            Err(e)
        }
    }
}

struct Inputs {
    prices: PriceTable,
    esg: Option<EsgTable>,
}

fn load_inputs(config: &PipelineConfig, run: &mut Run) -> Result<(Inputs, usize), CliError> {
    let stage = CliError::stage("load");
    let Some(prices_path) = &config.input.prices else {
        let synth = SynthConfig { seed: config.seed, ..config.synth.clone() };
        let market = generate_market(&synth).map_err(stage)?;
        run.manifest.synth = Some(synth);
        run.manifest.planted = market.planted;
        let n = market.prices.n_tickers();
        return Ok((Inputs { prices: market.prices, esg: Some(market.esg) }, n));
    };
    let format = PriceFormat { delimiter: config.input.delimiter as u8 };
    let prices = load_prices(prices_path, &format).map_err(CliError::stage("load"))?.table;
    let esg = match &config.input.esg {
        Some(p) => Some(load_esg(p, &config.cleaning).map_err(CliError::stage("load"))?.table),
        None => None,
    };
    let n = prices.n_tickers();
    Ok((Inputs { prices, esg }, n))
}

fn select_universe(config: &PipelineConfig, esg: &EsgTable, run: &mut Run) -> Result<Universe, CliError> {
    let stage = CliError::stage("esg");
    let as_of = match config.esg.as_of.or_else(|| esg.latest_month()) {
        Some(m) => m,
        None => return Err(stage(esgpairs::Error::EmptyInput("ESG table".into()))),
    };
    let summary = summarize(esg, as_of).map_err(CliError::stage("esg"))?;
    run.write_json("esg_summary.json", &summary)?;
    let universe = match config.esg.approach {
        1 => select_top_of_industry(esg, as_of, config.esg.zeta),
        _ => select_above_industry_mean(esg, as_of, config.esg.xi),
    }
    .map_err(CliError::stage("esg"))?;
    Ok(universe)
}

fn discover(config: &PipelineConfig, train: &PriceTable, run: &mut Run) -> Result<Vec<PairCandidate>, CliError> {
    let d = &config.discovery;
    let returns = build_returns_matrix(train).map_err(CliError::stage("discover"))?;
    let embedding = pca_reduce(&returns, d.variance_target, d.max_dims).map_err(CliError::stage("discover"))?;
    let labels = optics_cluster(&embedding, d.min_samples, d.xi_cluster).map_err(CliError::stage("discover"))?;
    run.write_lines("clusters.csv", cluster_lines(&labels))?;
    let pairs = enumerate_pairs(&labels);
    if pairs.is_empty() {
        return Err(CliError::Stage { stage: "discover", source: esgpairs::Error::NoPairs("clustering".into()) });
    }
    Ok(pairs)
}

fn cluster_lines(labels: &ClusterLabels) -> Vec<String> {
    let mut lines = vec!["ticker,cluster,reachability,order".to_string()];
    let mut position = vec![0; labels.tickers.len()];
    for (pos, &i) in labels.ordering.iter().enumerate() {
        position[i] = pos;
    }
    for (i, t) in labels.tickers.iter().enumerate() {
        lines.push(format!("{t},{},{:.6},{}", labels.labels[i], labels.reachability[i], position[i]));
    }
    lines
}

fn score(pairs: &[PairCandidate], train: &PriceTable, explicit: bool, run: &mut Run) -> Result<Vec<PairStats>, CliError> {
    let results: Vec<(PairCandidate, esgpairs::Result<PairStats>)> =
        pairs.par_iter().map(|p| (p.clone(), score_pair(train, p))).collect();
    let mut scored = Vec::new();
    for (pair, r) in results {
        match r {
            Ok(s) => scored.push(s),
            Err(e) if !explicit && e.kind() == ErrorKind::Data => {
                run.manifest.unscored_pairs.push([pair.ticker_a, pair.ticker_b]);
            }
            Err(e) => return Err(CliError::Stage { stage: "score", source: e }),
        }
    }
    scored.sort_by(|a, b| (&a.pair.ticker_a, &a.pair.ticker_b).cmp(&(&b.pair.ticker_a, &b.pair.ticker_b)));
    Ok(scored)
}

/// Applies the criteria, then the optional cap keeping the lowest p-values.
pub fn select_pairs(config: &PipelineConfig, scored: &[PairStats], train_len: usize) -> Vec<PairStats> {
    let mut kept = filter_pairs(scored, &config.selection.criteria(train_len));
    if let Some(cap) = config.selection.max_pairs {
        kept.sort_by(|a, b| a.coint_p.total_cmp(&b.coint_p).then_with(|| a.pair.cmp(&b.pair)));
        kept.truncate(cap);
        kept.sort_by(|a, b| a.pair.cmp(&b.pair));
    }
    kept
}

/// Per-pair detail file: thresholds plus both windows' equity curves and trade logs.
#[derive(Serialize)]
struct PairDetail<'a> {
    #[serde(flatten)]
    trade: &'a PairTrade,
    train: &'a BacktestReport,
    test: &'a BacktestReport,
}

struct PairReports {
    trade: PairTrade,
    train: BacktestReport,
    test: BacktestReport,
}

fn closes<'t>(table: &'t PriceTable, ticker: &str) -> esgpairs::Result<&'t [f64]> {
    table.closes(ticker).ok_or_else(|| esgpairs::Error::UnknownTicker(ticker.to_string()))
}

fn backtest_pair(config: &PipelineConfig, s: &PairStats, train: &PriceTable, test: &PriceTable) -> esgpairs::Result<PairReports> {
    let (a, b) = (&s.pair.ticker_a, &s.pair.ticker_b);
    let (a_train, b_train) = (closes(train, a)?, closes(train, b)?);
    let base: StrategyParams = config.strategy.params();
    let params = match config.strategy.explicit_thresholds() {
        Some(t) => base.with_thresholds(t),
        None => {
            let state = build_spread(a_train, b_train, s.hedge_ratio, &base)?;
            base.with_thresholds(auto_thresholds(&state, config.strategy.threshold_z)?)
        }
    };
    let exec = config.execution.params();
    let train_report = run_backtest(a_train, b_train, s.hedge_ratio, &params, &exec)?;
    let test_report = run_backtest(closes(test, a)?, closes(test, b)?, s.hedge_ratio, &params, &exec)?;
    Ok(PairReports {
        trade: PairTrade {
            pair1: a.clone(),
            pair2: b.clone(),
            hedge_ratio: s.hedge_ratio,
            buy_threshold: params.buy_threshold,
            sell_threshold: params.sell_threshold,
            train_round_trips: train_report.round_trips(),
            test_round_trips: test_report.round_trips(),
        },
        train: train_report,
        test: test_report,
    })
}

fn emit_window(run: &mut Run, window: &str, rows: &[ResultRow]) -> Result<(), CliError> {
    let p = run.path(&format!("results_{window}.csv"));
    emit_results_table(rows, &p)?;
    for metric in Metric::ALL {
        let name = format!("boxplot_{window}_{}.json", metric.name());
        let p = run.dir.join(&name);
        match emit_boxplot_data(rows, metric, &p) {
            Ok(_) => {
                run.written.push(p);
                run.manifest.artifacts.push(name);
            }
            Err(CliError::Empty(_)) => run.manifest.skipped_boxplots.push(name),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn execute(config: &PipelineConfig, run: &mut Run) -> Result<(), CliError> {
    let inputs = run.stage("load", 0, |run| load_inputs(config, run))?;
    let raw_tickers = inputs.prices.n_tickers();
    let cleaned = run.stage("clean", raw_tickers, |_| {
        let t = clean_and_align(&inputs.prices, &config.cleaning).map_err(CliError::stage("clean"))?;
        let n = t.n_tickers();
        Ok((t, n))
    })?;

    let eligible = if config.has_stage(Stage::Esg) {
        let Some(esg) = &inputs.esg else {
            return Err(CliError::Config("the esg stage needs input.esg".into()));
        };
        run.stage("esg", cleaned.n_tickers(), |run| {
            let universe = select_universe(config, esg, run)?;
            let kept: Vec<&String> = cleaned.tickers().iter().filter(|t| universe.contains(t)).collect();
            let lines = std::iter::once("ticker".to_string()).chain(kept.iter().map(|t| t.to_string())).collect();
            run.write_lines("universe.csv", lines)?;
            let table = cleaned.retain_tickers(&kept);
            let n = table.n_tickers();
            if n < 2 {
                return Err(CliError::Stage {
                    stage: "esg",
                    source: esgpairs::Error::NoPairs(format!("ESG selection kept {n} priced tickers")),
                });
            }
            Ok((table, n))
        })?
    } else {
        cleaned
    };
    run.manifest.universe = eligible.tickers().to_vec();

    let (train, test) = run.stage("split", eligible.n_dates(), |_| {
        let (tr, te) = train_test_split(&eligible, config.split.train_fraction).map_err(CliError::stage("split"))?;
        let n = tr.n_dates();
        Ok(((tr, te), n))
    })?;

    let explicit = config.pairs.is_some();
    let candidates = match &config.pairs {
        Some(list) => list.iter().map(|[a, b]| PairCandidate::new(a, b, EXPLICIT_CLUSTER)).collect(),
        None => run.stage("discover", train.n_tickers(), |run| {
            let p = discover(config, &train, run)?;
            let n = p.len();
            Ok((p, n))
        })?,
    };

    let scored = run.stage("score", candidates.len(), |run| {
        let s = score(&candidates, &train, explicit, run)?;
        let n = s.len();
        Ok((s, n))
    })?;
    if !scored.is_empty() {
        let p = run.path("candidates.csv");
        emit_pairstats_table(&scored.iter().map(PairStatsRow::from).collect::<Vec<_>>(), &p)?;
    }

    let selected = run.stage("filter", scored.len(), |run| {
        let kept = if explicit { scored.clone() } else { select_pairs(config, &scored, train.n_dates()) };
        if kept.is_empty() {
            return Err(CliError::Stage { stage: "filter", source: esgpairs::Error::NoPairs("filtering".into()) });
        }
        let p = run.path("pairstats.csv");
        emit_pairstats_table(&kept.iter().map(PairStatsRow::from).collect::<Vec<_>>(), &p)?;
        let n = kept.len();
        Ok((kept, n))
    })?;
    run.manifest.selected_pairs = selected.iter().map(|s| [s.pair.ticker_a.clone(), s.pair.ticker_b.clone()]).collect();

    if !config.has_stage(Stage::Backtest) {
        return Ok(());
    }
    let reports = run.stage("backtest", selected.len(), |_| {
        let r: Vec<PairReports> = selected
            .par_iter()
            .map(|s| backtest_pair(config, s, &train, &test))
            .collect::<esgpairs::Result<_>>()
            .map_err(CliError::stage("backtest"))?;
        let n = r.len();
        Ok((r, n))
    })?;
    run.stage("emit", reports.len(), |run| {
        let rows = |f: fn(&PairReports) -> &BacktestReport| -> Vec<ResultRow> {
            reports.iter().map(|r| ResultRow::new(&r.trade.pair1, &r.trade.pair2, f(r))).collect()
        };
        emit_window(run, "train", &rows(|r| &r.train))?;
        emit_window(run, "test", &rows(|r| &r.test))?;
        for r in &reports {
            let detail = PairDetail { trade: &r.trade, train: &r.train, test: &r.test };
            run.write_json(&format!("detail_{}_{}.json", r.trade.pair1, r.trade.pair2), &detail)?;
        }
        run.manifest.trades = reports.iter().map(|r| r.trade.clone()).collect();
        Ok(((), 2 * reports.len()))
    })?;
    Ok(())
}
