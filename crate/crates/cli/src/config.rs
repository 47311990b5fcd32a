//! Pipeline configuration.
//!
//! The file format is TOML. Keys may be written flat and dotted
//! (`strategy.fast_span = 20`) or grouped under `[strategy]` tables; both
//! parse to the same structure. Command-line flags override the file, and
//! `ESGPAIRS_SEED` overrides the file's seed.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use esgpairs::discovery::SelectionCriteria;
use esgpairs::ingest::{CleaningPolicy, Month};
use esgpairs::strategy::{Sizing, StrategyParams};
use esgpairs::backtest::ExecutionParams;
use esgpairs::synth::SynthConfig;

use crate::error::CliError;

pub const SEED_ENV: &str = "ESGPAIRS_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub prices: Option<PathBuf>,
    pub esg: Option<PathBuf>,
    pub delimiter: char,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self { prices: None, esg: None, delimiter: ',' }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsgConfig {
    /// 1 = top firm of each industry above `zeta`; 2 = firms at least `xi` above their industry mean.
    pub approach: u8,
    /// Absolute score threshold for approach 1.
    pub zeta: f64,
    pub xi: f64,
    /// Snapshot month; the latest month in the file when absent.
    pub as_of: Option<Month>,
    /// Industries listed at each end of the `esg-report` ranking.
    pub top_k: usize,
}

impl Default for EsgConfig {
    fn default() -> Self {
        Self { approach: 2, zeta: 50.0, xi: 0.0, as_of: None, top_k: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self { train_fraction: 0.7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscoveryConfig {
    pub variance_target: f64,
    pub max_dims: usize,
    pub min_samples: usize,
    pub xi_cluster: f64,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        Self { variance_target: 0.90, max_dims: 10, min_samples: 3, xi_cluster: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionConfig {
    pub coint_alpha: Option<f64>,
    pub min_half_life: Option<f64>,
    /// Half the training window when absent.
    pub max_half_life: Option<f64>,
    pub max_hurst: Option<f64>,
    pub min_cross: Option<usize>,
    /// Keep at most this many pairs, lowest cointegration p-value first.
    pub max_pairs: Option<usize>,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            coint_alpha: Some(0.05),
            min_half_life: Some(1.0),
            max_half_life: None,
            max_hurst: Some(0.5),
            min_cross: Some(1),
            max_pairs: None,
        }
    }
}

impl SelectionConfig {
    pub fn criteria(&self, train_len: usize) -> SelectionCriteria {
        SelectionCriteria {
            max_coint_p: self.coint_alpha,
            min_half_life: self.min_half_life,
            max_half_life: Some(self.max_half_life.unwrap_or(train_len as f64 / 2.0)),
            max_hurst: self.max_hurst,
            min_cross: self.min_cross,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrategyConfig {
    pub fast_span: usize,
    pub slow_span: usize,
    pub threshold_z: f64,
    /// Explicit thresholds take precedence over `threshold_z`; both must be set.
    pub buy_threshold: Option<f64>,
    pub sell_threshold: Option<f64>,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self { fast_span: 10, slow_span: 40, threshold_z: 1.0, buy_threshold: None, sell_threshold: None }
    }
}

impl StrategyConfig {
    pub fn explicit_thresholds(&self) -> Option<(f64, f64)> {
        self.buy_threshold.zip(self.sell_threshold)
    }

    /// Spans plus explicit thresholds, or a symmetric placeholder band for validation.
    pub fn params(&self) -> StrategyParams {
        let (buy, sell) = self.explicit_thresholds().unwrap_or((-1.0, 1.0));
        StrategyParams { fast_span: self.fast_span, slow_span: self.slow_span, buy_threshold: buy, sell_threshold: sell }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExecutionConfig {
    pub commission_rate: f64,
    pub initial_capital: f64,
    pub annualization_factor: f64,
    pub slippage: f64,
    pub units: f64,
}

impl Default for ExecutionConfig {
    fn default() -> Self {
        let d = ExecutionParams::default();
        Self {
            commission_rate: d.commission_rate,
            initial_capital: d.initial_capital,
            annualization_factor: d.annualization_factor,
            slippage: d.slippage,
            units: d.sizing.units,
        }
    }
}

impl ExecutionConfig {
    pub fn params(&self) -> ExecutionParams {
        ExecutionParams {
            commission_rate: self.commission_rate,
            initial_capital: self.initial_capital,
            annualization_factor: self.annualization_factor,
            slippage: self.slippage,
            sizing: Sizing { units: self.units },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// ESG universe selection; without it every cleaned ticker is eligible.
    Esg,
    /// PCA, OPTICS, pair scoring and filtering.
    Discover,
    /// Train and test backtests with their reports.
    Backtest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    pub cleaning: CleaningPolicy,
    pub esg: EsgConfig,
    pub split: SplitConfig,
    pub discovery: DiscoveryConfig,
    pub selection: SelectionConfig,
    pub strategy: StrategyConfig,
    pub execution: ExecutionConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub stages: Vec<Stage>,
    /// Explicit pairs as `[a, b]`; replaces discovery when present.
    pub pairs: Option<Vec<[String; 2]>>,
    pub synth: SynthConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: InputConfig::default(),
            cleaning: CleaningPolicy::default(),
            esg: EsgConfig::default(),
            split: SplitConfig::default(),
            discovery: DiscoveryConfig::default(),
            selection: SelectionConfig::default(),
            strategy: StrategyConfig::default(),
            execution: ExecutionConfig::default(),
            output_dir: PathBuf::from("out"),
            seed: SynthConfig::default().seed,
            stages: vec![Stage::Esg, Stage::Discover, Stage::Backtest],
            pairs: None,
            synth: SynthConfig::default(),
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(msg()))
    }
}

/// Sets `path` (dotted) inside `table`, creating intermediate tables.
pub fn set_dotted(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts.pop().filter(|k| !k.is_empty()).ok_or_else(|| CliError::Config(format!("empty key `{path}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| CliError::Config(format!("`{p}` in `{path}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Parses a `KEY=VALUE` override. The value is read as TOML, falling back to a bare string.
pub fn parse_override(arg: &str) -> Result<(String, toml::Value), CliError> {
    let (key, raw) = arg.split_once('=').ok_or_else(|| CliError::Config(format!("override `{arg}` is not KEY=VALUE")))?;
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key.trim().to_string(), value))
}

impl PipelineConfig {
    /// Defaults, then the file, then `ESGPAIRS_SEED`, then `overrides` in order.
    pub fn resolve(file: Option<&Path>, overrides: &[(String, toml::Value)]) -> Result<Self, CliError> {
        let mut table = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                toml::from_str::<toml::Table>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => toml::Table::new(),
        };
        if let Ok(v) = std::env::var(SEED_ENV) {
            let seed: i64 = v.trim().parse().ok().filter(|s| *s >= 0).ok_or_else(|| {
                CliError::Config(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))
            })?;
            table.insert("seed".into(), toml::Value::Integer(seed));
        }
        for (key, value) in overrides {
            set_dotted(&mut table, key, value.clone())?;
        }
        let config: Self = table.try_into().map_err(|e| CliError::Config(format!("invalid configuration: {e}")))?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn has_stage(&self, stage: Stage) -> bool {
        self.stages.contains(&stage)
    }

    /// Rejects any parameter outside its domain. Runs before any stage.
    pub fn validate(&self) -> Result<(), CliError> {
        let c = self;
        self.cleaning.validate().map_err(|e| CliError::Config(e.to_string()))?;
        check(c.input.delimiter.is_ascii(), || "input.delimiter must be a single ASCII character".into())?;
        check(matches!(c.esg.approach, 1 | 2), || format!("esg.approach must be 1 or 2, got {}", c.esg.approach))?;
        check((0.0..=100.0).contains(&c.esg.zeta), || format!("esg.zeta must lie in [0, 100], got {}", c.esg.zeta))?;
        check(c.esg.xi >= 0.0 && c.esg.xi.is_finite(), || format!("esg.xi must be >= 0, got {}", c.esg.xi))?;
        let f = c.split.train_fraction;
        check(f > 0.0 && f < 1.0, || format!("split.train_fraction must lie in (0, 1), got {f}"))?;
        let d = &c.discovery;
        check((0.0..=1.0).contains(&d.variance_target), || {
            format!("discovery.variance_target must lie in [0, 1], got {}", d.variance_target)
        })?;
        check(d.max_dims >= 1, || "discovery.max_dims must be >= 1".into())?;
        check(d.min_samples >= 2, || format!("discovery.min_samples must be >= 2, got {}", d.min_samples))?;
        check(d.xi_cluster > 0.0 && d.xi_cluster < 1.0, || {
            format!("discovery.xi_cluster must lie in (0, 1), got {}", d.xi_cluster)
        })?;
        let s = &c.selection;
        if let Some(a) = s.coint_alpha {
            check((0.0..=1.0).contains(&a), || format!("selection.coint_alpha must lie in [0, 1], got {a}"))?;
        }
        if let (Some(lo), Some(hi)) = (s.min_half_life, s.max_half_life) {
            check(lo <= hi, || format!("selection.min_half_life {lo} exceeds max_half_life {hi}"))?;
        }
        check(s.max_pairs != Some(0), || "selection.max_pairs must be >= 1".into())?;
        let st = &c.strategy;
        check(st.buy_threshold.is_some() == st.sell_threshold.is_some(), || {
            "strategy.buy_threshold and strategy.sell_threshold must be given together".into()
        })?;
        check(st.threshold_z > 0.0 && st.threshold_z.is_finite(), || {
            format!("strategy.threshold_z must be positive, got {}", st.threshold_z)
        })?;
        st.params().validate().map_err(|e| CliError::Config(e.to_string()))?;
        c.execution.params().validate().map_err(|e| CliError::Config(e.to_string()))?;
        check(!c.has_stage(Stage::Esg) || c.input.prices.is_none() || c.input.esg.is_some(), || {
            "the esg stage needs input.esg when input.prices is given".into()
        })?;
        check(!c.stages.is_empty(), || "stages must not be empty".into())?;
        check(!c.has_stage(Stage::Backtest) || c.has_stage(Stage::Discover) || c.pairs.is_some(), || {
            "the backtest stage needs the discover stage or an explicit pair list".into()
        })?;
        if let Some(pairs) = &c.pairs {
            check(!pairs.is_empty(), || "pairs must not be empty when given".into())?;
            for [a, b] in pairs {
                check(a != b, || format!("pair {a}:{b} repeats a ticker"))?;
            }
        }
        self.synth.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }
}
