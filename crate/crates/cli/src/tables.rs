//! Result tables and boxplot data, with loaders for each format.
//!
//! Every number is printed with four decimals. An undefined Sharpe ratio
//! prints as `nan`, and an infinite half-life as `inf`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use esgpairs::backtest::BacktestReport;
use esgpairs::discovery::PairStats;

use crate::error::CliError;

pub const RESULTS_HEADER: [&str; 5] = ["pair1", "pair2", "sharpe", "drawdown", "returns"];
pub const PAIRSTATS_HEADER: [&str; 6] = ["pair1", "pair2", "hedge_ratio", "cointegration", "half_life", "cross"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub pair1: String,
    pub pair2: String,
    pub sharpe: Option<f64>,
    pub drawdown: f64,
    pub returns: f64,
}

impl ResultRow {
    pub fn new(pair1: &str, pair2: &str, report: &BacktestReport) -> Self {
        Self {
            pair1: pair1.to_string(),
            pair2: pair2.to_string(),
            sharpe: report.sharpe,
            drawdown: report.max_drawdown_pct,
            returns: report.total_return_pct,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStatsRow {
    pub pair1: String,
    pub pair2: String,
    pub hedge_ratio: f64,
    pub cointegration: f64,
    pub half_life: f64,
    pub cross: f64,
}

impl From<&PairStats> for PairStatsRow {
    fn from(s: &PairStats) -> Self {
        Self {
            pair1: s.pair.ticker_a.clone(),
            pair2: s.pair.ticker_b.clone(),
            hedge_ratio: s.hedge_ratio,
            cointegration: s.coint_p,
            half_life: s.half_life,
            cross: s.cross_count as f64,
        }
    }
}

pub fn fmt4(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        // Avoid printing `-0.0000`.
        let s = format!("{v:.4}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') { s.trim_start_matches('-').to_string() } else { s }
    }
}

fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> Result<(), CliError> {
    let file = File::create(path).map_err(CliError::io(path))?;
    let mut w = BufWriter::new(file);
    for line in lines {
        writeln!(w, "{line}").map_err(CliError::io(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

fn sorted_by_pair<T: Clone>(rows: &[T], key: impl Fn(&T) -> (&str, &str)) -> Vec<T> {
    let mut out = rows.to_vec();
    out.sort_by(|a, b| key(a).cmp(&key(b)));
    out
}

/// Writes rows sorted by `(pair1, pair2)`.
pub fn emit_results_table(rows: &[ResultRow], path: &Path) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Empty("results table has no rows".into()));
    }
    let rows = sorted_by_pair(rows, |r| (r.pair1.as_str(), r.pair2.as_str()));
    let body = rows.iter().map(|r| {
        let sharpe = r.sharpe.map_or_else(|| "nan".to_string(), fmt4);
        format!("{},{},{},{},{}", r.pair1, r.pair2, sharpe, fmt4(r.drawdown), fmt4(r.returns))
    });
    write_lines(path, std::iter::once(RESULTS_HEADER.join(",")).chain(body))
}

pub fn emit_pairstats_table(stats: &[PairStatsRow], path: &Path) -> Result<(), CliError> {
    if stats.is_empty() {
        return Err(CliError::Empty("pair statistics table has no rows".into()));
    }
    let rows = sorted_by_pair(stats, |r| (r.pair1.as_str(), r.pair2.as_str()));
    let body = rows.iter().map(|r| {
        format!(
            "{},{},{},{},{},{}",
            r.pair1,
            r.pair2,
            fmt4(r.hedge_ratio),
            fmt4(r.cointegration),
            fmt4(r.half_life),
            fmt4(r.cross)
        )
    });
    write_lines(path, std::iter::once(PAIRSTATS_HEADER.join(",")).chain(body))
}

fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>, CliError> {
    let bad = |reason: String| CliError::Table { path: path.to_path_buf(), reason };
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut lines = text.lines();
    let got: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    if got != header {
        return Err(bad(format!("expected header {}, got {}", header.join(","), got.join(","))));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            if cells.len() != header.len() {
                return Err(bad(format!("row {} has {} cells", i + 1, cells.len())));
            }
            Ok(cells)
        })
        .collect()
}

fn num(path: &Path, cell: &str) -> Result<f64, CliError> {
    cell.parse().map_err(|_| CliError::Table { path: path.to_path_buf(), reason: format!("bad number `{cell}`") })
}

pub fn parse_results_table(path: &Path) -> Result<Vec<ResultRow>, CliError> {
    read_table(path, &RESULTS_HEADER)?
        .into_iter()
        .map(|c| {
            let sharpe = if c[2] == "nan" { None } else { Some(num(path, &c[2])?) };
            Ok(ResultRow {
                pair1: c[0].clone(),
                pair2: c[1].clone(),
                sharpe,
                drawdown: num(path, &c[3])?,
                returns: num(path, &c[4])?,
            })
        })
        .collect()
}

pub fn parse_pairstats_table(path: &Path) -> Result<Vec<PairStatsRow>, CliError> {
    read_table(path, &PAIRSTATS_HEADER)?
        .into_iter()
        .map(|c| {
            Ok(PairStatsRow {
                pair1: c[0].clone(),
                pair2: c[1].clone(),
                hedge_ratio: num(path, &c[2])?,
                cointegration: num(path, &c[3])?,
                half_life: num(path, &c[4])?,
                cross: num(path, &c[5])?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Sharpe,
    Drawdown,
    Returns,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Sharpe, Metric::Drawdown, Metric::Returns];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Sharpe => "sharpe",
            Metric::Drawdown => "drawdown",
            Metric::Returns => "returns",
        }
    }

    pub fn value(self, row: &ResultRow) -> Option<f64> {
        match self {
            Metric::Sharpe => row.sharpe,
            Metric::Drawdown => Some(row.drawdown),
            Metric::Returns => Some(row.returns),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotData {
    pub metric: Metric,
    /// Defined values in pair order.
    pub values: Vec<f64>,
    /// Rows whose value was undefined.
    pub excluded: usize,
    pub summary: Quartiles,
}

/// Linearly interpolated quantile of sorted data, `p` in `[0, 1]`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn boxplot(rows: &[ResultRow], metric: Metric) -> Result<BoxplotData, CliError> {
    if rows.is_empty() {
        return Err(CliError::Empty("boxplot over no reports".into()));
    }
    let rows = sorted_by_pair(rows, |r| (r.pair1.as_str(), r.pair2.as_str()));
    let values: Vec<f64> = rows.iter().filter_map(|r| metric.value(r)).collect();
    let excluded = rows.len() - values.len();
    if values.is_empty() {
        return Err(CliError::Empty(format!("metric {} is undefined for every pair", metric.name())));
    }
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let summary = Quartiles {
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    };
    Ok(BoxplotData { metric, values, excluded, summary })
}

pub fn emit_boxplot_data(rows: &[ResultRow], metric: Metric, path: &Path) -> Result<BoxplotData, CliError> {
    let data = boxplot(rows, metric)?;
    let json = serde_json::to_string_pretty(&data).expect("boxplot serializes");
    write_lines(path, [json])?;
    Ok(data)
}

pub fn parse_boxplot_data(path: &Path) -> Result<BoxplotData, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Table { path: path.to_path_buf(), reason: e.to_string() })
}
