//! Acceptance suite. One test per criterion; each prints a single
//! `[criterion N] PASS|FAIL ...` line with the measured figures.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use esgpairs::backtest::{max_drawdown, run_backtest, ExecutionParams, TradeAction};
use esgpairs::esg::{select_above_industry_mean, select_top_of_industry, Universe};
use esgpairs::ingest::{EsgRecord, EsgTable, Month};
use esgpairs::stattests::{adf_test, engle_granger, half_life, hurst_exponent, DEFAULT_HURST_LAGS};
use esgpairs::strategy::{auto_thresholds, build_spread, StrategyParams};
use esgpairs::synth::{ar1, random_walk, white_noise};
use esgpairs_cli::tables::{
    emit_pairstats_table, emit_results_table, parse_pairstats_table, parse_results_table, PairStatsRow, ResultRow,
    PAIRSTATS_HEADER, RESULTS_HEADER,
};
use esgpairs_cli::{run_pipeline, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, pass: bool, detail: String) {
    println!("[criterion {id}] {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn seconds(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

#[test]
fn criterion_01_adf_oracle_equivalence() {
    let start = Instant::now();
    let text = include_str!("../../core/tests/fixtures/adf_reference.csv");
    let mut agree = std::collections::BTreeMap::<String, usize>::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let seed: u64 = f[1].parse().unwrap();
        let reference: f64 = f[3].parse().unwrap();
        let series = match f[0] {
            "white_noise" => white_noise(1000, 1.0, seed),
            "ar1" => ar1(0.5, 1000, 1.0, seed),
            "random_walk" => random_walk(1000, 1.0, seed),
            other => panic!("unknown case {other}"),
        };
        let p = adf_test(&series, 21).unwrap().p_value;
        *agree.entry(f[0].to_string()).or_default() += usize::from((p - reference).abs() <= 0.02);
    }
    let elapsed = start.elapsed();
    let pass = agree.len() == 3 && agree.values().all(|&n| n >= 95) && elapsed < Duration::from_secs(30);
    report(1, pass, format!("agreement per case {agree:?} (need >= 95/100), runtime {}", seconds(elapsed)));
}

#[test]
fn criterion_02_engle_granger_power_and_size() {
    let start = Instant::now();
    let (mut power, mut size) = (0, 0);
    for seed in 0..100 {
        let x: Vec<f64> = random_walk(750, 1.0, seed).iter().map(|v| v + 100.0).collect();
        let u = ar1(0.7, 750, 1.0, seed + 10_000);
        let y: Vec<f64> = x.iter().zip(&u).map(|(a, e)| 2.0 * a + e).collect();
        power += usize::from(engle_granger(&y, &x).unwrap().p_value < 0.05);
        let a = random_walk(750, 1.0, seed + 20_000);
        let b = random_walk(750, 1.0, seed + 30_000);
        size += usize::from(engle_granger(&a, &b).unwrap().p_value < 0.05);
    }
    let elapsed = start.elapsed();
    let pass = power >= 90 && size <= 10 && elapsed < Duration::from_secs(30);
    report(2, pass, format!("planted rejected {power}/100 (>= 90), independent rejected {size}/100 (<= 10), runtime {}", seconds(elapsed)));
}

#[test]
fn criterion_03_half_life_accuracy() {
    let mut hits = Vec::new();
    for phi in [0.8, 0.9, 0.95] {
        let truth = std::f64::consts::LN_2 / (1.0 - phi);
        let ok = (0..100)
            .filter(|&seed| {
                let hl = half_life(&ar1(phi, 5000, 1.0, seed)).unwrap().half_life;
                ((hl - truth) / truth).abs() <= 0.2
            })
            .count();
        hits.push((phi, ok));
    }
    let alternating: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let alt = half_life(&alternating).unwrap().half_life;
    let alt_ok = (alt - std::f64::consts::LN_2 / 2.0).abs() <= 1e-12;
    let pass = hits.iter().all(|&(_, n)| n >= 90) && alt_ok;
    report(3, pass, format!("within 20% per phi {hits:?} (>= 90/100), alternating half-life {alt:.15}"));
}

#[test]
fn criterion_04_hurst_classification() {
    let (lo, hi) = DEFAULT_HURST_LAGS;
    let count = |f: &dyn Fn(u64) -> bool| (0..100).filter(|&s| f(s)).count();
    let trend = count(&|s| {
        let y: Vec<f64> = white_noise(5000, 0.25, s).iter().enumerate().map(|(t, e)| t as f64 + e).collect();
        hurst_exponent(&y, lo, hi).unwrap() > 0.9
    });
    let walk = count(&|s| (0.45..=0.55).contains(&hurst_exponent(&random_walk(5000, 1.0, s), lo, hi).unwrap()));
    let ar = count(&|s| hurst_exponent(&ar1(0.2, 5000, 1.0, s), lo, hi).unwrap() < 0.40);
    let pass = trend >= 90 && walk >= 90 && ar >= 90;
    report(4, pass, format!("trend H>0.9 {trend}/100, random walk H in [0.45,0.55] {walk}/100, AR(1) 0.2 H<0.40 {ar}/100"));
}

#[test]
fn criterion_05_pipeline_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let mut recovered = 0;
    let mut slowest = Duration::ZERO;
    for batch in 0..10u64 {
        let start = Instant::now();
        for seed in batch * 10..batch * 10 + 10 {
            let config = PipelineConfig { seed, output_dir: dir.path().join(seed.to_string()), ..Default::default() };
            let m = run_pipeline(&config).unwrap();
            assert_eq!(m.planted.len(), 3);
            let selected: BTreeSet<(String, String)> = m.selected_pairs.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
            let hits = m
                .planted
                .iter()
                .filter(|p| {
                    let key = if p.ticker_a < p.ticker_b { (p.ticker_a.clone(), p.ticker_b.clone()) } else { (p.ticker_b.clone(), p.ticker_a.clone()) };
                    selected.contains(&key)
                })
                .count();
            recovered += usize::from(hits >= 2);
            let stage = |n: &str| m.stages.iter().find(|s| s.name == n).unwrap().clone();
            assert_eq!(stage("filter").rows_out, stage("backtest").rows_in);
        }
        slowest = slowest.max(start.elapsed());
    }
    let pass = recovered >= 80 && slowest < Duration::from_secs(60);
    report(5, pass, format!("seeds with >= 2 of 3 planted pairs selected: {recovered}/100 (>= 80), slowest batch of 10 {}", seconds(slowest)));
}

#[test]
fn criterion_06_backtest_ledger() {
    let b: Vec<f64> = (0..12).map(|t| 50.0 + t as f64).collect();
    let a: Vec<f64> = b.iter().enumerate().map(|(t, &bt)| 0.5 * bt + 25.0 + if t == 3 { -4.0 } else { 0.0 }).collect();
    let sp = StrategyParams { fast_span: 2, slow_span: 4, buy_threshold: -1.0, sell_threshold: 1.0 };
    let r = run_backtest(&a, &b, 0.5, &sp, &ExecutionParams::default()).unwrap();
    let legs = [0.001 * 47.5, 0.001 * 0.5 * 53.0, 0.001 * 52.0, 0.001 * 0.5 * 54.0];
    let shape = r.trades.len() == 2
        && r.trades[0].action == TradeAction::OpenLong
        && r.trades[0].bar == 3
        && r.trades[1].action == TradeAction::Close
        && r.trades[1].bar == 4;
    let fees = shape
        && (r.trades[0].commission_paid - legs[0] - legs[1]).abs() < 1e-10
        && (r.trades[1].commission_paid - legs[2] - legs[3]).abs() < 1e-10;
    let mut ledger = vec![1000.0; 12];
    ledger[3] -= legs[0] + legs[1];
    for e in &mut ledger[4..] {
        *e = 1000.0 + 4.0 - legs.iter().sum::<f64>();
    }
    let max_err = r.equity_curve.iter().zip(&ledger).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let pnl = r.equity_curve[11] - 1000.0;
    let pass = fees && max_err < 1e-10 && (pnl - 3.847).abs() < 1e-10;
    report(6, pass, format!("trades {}, max equity error {max_err:.2e}, final P&L {pnl:.10} (expect 3.847)", r.trades.len()));
}

#[test]
fn criterion_07_zero_trade_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = PipelineConfig {
        output_dir: dir.path().join("run"),
        pairs: Some(vec![["S1A".into(), "S1B".into()]]),
        stages: vec![esgpairs_cli::Stage::Backtest],
        ..Default::default()
    };
    config.strategy.threshold_z = 1e6;
    run_pipeline(&config).unwrap();
    let train = std::fs::read_to_string(config.output_dir.join("results_train.csv")).unwrap();
    let test = std::fs::read_to_string(config.output_dir.join("results_test.csv")).unwrap();
    let row = "S1A,S1B,nan,0.0000,0.0000";
    let pass = train.lines().nth(1) == Some(row) && test.lines().nth(1) == Some(row);
    report(7, pass, format!("train row {:?}, test row {:?}", train.lines().nth(1), test.lines().nth(1)));
}

#[test]
fn criterion_08_metric_properties() {
    let mut monotone = 0;
    let mut max_scale_err = 0.0f64;
    for seed in 0..20u64 {
        let b: Vec<f64> = random_walk(500, 1.0, seed).iter().map(|v| v + 100.0).collect();
        let u = ar1(0.7, 500, 1.0, seed + 500);
        let a: Vec<f64> = b.iter().zip(&u).map(|(x, e)| 0.8 * x + 30.0 + e).collect();
        let base = StrategyParams::default();
        let sp = base.with_thresholds(auto_thresholds(&build_spread(&a, &b, 0.8, &base).unwrap(), 1.0).unwrap());
        let run = |rate: f64| run_backtest(&a, &b, 0.8, &sp, &ExecutionParams { commission_rate: rate, ..Default::default() }).unwrap();
        let r: Vec<f64> = [0.0, 0.001, 0.002].iter().map(|&c| run(c).total_return_pct).collect();
        monotone += usize::from(r[0] >= r[1] && r[1] >= r[2]);

        let ep = ExecutionParams::default();
        let r0 = run_backtest(&a, &b, 0.8, &sp, &ep).unwrap();
        for c in [0.5, 4.0, 123.0] {
            let s = |v: &[f64]| v.iter().map(|x| x * c).collect::<Vec<_>>();
            let sp_c = sp.with_thresholds((sp.buy_threshold * c, sp.sell_threshold * c));
            let ep_c = ExecutionParams { initial_capital: ep.initial_capital * c, ..ep };
            let rc = run_backtest(&s(&a), &s(&b), 0.8, &sp_c, &ep_c).unwrap();
            let sharpe_err = match (rc.sharpe, r0.sharpe) {
                (Some(x), Some(y)) => (x - y).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            max_scale_err = max_scale_err
                .max(sharpe_err)
                .max((rc.max_drawdown_pct - r0.max_drawdown_pct).abs())
                .max((rc.total_return_pct - r0.total_return_pct).abs());
        }
    }
    let mut dd_err = 0.0f64;
    for seed in 0..50 {
        let steps = white_noise(1000, 0.01, seed);
        let mut e = vec![1000.0];
        for s in &steps[1..] {
            e.push(e.last().unwrap() * (1.0 + s));
        }
        let mut brute = 0.0f64;
        for i in 0..e.len() {
            for j in i..e.len() {
                brute = brute.max((e[i] - e[j]) / e[i] * 100.0);
            }
        }
        dd_err = dd_err.max((max_drawdown(&e).unwrap() - brute).abs());
    }
    let pass = monotone == 20 && max_scale_err <= 1e-9 && dd_err <= 1e-9;
    report(8, pass, format!("monotone {monotone}/20, max scale deviation {max_scale_err:.2e}, max drawdown vs brute force {dd_err:.2e}"));
}

const INDUSTRIES: [&str; 6] = ["Auto", "Banks", "Energy", "Metals", "Pharma", "Telecom"];
const AS_OF: Month = Month { year: 2024, month: 3 };

fn firm_panel(seed: u64) -> EsgTable {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for i in 0..200 {
        let mut industries = vec![INDUSTRIES[r.random_range(0..INDUSTRIES.len())].to_string()];
        if r.random_bool(0.15) {
            let extra = INDUSTRIES[r.random_range(0..INDUSTRIES.len())].to_string();
            if !industries.contains(&extra) {
                industries.push(extra);
            }
        }
        for month in 1..=4 {
            if r.random_bool(0.25) {
                continue;
            }
            let score = if r.random_bool(0.08) { None } else { Some((r.random_range(0.0..100.0f64) * 2.0).round() / 2.0) };
            records.push(EsgRecord {
                ticker: format!("T{i:03}"),
                name: String::new(),
                industries: industries.clone(),
                month: Month { year: 2024, month },
                score,
            });
        }
    }
    EsgTable::new(records).unwrap()
}

type Firm = (String, Vec<String>, f64);

/// Scored firms from each ticker's latest record at or before `AS_OF`.
fn scored_snapshot(esg: &EsgTable) -> Vec<Firm> {
    let mut latest: std::collections::BTreeMap<&str, &EsgRecord> = Default::default();
    for rec in esg.records().iter().filter(|r| r.month <= AS_OF) {
        if latest.get(rec.ticker.as_str()).is_none_or(|cur| rec.month > cur.month) {
            latest.insert(&rec.ticker, rec);
        }
    }
    latest.values().filter_map(|r| r.score.map(|s| (r.ticker.clone(), r.industries.clone(), s))).collect()
}

fn brute_top(firms: &[Firm], zeta: f64) -> BTreeSet<String> {
    let is_max = |label: &String, score: f64| firms.iter().filter(|f| f.1.contains(label)).all(|f| f.2 <= score);
    firms.iter().filter(|f| f.2 > zeta && f.1.iter().any(|l| is_max(l, f.2))).map(|f| f.0.clone()).collect()
}

fn brute_above(firms: &[Firm], xi: f64) -> BTreeSet<String> {
    let mean = |l: &String| {
        let s: Vec<f64> = firms.iter().filter(|f| f.1.contains(l)).map(|f| f.2).collect();
        s.iter().sum::<f64>() / s.len() as f64
    };
    firms.iter().filter(|f| f.1.iter().any(|l| f.2 >= mean(l) + xi - 1e-9)).map(|f| f.0.clone()).collect()
}

fn set_of(r: esgpairs::Result<Universe>) -> BTreeSet<String> {
    match r {
        Ok(u) => u.tickers.into_iter().collect(),
        Err(esgpairs::Error::EmptySelection { .. }) => BTreeSet::new(),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn criterion_09_esg_selection() {
    let zetas = [0.0, 25.0, 50.0, 75.0, 90.0, 97.5, 100.0];
    let xis = [0.0, 2.5, 10.0, 25.0, 40.0, 60.0, 100.0];
    let (mut matches, mut checks, mut monotone) = (0, 0, 0);
    for seed in 0..50 {
        let esg = firm_panel(seed);
        let firms = scored_snapshot(&esg);
        let a1: Vec<_> = zetas.iter().map(|&z| set_of(select_top_of_industry(&esg, AS_OF, z))).collect();
        let a2: Vec<_> = xis.iter().map(|&x| set_of(select_above_industry_mean(&esg, AS_OF, x))).collect();
        for (got, &z) in a1.iter().zip(&zetas) {
            matches += usize::from(*got == brute_top(&firms, z));
            checks += 1;
        }
        for (got, &x) in a2.iter().zip(&xis) {
            matches += usize::from(*got == brute_above(&firms, x));
            checks += 1;
        }
        monotone += usize::from(a1.windows(2).chain(a2.windows(2)).all(|w| w[1].is_subset(&w[0])));
    }
    let pass = matches == checks && monotone == 50;
    report(9, pass, format!("brute-force agreement {matches}/{checks}, monotone shrinkage {monotone}/50 seeds"));
}

fn four_decimals(cell: &str) -> bool {
    let digits = cell.strip_prefix('-').unwrap_or(cell);
    matches!(digits.split_once('.'), Some((i, f)) if !i.is_empty() && i.bytes().all(|b| b.is_ascii_digit()) && f.len() == 4 && f.bytes().all(|b| b.is_ascii_digit()))
}

#[test]
fn criterion_10_format_parity() {
    let dir = tempfile::tempdir().unwrap();
    let config = PipelineConfig { seed: 7, output_dir: dir.path().join("run"), ..Default::default() };
    run_pipeline(&config).unwrap();
    let mut problems = Vec::new();
    for (file, header) in [
        ("results_train.csv", RESULTS_HEADER.join(",")),
        ("results_test.csv", RESULTS_HEADER.join(",")),
        ("pairstats.csv", PAIRSTATS_HEADER.join(",")),
    ] {
        let text = std::fs::read_to_string(config.output_dir.join(file)).unwrap();
        let mut lines = text.lines();
        if lines.next() != Some(header.as_str()) {
            problems.push(format!("{file}: header"));
        }
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            let numeric = &cells[2..];
            if !numeric.iter().all(|c| four_decimals(c) || *c == "nan" || *c == "inf") {
                problems.push(format!("{file}: {line}"));
            }
        }
    }
    let train = parse_results_table(&config.output_dir.join("results_train.csv")).unwrap();
    let stats = parse_pairstats_table(&config.output_dir.join("pairstats.csv")).unwrap();
    if train.is_empty() || stats.len() != train.len() {
        problems.push("row counts".into());
    }

    // Parse-back of tables written from exact values.
    let mut r = ChaCha8Rng::seed_from_u64(99);
    let rows: Vec<ResultRow> = (0..25)
        .map(|i| ResultRow {
            pair1: format!("A{i:02}"),
            pair2: format!("B{i:02}"),
            sharpe: (i % 6 != 0).then(|| r.random_range(-3.0..3.0)),
            drawdown: r.random_range(0.0..60.0),
            returns: r.random_range(-40.0..40.0),
        })
        .collect();
    let stat_rows: Vec<PairStatsRow> = (0..25)
        .map(|i| PairStatsRow {
            pair1: format!("A{i:02}"),
            pair2: format!("B{i:02}"),
            hedge_ratio: r.random_range(0.1..3.0),
            cointegration: r.random_range(0.0..0.05),
            half_life: r.random_range(1.0..100.0),
            cross: r.random_range(0..200) as f64,
        })
        .collect();
    let p = dir.path().join("r.csv");
    let q = dir.path().join("s.csv");
    emit_results_table(&rows, &p).unwrap();
    emit_pairstats_table(&stat_rows, &q).unwrap();
    let close = |x: f64, y: f64| (x - y).abs() <= 5e-5 + 1e-12;
    let back = parse_results_table(&p).unwrap();
    let back_stats = parse_pairstats_table(&q).unwrap();
    let results_ok = back.iter().zip(&rows).all(|(b, o)| {
        b.pair1 == o.pair1
            && b.sharpe.is_some() == o.sharpe.is_some()
            && b.sharpe.zip(o.sharpe).is_none_or(|(x, y)| close(x, y))
            && close(b.drawdown, o.drawdown)
            && close(b.returns, o.returns)
    });
    let stats_ok = back_stats.iter().zip(&stat_rows).all(|(b, o)| {
        b.pair1 == o.pair1
            && close(b.hedge_ratio, o.hedge_ratio)
            && close(b.cointegration, o.cointegration)
            && close(b.half_life, o.half_life)
            && b.cross == o.cross
    });
    if !(results_ok && stats_ok && back.len() == 25 && back_stats.len() == 25) {
        problems.push("parse-back".into());
    }
    report(10, problems.is_empty(), format!("pipeline rows {}, problems {problems:?}", train.len()));
}
