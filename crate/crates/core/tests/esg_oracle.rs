//! Universe selection against direct brute-force filters on random firm panels.

use std::collections::BTreeSet;

use esgpairs::esg::{select_above_industry_mean, select_top_of_industry, summarize};
use esgpairs::ingest::{EsgRecord, EsgTable, Month};
use esgpairs::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INDUSTRIES: [&str; 7] = ["Banks", "Cement", "Chemicals", "Energy", "Media", "Pharma", "Telecom"];
const AS_OF: Month = Month { year: 2023, month: 6 };

fn panel(seed: u64, n_firms: usize) -> EsgTable {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for i in 0..n_firms {
        let mut labels = vec![INDUSTRIES[r.random_range(0..INDUSTRIES.len())].to_string()];
        if r.random_bool(0.2) {
            let extra = INDUSTRIES[r.random_range(0..INDUSTRIES.len())].to_string();
            if !labels.contains(&extra) {
                labels.push(extra);
            }
        }
        for month in 3..=7 {
            if r.random_bool(0.3) {
                continue;
            }
            // Integer scores make ties common.
            let score = if r.random_bool(0.1) { None } else { Some(r.random_range(0..=100) as f64) };
            records.push(EsgRecord {
                ticker: format!("F{i:03}"),
                name: format!("Firm {i}"),
                industries: labels.clone(),
                month: Month { year: 2023, month },
                score,
            });
        }
    }
    EsgTable::new(records).unwrap()
}

/// `(ticker, industries, score)` from each firm's latest record at or before `AS_OF`.
fn latest(esg: &EsgTable) -> Vec<(String, Vec<String>, Option<f64>)> {
    let tickers: BTreeSet<&str> = esg.records().iter().map(|r| r.ticker.as_str()).collect();
    let mut out = Vec::new();
    for t in tickers {
        let mut best: Option<&EsgRecord> = None;
        for r in esg.records() {
            if r.ticker == t && r.month <= AS_OF && best.is_none_or(|b| r.month > b.month) {
                best = Some(r);
            }
        }
        if let Some(b) = best {
            out.push((t.to_string(), b.industries.clone(), b.score));
        }
    }
    out
}

fn industry_mean(firms: &[(String, Vec<String>, Option<f64>)], label: &str) -> f64 {
    let s: Vec<f64> = firms.iter().filter(|f| f.1.iter().any(|l| l == label)).filter_map(|f| f.2).collect();
    s.iter().sum::<f64>() / s.len() as f64
}

fn industry_max(firms: &[(String, Vec<String>, Option<f64>)], label: &str) -> f64 {
    firms.iter().filter(|f| f.1.iter().any(|l| l == label)).filter_map(|f| f.2).fold(f64::NEG_INFINITY, f64::max)
}

fn brute_approach1(esg: &EsgTable, zeta: f64) -> BTreeSet<String> {
    let firms = latest(esg);
    let mut out = BTreeSet::new();
    for (t, labels, score) in &firms {
        let Some(s) = score else { continue };
        if *s > zeta && labels.iter().any(|l| *s == industry_max(&firms, l)) {
            out.insert(t.clone());
        }
    }
    out
}

fn brute_approach2(esg: &EsgTable, xi: f64) -> BTreeSet<String> {
    let firms = latest(esg);
    let mut out = BTreeSet::new();
    for (t, labels, score) in &firms {
        let Some(s) = score else { continue };
        if labels.iter().any(|l| *s >= industry_mean(&firms, l) + xi - 1e-9) {
            out.insert(t.clone());
        }
    }
    out
}

fn as_set(r: Result<esgpairs::esg::Universe, Error>) -> BTreeSet<String> {
    match r {
        Ok(u) => u.tickers.into_iter().collect(),
        Err(Error::EmptySelection { .. }) => BTreeSet::new(),
        Err(e) => panic!("unexpected error {e}"),
    }
}

const ZETAS: [f64; 8] = [0.0, 20.0, 50.0, 80.0, 90.0, 95.0, 99.0, 100.0];
const XIS: [f64; 8] = [0.0, 1.0, 5.0, 10.0, 20.0, 30.0, 50.0, 100.0];

#[test]
fn approaches_match_brute_force() {
    for seed in 0..50 {
        let esg = panel(seed, 200);
        for zeta in ZETAS {
            assert_eq!(as_set(select_top_of_industry(&esg, AS_OF, zeta)), brute_approach1(&esg, zeta), "seed {seed} zeta {zeta}");
        }
        for xi in XIS {
            assert_eq!(as_set(select_above_industry_mean(&esg, AS_OF, xi)), brute_approach2(&esg, xi), "seed {seed} xi {xi}");
        }
    }
}

#[test]
fn selections_shrink_monotonically() {
    for seed in 0..50 {
        let esg = panel(seed, 200);
        let a1: Vec<_> = ZETAS.iter().map(|&z| as_set(select_top_of_industry(&esg, AS_OF, z))).collect();
        let a2: Vec<_> = XIS.iter().map(|&x| as_set(select_above_industry_mean(&esg, AS_OF, x))).collect();
        for w in a1.windows(2).chain(a2.windows(2)) {
            assert!(w[1].is_subset(&w[0]), "seed {seed}");
        }
        assert!(!a1[0].is_empty());
        assert!(a1[7].is_empty());
    }
}

#[test]
fn summary_counts_match_snapshot() {
    for seed in 0..10 {
        let esg = panel(seed, 200);
        let firms = latest(&esg);
        let s = summarize(&esg, AS_OF).unwrap();
        assert_eq!(s.n_firms, firms.len());
        assert_eq!(s.n_missing, firms.iter().filter(|f| f.2.is_none()).count());
        let scored: Vec<f64> = firms.iter().filter_map(|f| f.2).collect();
        let mean = scored.iter().sum::<f64>() / scored.len() as f64;
        assert!((s.mean_firm_score - mean).abs() < 1e-9);
        assert_eq!(s.histogram.iter().map(|b| b.count).sum::<usize>(), scored.len());
        for (label, m) in &s.industry_means {
            assert!((m - industry_mean(&firms, label)).abs() < 1e-9);
        }
    }
}
