//! Loading, cleaning and alignment of price and ESG files.
//!
//! Price files are long-format `date,ticker,close` tables. ESG files are
//! `month,ticker,name,industry,score` tables where `industry` may carry
//! several `;`-separated labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Calendar month, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Month {
    pub year: i32,
    pub month: u32,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::BadMonth(format!("{year:04}-{month:02}")));
        }
        Ok(Self { year, month })
    }

    pub fn of(date: NaiveDate) -> Self {
        Self { year: date.year(), month: date.month() }
    }

    pub fn succ(self) -> Self {
        if self.month == 12 {
            Self { year: self.year + 1, month: 1 }
        } else {
            Self { year: self.year, month: self.month + 1 }
        }
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadMonth(s.to_string());
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        Month::new(year, month).map_err(|_| bad())
    }
}

impl TryFrom<String> for Month {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Month> for String {
    fn from(m: Month) -> Self {
        m.to_string()
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Parses a strict `YYYY-MM-DD` calendar date. Timestamps are rejected.
pub fn parse_date(s: &str) -> Result<NaiveDate> {
    let s = s.trim();
    if s.len() != 10 {
        return Err(Error::BadDate(s.to_string()));
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| Error::BadDate(s.to_string()))
}

/// Daily close prices on a shared calendar.
///
/// A freshly loaded table may have gaps, stored as `NaN`. After
/// [`clean_and_align`] every close is finite and strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceTable {
    calendar: Vec<NaiveDate>,
    tickers: Vec<String>,
    closes: Vec<Vec<f64>>,
}

impl PriceTable {
    /// Builds a gap-free table. `closes[i]` belongs to `tickers[i]`.
    pub fn new(calendar: Vec<NaiveDate>, tickers: Vec<String>, closes: Vec<Vec<f64>>) -> Result<Self> {
        if calendar.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("calendar must be strictly increasing".into()));
        }
        if tickers.len() != closes.len() {
            return Err(Error::Shape { left: tickers.len(), right: closes.len() });
        }
        let unique: BTreeSet<&String> = tickers.iter().collect();
        if unique.len() != tickers.len() {
            return Err(Error::Parameter("duplicate ticker".into()));
        }
        for row in &closes {
            if row.len() != calendar.len() {
                return Err(Error::Shape { left: row.len(), right: calendar.len() });
            }
            if let Some(bar) = row.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
                return Err(Error::NonFinitePrice(bar));
            }
        }
        let mut table = Self { calendar, tickers, closes };
        table.sort_tickers();
        Ok(table)
    }

    fn sort_tickers(&mut self) {
        let mut idx: Vec<usize> = (0..self.tickers.len()).collect();
        idx.sort_by(|&a, &b| self.tickers[a].cmp(&self.tickers[b]));
        self.tickers = idx.iter().map(|&i| self.tickers[i].clone()).collect();
        self.closes = idx.iter().map(|&i| self.closes[i].clone()).collect();
    }

    pub fn calendar(&self) -> &[NaiveDate] {
        &self.calendar
    }

    /// Tickers in lexicographic order.
    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn n_dates(&self) -> usize {
        self.calendar.len()
    }

    pub fn n_tickers(&self) -> usize {
        self.tickers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tickers.is_empty() || self.calendar.is_empty()
    }

    pub fn closes(&self, ticker: &str) -> Option<&[f64]> {
        self.index_of(ticker).map(|i| self.closes[i].as_slice())
    }

    pub fn closes_at(&self, index: usize) -> &[f64] {
        &self.closes[index]
    }

    pub fn index_of(&self, ticker: &str) -> Option<usize> {
        self.tickers.binary_search_by(|t| t.as_str().cmp(ticker)).ok()
    }

    /// Number of non-missing closes for the ticker at `index`.
    pub fn history_len(&self, index: usize) -> usize {
        self.closes[index].iter().filter(|p| !p.is_nan()).count()
    }

    pub fn has_gaps(&self) -> bool {
        self.closes.iter().flatten().any(|p| p.is_nan())
    }

    /// Keeps only the listed tickers (unknown names are ignored).
    pub fn retain_tickers<S: AsRef<str>>(&self, keep: &[S]) -> Self {
        let keep: BTreeSet<&str> = keep.iter().map(|s| s.as_ref()).collect();
        let (tickers, closes) = self
            .tickers
            .iter()
            .zip(&self.closes)
            .filter(|(t, _)| keep.contains(t.as_str()))
            .map(|(t, c)| (t.clone(), c.clone()))
            .unzip();
        Self { calendar: self.calendar.clone(), tickers, closes }
    }

    fn slice_dates(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            calendar: self.calendar[range.clone()].to_vec(),
            tickers: self.tickers.clone(),
            closes: self.closes.iter().map(|c| c[range.clone()].to_vec()).collect(),
        }
    }

    /// Serializes as a long-format `date,ticker,close` file. Missing cells are skipped.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let ctx = |source| Error::Csv { context: "price output".into(), source };
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "ticker", "close"]).map_err(ctx)?;
        for (d, date) in self.calendar.iter().enumerate() {
            let date = date.format("%Y-%m-%d").to_string();
            for (ticker, closes) in self.tickers.iter().zip(&self.closes) {
                if closes[d].is_nan() {
                    continue;
                }
                w.write_record([date.as_str(), ticker, &closes[d].to_string()]).map_err(ctx)?;
            }
        }
        w.flush().map_err(|e| ctx(e.into()))?;
        Ok(())
    }
}

/// Column layout of a price file.
#[derive(Debug, Clone)]
pub struct PriceFormat {
    pub delimiter: u8,
}

impl Default for PriceFormat {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

/// A loaded (possibly gappy) table and the number of rows rejected.
#[derive(Debug, Clone)]
pub struct LoadedPrices {
    pub table: PriceTable,
    pub dropped: usize,
}

pub fn load_prices(path: impl AsRef<Path>, format: &PriceFormat) -> Result<LoadedPrices> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Load { path: path.into(), source })?;
    parse_prices(file, format, &path.display().to_string())
}

pub fn parse_prices<R: Read>(reader: R, format: &PriceFormat, context: &str) -> Result<LoadedPrices> {
    let ctx = |source| Error::Csv { context: context.to_string(), source };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers().map_err(ctx)?.clone();
    let col = |name: &'static str| {
        header.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or(Error::MissingColumn(name))
    };
    let (c_date, c_ticker, c_close) = (col("date")?, col("ticker")?, col("close")?);

    let mut cells: BTreeMap<(NaiveDate, String), f64> = BTreeMap::new();
    let mut dropped = 0;
    for record in rdr.records() {
        let record = record.map_err(ctx)?;
        let parsed = (|| {
            let date = parse_date(record.get(c_date)?).ok()?;
            let ticker = record.get(c_ticker)?.trim();
            let close: f64 = record.get(c_close)?.parse().ok()?;
            (!ticker.is_empty() && close.is_finite() && close > 0.0).then(|| (date, ticker.to_string(), close))
        })();
        match parsed {
            Some((date, ticker, close)) => {
                if cells.insert((date, ticker), close).is_some() {
                    dropped += 1;
                }
            }
            None => dropped += 1,
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyInput(context.to_string()));
    }

    let calendar: Vec<NaiveDate> = cells.keys().map(|(d, _)| *d).collect::<BTreeSet<_>>().into_iter().collect();
    let tickers: Vec<String> = cells.keys().map(|(_, t)| t.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let date_idx: HashMap<NaiveDate, usize> = calendar.iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let ticker_idx: HashMap<&str, usize> = tickers.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let mut closes = vec![vec![f64::NAN; calendar.len()]; tickers.len()];
    for ((date, ticker), close) in &cells {
        closes[ticker_idx[ticker.as_str()]][date_idx[date]] = *close;
    }
    Ok(LoadedPrices { table: PriceTable { calendar, tickers, closes }, dropped })
}

/// Data-cleaning rules applied before any analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleaningPolicy {
    /// Drop any ticker missing a close on any calendar date.
    pub require_full_history: bool,
    /// Minimum number of closes a ticker must have (at least 2).
    pub min_history_days: usize,
    /// Treat a recorded ESG score of exactly 0 as "no score".
    pub missing_score_is_absent: bool,
}

impl Default for CleaningPolicy {
    fn default() -> Self {
        Self { require_full_history: true, min_history_days: 2, missing_score_is_absent: true }
    }
}

impl CleaningPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.min_history_days < 2 {
            return Err(Error::Parameter(format!("min_history_days must be >= 2, got {}", self.min_history_days)));
        }
        Ok(())
    }
}

/// Removes gappy or short tickers and restricts the calendar to dates on
/// which every survivor trades. Idempotent.
pub fn clean_and_align(raw: &PriceTable, policy: &CleaningPolicy) -> Result<PriceTable> {
    policy.validate()?;
    if raw.is_empty() {
        return Err(Error::EmptyInput("price table".into()));
    }
    let mut keep: Vec<usize> = (0..raw.n_tickers()).collect();
    if policy.require_full_history {
        keep.retain(|&i| raw.history_len(i) == raw.n_dates());
        if keep.is_empty() {
            return Err(Error::EmptyUniverse { field: "require_full_history" });
        }
    }
    keep.retain(|&i| raw.history_len(i) >= policy.min_history_days);
    if keep.is_empty() {
        return Err(Error::EmptyUniverse { field: "min_history_days" });
    }

    let dates: Vec<usize> = (0..raw.n_dates()).filter(|&d| keep.iter().all(|&i| !raw.closes[i][d].is_nan())).collect();
    if dates.len() < policy.min_history_days {
        return Err(Error::EmptyUniverse { field: "min_history_days" });
    }
    Ok(PriceTable {
        calendar: dates.iter().map(|&d| raw.calendar[d]).collect(),
        tickers: keep.iter().map(|&i| raw.tickers[i].clone()).collect(),
        closes: keep.iter().map(|&i| dates.iter().map(|&d| raw.closes[i][d]).collect()).collect(),
    })
}

/// Number of leading dates that go to the training window.
pub fn train_len(n_dates: usize, train_fraction: f64) -> usize {
    // The small slack keeps exact products such as 0.7 * 10 from rounding up.
    (train_fraction * n_dates as f64 - 1e-9).ceil().max(0.0) as usize
}

/// Chronological split: the first `ceil(fraction * n)` dates train, the rest test.
pub fn train_test_split(table: &PriceTable, train_fraction: f64) -> Result<(PriceTable, PriceTable)> {
    let n = table.n_dates();
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Parameter(format!("train_fraction must lie in (0, 1), got {train_fraction}")));
    }
    if n < 4 {
        return Err(Error::TooShort { needed: 4, got: n });
    }
    let cut = train_len(n, train_fraction);
    if cut == 0 || cut >= n {
        return Err(Error::Split { fraction: train_fraction, dates: n });
    }
    Ok((table.slice_dates(0..cut), table.slice_dates(cut..n)))
}

/// One monthly ESG observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsgRecord {
    pub ticker: String,
    pub name: String,
    pub industries: Vec<String>,
    pub month: Month,
    pub score: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EsgTable {
    records: Vec<EsgRecord>,
}

impl EsgTable {
    /// Fails if any `(ticker, month)` repeats or a score leaves `[0, 100]`.
    pub fn new(records: Vec<EsgRecord>) -> Result<Self> {
        if let Some(r) = records.iter().find(|r| r.score.is_some_and(|s| !(0.0..=100.0).contains(&s))) {
            return Err(Error::Parameter(format!("score {:?} for {} outside [0, 100]", r.score, r.ticker)));
        }
        let mut seen = BTreeSet::new();
        let dups: BTreeSet<String> = records
            .iter()
            .filter(|r| !seen.insert((r.ticker.clone(), r.month)))
            .map(|r| format!("{}@{}", r.ticker, r.month))
            .collect();
        if !dups.is_empty() {
            return Err(Error::DuplicateRecords(dups.into_iter().collect()));
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[EsgRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Latest month present, if any.
    pub fn latest_month(&self) -> Option<Month> {
        self.records.iter().map(|r| r.month).max()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let ctx = |source| Error::Csv { context: "esg output".into(), source };
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["month", "ticker", "name", "industry", "score"]).map_err(ctx)?;
        for r in &self.records {
            let score = r.score.map(|s| s.to_string()).unwrap_or_default();
            w.write_record([r.month.to_string(), r.ticker.clone(), r.name.clone(), r.industries.join(";"), score])
                .map_err(ctx)?;
        }
        w.flush().map_err(|e| ctx(e.into()))?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LoadedEsg {
    pub table: EsgTable,
    /// Rows rejected for an unparsable month, empty ticker or out-of-range score.
    pub rejected: usize,
}

pub fn load_esg(path: impl AsRef<Path>, policy: &CleaningPolicy) -> Result<LoadedEsg> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Load { path: path.into(), source })?;
    parse_esg(file, b',', policy, &path.display().to_string())
}

pub fn parse_esg<R: Read>(reader: R, delimiter: u8, policy: &CleaningPolicy, context: &str) -> Result<LoadedEsg> {
    let ctx = |source| Error::Csv { context: context.to_string(), source };
    let mut rdr = csv::ReaderBuilder::new().delimiter(delimiter).trim(csv::Trim::All).flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(ctx)?.clone();
    let col = |name: &'static str| {
        header.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or(Error::MissingColumn(name))
    };
    let (c_month, c_ticker, c_name, c_ind, c_score) =
        (col("month")?, col("ticker")?, col("name")?, col("industry")?, col("score")?);

    let mut records = Vec::new();
    let mut rejected = 0;
    for record in rdr.records() {
        let record = record.map_err(ctx)?;
        let parsed = (|| {
            let month: Month = record.get(c_month)?.parse().ok()?;
            let ticker = record.get(c_ticker)?.trim().to_string();
            if ticker.is_empty() {
                return None;
            }
            let raw_score = record.get(c_score).unwrap_or("").trim();
            let score = if raw_score.is_empty() || raw_score.eq_ignore_ascii_case("nan") {
                None
            } else {
                let s: f64 = raw_score.parse().ok()?;
                if !(0.0..=100.0).contains(&s) {
                    return None;
                }
                (!(policy.missing_score_is_absent && s == 0.0)).then_some(s)
            };
            let industries = record
                .get(c_ind)
                .unwrap_or("")
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            let name = record.get(c_name).unwrap_or("").trim().to_string();
            Some(EsgRecord { ticker, name, industries, month, score })
        })();
        match parsed {
            Some(r) => records.push(r),
            None => rejected += 1,
        }
    }
    Ok(LoadedEsg { table: EsgTable::new(records)?, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        parse_date(s).unwrap()
    }

    fn parse(text: &str) -> LoadedPrices {
        parse_prices(text.as_bytes(), &PriceFormat::default(), "test").unwrap()
    }

    #[test]
    fn two_by_three_file() {
        let loaded = parse(
            "date,ticker,close\n2024-01-02,A,10\n2024-01-02,B,20\n2024-01-03,A,11\n\
             2024-01-03,B,21\n2024-01-04,A,12\n2024-01-04,B,22\n",
        );
        assert_eq!(loaded.dropped, 0);
        assert_eq!(loaded.table.n_tickers(), 2);
        assert_eq!(loaded.table.n_dates(), 3);
        assert_eq!(loaded.table.closes("B").unwrap(), &[20.0, 21.0, 22.0]);
    }

    #[test]
    fn negative_close_is_dropped() {
        let loaded = parse("date,ticker,close\n2024-01-02,A,10\n2024-01-03,A,-5\n2024-01-04,A,abc\n");
        assert_eq!(loaded.dropped, 2);
        assert_eq!(loaded.table.n_dates(), 1);
    }

    #[test]
    fn intraday_timestamps_rejected() {
        let err = parse_prices(
            "date,ticker,close\n2024-01-02T10:00:00,A,10\n".as_bytes(),
            &PriceFormat::default(),
            "t",
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyInput(_)));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_prices("/nonexistent/prices.csv", &PriceFormat::default()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/prices.csv"));
    }

    #[test]
    fn columns_found_by_name() {
        let loaded = parse("close,ticker,date\n5,X,2024-02-01\n");
        assert_eq!(loaded.table.closes("X").unwrap(), &[5.0]);
    }

    #[test]
    fn full_history_policy_drops_gappy_ticker() {
        let raw = parse("date,ticker,close\n2024-01-02,A,1\n2024-01-02,B,1\n2024-01-03,A,1\n2024-01-04,A,1\n2024-01-04,B,1\n").table;
        let clean = clean_and_align(&raw, &CleaningPolicy::default()).unwrap();
        assert_eq!(clean.tickers(), &["A".to_string()]);
        assert_eq!(clean.n_dates(), 3);
    }

    #[test]
    fn complete_table_is_unchanged() {
        let raw = parse("date,ticker,close\n2024-01-02,A,1\n2024-01-02,B,2\n2024-01-03,A,3\n2024-01-03,B,4\n").table;
        assert_eq!(clean_and_align(&raw, &CleaningPolicy::default()).unwrap(), raw);
    }

    #[test]
    fn empty_universe_names_field() {
        let raw = parse("date,ticker,close\n2024-01-02,A,1\n2024-01-03,B,1\n").table;
        let err = clean_and_align(&raw, &CleaningPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyUniverse { field: "require_full_history" }));
        let lenient = CleaningPolicy { require_full_history: false, min_history_days: 2, ..Default::default() };
        let err = clean_and_align(&raw, &lenient).unwrap_err();
        assert!(matches!(err, Error::EmptyUniverse { field: "min_history_days" }));
    }

    #[test]
    fn lenient_policy_intersects_dates() {
        let raw = parse(
            "date,ticker,close\n2024-01-02,A,1\n2024-01-03,A,1\n2024-01-04,A,1\n\
             2024-01-03,B,1\n2024-01-04,B,1\n",
        )
        .table;
        let lenient = CleaningPolicy { require_full_history: false, ..Default::default() };
        let clean = clean_and_align(&raw, &lenient).unwrap();
        assert_eq!(clean.n_tickers(), 2);
        assert_eq!(clean.calendar(), &[d("2024-01-03"), d("2024-01-04")]);
        assert!(!clean.has_gaps());
    }

    #[test]
    fn min_history_must_be_at_least_two() {
        let p = CleaningPolicy { min_history_days: 1, ..Default::default() };
        assert!(p.validate().is_err());
    }

    fn dated_table(n: usize) -> PriceTable {
        let start = d("2020-01-01");
        let cal: Vec<_> = (0..n).map(|i| start + chrono::Days::new(i as u64)).collect();
        PriceTable::new(cal, vec!["A".into()], vec![(1..=n).map(|i| i as f64).collect()]).unwrap()
    }

    #[test]
    fn split_ten_dates() {
        let (train, test) = train_test_split(&dated_table(10), 0.7).unwrap();
        assert_eq!((train.n_dates(), test.n_dates()), (7, 3));
    }

    #[test]
    fn split_leaving_empty_test_fails() {
        assert!(matches!(train_test_split(&dated_table(10), 0.99), Err(Error::Split { .. })));
        assert!(train_test_split(&dated_table(10), 1.0).is_err());
        assert!(train_test_split(&dated_table(3), 0.5).is_err());
    }

    #[test]
    fn split_252_dates_boundary() {
        let table = dated_table(252);
        let (train, test) = train_test_split(&table, 0.7).unwrap();
        // ceil(0.7 * 252) = ceil(176.4) = 177 dates: indices 0..=176.
        let expected_cut = (0.7f64 * 252.0).ceil() as usize;
        assert_eq!(expected_cut, 177);
        assert_eq!(train.calendar().last(), Some(&table.calendar()[176]));
        assert_eq!(test.calendar().first(), Some(&table.calendar()[177]));
    }

    const ESG: &str = "month,ticker,name,industry,score\n\
        2023-01,A,Alpha,Banks,80\n2023-01,B,Beta,Banks;Insurance,0\n2023-01,C,Gamma,Tech,55.5\n";

    #[test]
    fn esg_three_firms() {
        let esg = parse_esg(ESG.as_bytes(), b',', &CleaningPolicy::default(), "t").unwrap();
        assert_eq!(esg.table.len(), 3);
        let b = &esg.table.records()[1];
        assert_eq!(b.score, None);
        assert_eq!(b.industries, vec!["Banks".to_string(), "Insurance".to_string()]);
        let keep_zero = CleaningPolicy { missing_score_is_absent: false, ..Default::default() };
        let esg = parse_esg(ESG.as_bytes(), b',', &keep_zero, "t").unwrap();
        assert_eq!(esg.table.records()[1].score, Some(0.0));
    }

    #[test]
    fn esg_out_of_range_rejected() {
        let text = format!("{ESG}2023-01,D,Delta,Tech,101\n");
        let esg = parse_esg(text.as_bytes(), b',', &CleaningPolicy::default(), "t").unwrap();
        assert_eq!(esg.rejected, 1);
        assert_eq!(esg.table.len(), 3);
    }

    #[test]
    fn esg_duplicates_listed() {
        let text = format!("{ESG}2023-01,A,Alpha,Banks,81\n");
        match parse_esg(text.as_bytes(), b',', &CleaningPolicy::default(), "t") {
            Err(Error::DuplicateRecords(d)) => assert_eq!(d, vec!["A@2023-01".to_string()]),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn month_parsing() {
        assert_eq!("2023-07".parse::<Month>().unwrap(), Month { year: 2023, month: 7 });
        assert!("2023-13".parse::<Month>().is_err());
        assert!("2023-7".parse::<Month>().is_err());
        assert_eq!(Month { year: 2023, month: 12 }.succ().to_string(), "2024-01");
    }
}
