//! ESG-screened statistical-arbitrage toolkit.
//!
//! The pipeline runs in stages, each backed by one module:
//!
//! * [`ingest`] loads, cleans and splits price and ESG tables;
//! * [`esg`] summarizes scores and selects the tradable universe;
//! * [`stattests`] holds the unit-root, cointegration and mean-reversion statistics;
//! * [`discovery`] embeds returns with PCA, clusters with OPTICS and scores candidate pairs;
//! * [`strategy`] turns a spread into APO entry and exit signals;
//! * [`backtest`] simulates the signals with commissions and reports metrics.
//!
//! [`synth`] generates seeded markets with planted cointegrated pairs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backtest;
pub mod discovery;
pub mod error;
pub mod esg;
pub mod ingest;
pub mod stattests;
pub mod strategy;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
