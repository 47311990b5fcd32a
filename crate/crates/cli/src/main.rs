use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use esgpairs::esg::{rank_industries, summarize, IndustryScore};
use esgpairs::ingest::load_esg;
use esgpairs::synth::{generate_market, SynthConfig};
use esgpairs_cli::config::{parse_override, Stage};
use esgpairs_cli::{run_pipeline, CliError, PipelineConfig, RunManifest};

#[derive(Parser)]
#[command(name = "esgpairs", version, about = "ESG-screened pairs trading: discovery, backtests and report tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: ESG selection, discovery, scoring, filtering and backtests.
    Run(Common),
    /// ESG descriptive summary and industry ranking.
    EsgReport {
        #[command(flatten)]
        common: Common,
        /// Industries listed at each end of the ranking; overrides `esg.top_k`.
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Discovery and pair filtering without backtests.
    Screen(Common),
    /// Backtests an explicit pair list.
    Backtest {
        #[command(flatten)]
        common: Common,
        /// Pairs as `A:B`, comma separated or repeated.
        #[arg(long, value_delimiter = ',', required = true)]
        pairs: Vec<String>,
    },
    /// Writes a synthetic market with planted cointegrated pairs.
    Synth(Common),
}

#[derive(Args, Default)]
struct Common {
    /// TOML configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Rerun the configuration recorded in a manifest.json.
    #[arg(long, conflicts_with = "config")]
    replay: Option<PathBuf>,
    /// Price CSV; a synthetic market is generated when absent.
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Monthly ESG CSV.
    #[arg(long)]
    esg: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Seed for synthetic data; overrides `ESGPAIRS_SEED`.
    #[arg(long)]
    seed: Option<u64>,
    /// Share of dates in the training window.
    #[arg(long)]
    train_fraction: Option<f64>,
    /// ESG approach: 1 top firm per industry, 2 above industry mean.
    #[arg(long)]
    approach: Option<u8>,
    /// Approach 1 minimum score.
    #[arg(long)]
    zeta: Option<f64>,
    /// Approach 2 margin over the industry mean.
    #[arg(long)]
    xi: Option<f64>,
    /// ESG snapshot month, YYYY-MM.
    #[arg(long)]
    as_of: Option<String>,
    /// Keep at most this many pairs, lowest p-value first.
    #[arg(long)]
    max_pairs: Option<usize>,
    /// Skip ESG screening.
    #[arg(long)]
    no_esg: bool,
    /// Any configuration key, e.g. `--set strategy.fast_span=20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn resolve(&self) -> Result<PipelineConfig, CliError> {
        let mut config = match &self.replay {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                let manifest: RunManifest = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: not a run manifest: {e}", path.display())))?;
                manifest.config
            }
            None => {
                let mut o: Vec<(String, toml::Value)> = Vec::new();
                let s = |v: &Path| toml::Value::String(v.display().to_string());
                if let Some(v) = self.prices.as_deref() {
                    o.push(("input.prices".into(), s(v)));
                }
                if let Some(v) = self.esg.as_deref() {
                    o.push(("input.esg".into(), s(v)));
                }
                if let Some(v) = self.seed {
                    o.push(("seed".into(), toml::Value::Integer(v as i64)));
                }
                if let Some(v) = self.train_fraction {
                    o.push(("split.train_fraction".into(), toml::Value::Float(v)));
                }
                if let Some(v) = self.approach {
                    o.push(("esg.approach".into(), toml::Value::Integer(v.into())));
                }
                if let Some(v) = self.zeta {
                    o.push(("esg.zeta".into(), toml::Value::Float(v)));
                }
                if let Some(v) = self.xi {
                    o.push(("esg.xi".into(), toml::Value::Float(v)));
                }
                if let Some(v) = self.as_of.as_ref() {
                    o.push(("esg.as_of".into(), toml::Value::String(v.clone())));
                }
                if let Some(v) = self.max_pairs {
                    o.push(("selection.max_pairs".into(), toml::Value::Integer(v as i64)));
                }
                for arg in &self.set {
                    o.push(parse_override(arg)?);
                }
                PipelineConfig::resolve(self.config.as_deref(), &o)?
            }
        };
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if self.no_esg {
            config.stages.retain(|s| *s != Stage::Esg);
        }
        Ok(config)
    }
}

fn parse_pair(text: &str) -> Result<[String; 2], CliError> {
    match text.split_once(':') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok([a.trim().into(), b.trim().into()]),
        _ => Err(CliError::Config(format!("pair `{text}` is not TICKER_A:TICKER_B"))),
    }
}

fn print_run(manifest: &RunManifest) {
    println!("universe: {} tickers", manifest.universe.len());
    println!("selected pairs: {}", manifest.selected_pairs.len());
    for [a, b] in &manifest.selected_pairs {
        println!("  {a}:{b}");
    }
    println!("output: {}", manifest.config.output_dir.display());
}

#[derive(Serialize)]
struct EsgReport {
    summary: esgpairs::esg::EsgSummary,
    top_industries: Vec<IndustryScore>,
    bottom_industries: Vec<IndustryScore>,
}

fn esg_report(config: &PipelineConfig, top_k: Option<usize>) -> Result<(), CliError> {
    config.validate()?;
    let esg = match &config.input.esg {
        Some(p) => load_esg(p, &config.cleaning).map_err(CliError::stage("load"))?.table,
        None => {
            let synth = SynthConfig { seed: config.seed, ..config.synth.clone() };
            generate_market(&synth).map_err(CliError::stage("load"))?.esg
        }
    };
    let as_of = config.esg.as_of.or_else(|| esg.latest_month()).ok_or_else(|| CliError::Empty("ESG table has no records".into()))?;
    let summary = summarize(&esg, as_of).map_err(CliError::stage("esg"))?;
    let k = top_k.unwrap_or(config.esg.top_k).min(summary.n_industries);
    let (top, bottom) = rank_industries(&summary, k).map_err(CliError::stage("esg"))?;
    let report = EsgReport { summary, top_industries: top, bottom_industries: bottom };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    std::fs::create_dir_all(&config.output_dir).map_err(CliError::io(&config.output_dir))?;
    let path = config.output_dir.join("esg_report.json");
    std::fs::write(&path, &json).map_err(CliError::io(&path))?;
    print!("{json}");
    Ok(())
}

#[derive(Serialize)]
struct SynthManifest<'a> {
    config: &'a SynthConfig,
    files: [&'static str; 3],
}

fn synth(config: &PipelineConfig) -> Result<(), CliError> {
    let cfg = SynthConfig { seed: config.seed, ..config.synth.clone() };
    let market = generate_market(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let file = |name: &str| -> Result<std::fs::File, CliError> {
        let p = dir.join(name);
        std::fs::File::create(&p).map_err(CliError::io(p))
    };
    market.prices.write_csv(file("prices.csv")?).map_err(CliError::stage("synth"))?;
    market.esg.write_csv(file("esg.csv")?).map_err(CliError::stage("synth"))?;
    let mut planted = String::from("ticker_a,ticker_b,hedge_ratio\n");
    for p in &market.planted {
        planted.push_str(&format!("{},{},{}\n", p.ticker_a, p.ticker_b, p.hedge_ratio));
    }
    let p = dir.join("planted.csv");
    std::fs::write(&p, planted).map_err(CliError::io(p))?;
    let manifest = SynthManifest { config: &cfg, files: ["prices.csv", "esg.csv", "planted.csv"] };
    let p = dir.join("synth_manifest.json");
    std::fs::write(&p, serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n").map_err(CliError::io(p))?;
    println!("wrote {} tickers x {} days to {}", market.prices.n_tickers(), market.prices.n_dates(), dir.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => print_run(&run_pipeline(&common.resolve()?)?),
        Command::Screen(common) => {
            let mut config = common.resolve()?;
            config.stages.retain(|s| *s != Stage::Backtest);
            print_run(&run_pipeline(&config)?);
        }
        Command::Backtest { common, pairs } => {
            let mut config = common.resolve()?;
            config.pairs = Some(pairs.iter().map(|p| parse_pair(p)).collect::<Result<_, _>>()?);
            config.stages = vec![Stage::Backtest];
            print_run(&run_pipeline(&config)?);
        }
        Command::EsgReport { common, top_k } => esg_report(&common.resolve()?, top_k)?,
        Command::Synth(common) => {
            let config = common.resolve()?;
            config.validate()?;
            synth(&config)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
