//! Synthetic daily bars for exercising `analyze` end to end.

use lognormal_cascade::market_data::{synthetic_ohlc, write_ohlc, SyntheticOhlc};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::OutputDir;
use crate::summary::Summary;

pub fn run(cfg: &ExperimentConfig) -> Result<Summary> {
    let p = cfg.params()?;
    let settings = SyntheticOhlc {
        days: cfg.grid.n,
        lambda2: p.lambda2,
        sigma2: p.sigma2,
        ..SyntheticOhlc::default()
    };
    let records = synthetic_ohlc(&settings, cfg.seed()?)?;
    let dir = OutputDir::create(cfg)?;
    let path = dir.path("ohlc.csv");
    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_ohlc(&records, std::io::BufWriter::new(file)).map_err(|e| CliError::io(&path, e.into()))?;
    let summary = Summary::new(
        "synth-ohlc",
        Vec::new(),
        json!({
            "days": records.len(),
            "first": records.first().map(|r| r.date.to_string()),
            "last": records.last().map(|r| r.date.to_string()),
            "settings": settings,
        }),
    );
    dir.write_json("summary.json", &summary)?;
    Ok(summary)
}
