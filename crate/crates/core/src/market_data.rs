//! Daily OHLC ingestion and range-based log-volatility series.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimators::MagnitudeSeries;
use crate::exec::replica_rng;
use crate::gaussian_field::BlockSampler;
use crate::params::{CascadeParams, ModelKind, TimeGrid};

/// Row errors collected before parsing gives up.
pub const ERROR_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcRecord {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcRecord {
    pub fn check(&self) -> Result<(), String> {
        let prices = [self.open, self.high, self.low, self.close];
        if prices.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err("prices must be positive and finite".into());
        }
        let lo = self.open.min(self.close);
        let hi = self.open.max(self.close);
        if self.low > self.high {
            return Err(format!("low {} above high {}", self.low, self.high));
        }
        if self.low > lo || self.high < hi {
            return Err(format!(
                "open/close [{lo}, {hi}] outside low/high [{}, {}]",
                self.low, self.high
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum MarketDataError {
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("input is empty")]
    Empty,
    #[error("missing required column '{0}'")]
    MissingColumn(&'static str),
    #[error("{} rows rejected, giving up (first: {})", .0.len(), .0[0])]
    TooManyErrors(Vec<RowError>),
    #[error("no usable records: {0}")]
    NoRecords(String),
}

/// Parsed records plus the rows that were rejected along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct OhlcParse {
    pub records: Vec<OhlcRecord>,
    pub rejected: Vec<RowError>,
    pub reordered: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OhlcFormat {
    /// Field delimiter; detected from the header line when `None`.
    pub delimiter: Option<u8>,
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    if s.len() == 8 && s.bytes().all(|b| b.is_ascii_digit()) {
        NaiveDate::parse_from_str(s, "%Y%m%d").ok()
    } else {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
    }
}

/// Parse delimiter-separated OHLC text with a header row.
///
/// Bad rows are collected with their line numbers and skipped. Parsing fails
/// once more than [`ERROR_CAP`] rows have been rejected. Records come back in
/// ascending date order; for repeated dates the first row wins.
pub fn parse_ohlc<R: Read>(mut source: R, format: OhlcFormat) -> Result<OhlcParse, MarketDataError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let header_line = text.lines().find(|l| !l.trim().is_empty()).ok_or(MarketDataError::Empty)?;
    let delimiter = format
        .delimiter
        .unwrap_or(if header_line.contains('\t') { b'\t' } else { b',' });
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let column = |name: &'static str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or(MarketDataError::MissingColumn(name))
    };
    let cols = [
        column("date")?,
        column("open")?,
        column("high")?,
        column("low")?,
        column("close")?,
    ];
    let mut rows: Vec<(u64, OhlcRecord)> = Vec::new();
    let mut rejected = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed = (|| -> Result<OhlcRecord, String> {
            let field = |i: usize| row.get(cols[i]).ok_or_else(|| format!("missing field {}", i + 1));
            let date_s = field(0)?;
            let date = parse_date(date_s).ok_or_else(|| format!("bad date '{date_s}'"))?;
            let price = |i: usize| -> Result<f64, String> {
                let s = field(i)?;
                s.parse::<f64>().map_err(|_| format!("bad price '{s}'"))
            };
            let r = OhlcRecord {
                date,
                open: price(1)?,
                high: price(2)?,
                low: price(3)?,
                close: price(4)?,
            };
            r.check()?;
            Ok(r)
        })();
        match parsed {
            Ok(r) => rows.push((line, r)),
            Err(message) => rejected.push(RowError { line, message }),
        }
        if rejected.len() > ERROR_CAP {
            return Err(MarketDataError::TooManyErrors(rejected));
        }
    }
    let reordered = rows.windows(2).any(|w| w[1].1.date < w[0].1.date);
    if reordered {
        log::warn!("input dates are not in ascending order; records were sorted");
        rows.sort_by_key(|(_, r)| r.date);
    }
    let mut records: Vec<OhlcRecord> = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        if records.last().is_some_and(|prev| prev.date == r.date) {
            rejected.push(RowError {
                line,
                message: format!("duplicate date {}", r.date),
            });
        } else {
            records.push(r);
        }
    }
    if rejected.len() > ERROR_CAP {
        return Err(MarketDataError::TooManyErrors(rejected));
    }
    rejected.sort_by_key(|e| e.line);
    for e in &rejected {
        log::warn!("rejected {e}");
    }
    Ok(OhlcParse {
        records,
        rejected,
        reordered,
    })
}

/// Write records as `date,open,high,low,close` with ISO dates.
pub fn write_ohlc<W: Write>(records: &[OhlcRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "open", "high", "low", "close"])?;
    for r in records {
        w.write_record([
            r.date.format("%Y-%m-%d").to_string(),
            r.open.to_string(),
            r.high.to_string(),
            r.low.to_string(),
            r.close.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProxyKind {
    /// `ln(high / low)`.
    #[default]
    LogRange,
    /// `(high - low) / close`.
    RelativeRange,
}

impl ProxyKind {
    pub fn range(self, r: &OhlcRecord) -> f64 {
        match self {
            ProxyKind::LogRange => (r.high / r.low).ln(),
            ProxyKind::RelativeRange => (r.high - r.low) / r.close,
        }
    }
}

impl fmt::Display for ProxyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProxyKind::LogRange => "log-range",
            ProxyKind::RelativeRange => "relative-range",
        })
    }
}

impl FromStr for ProxyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "log-range" => Ok(ProxyKind::LogRange),
            "relative-range" => Ok(ProxyKind::RelativeRange),
            other => Err(format!("unknown proxy '{other}' (expected log-range or relative-range)")),
        }
    }
}

/// `omega(k) = ln sigma(k)` on consecutive trading days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyMagnitudeSeries {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
    pub proxy_kind: ProxyKind,
    /// Zero-range days left out of the series.
    pub skipped: usize,
}

impl DailyMagnitudeSeries {
    /// The series on a unit trading-day step.
    pub fn to_magnitude(&self) -> crate::Result<MagnitudeSeries> {
        MagnitudeSeries::new(1.0, 0.0, self.values.clone())
    }

    /// `k,date,omega` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "date", "omega"])?;
        for (k, (d, v)) in self.dates.iter().zip(&self.values).enumerate() {
            w.write_record([k.to_string(), d.format("%Y-%m-%d").to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn magnitude_series(records: &[OhlcRecord], proxy: ProxyKind) -> Result<DailyMagnitudeSeries, MarketDataError> {
    if records.is_empty() {
        return Err(MarketDataError::NoRecords("empty record set".into()));
    }
    let mut dates = Vec::with_capacity(records.len());
    let mut values = Vec::with_capacity(records.len());
    let mut skipped = 0;
    for r in records {
        if !(r.high > r.low) {
            skipped += 1;
            continue;
        }
        dates.push(r.date);
        values.push(proxy.range(r).ln());
    }
    if skipped > 0 {
        log::warn!("skipped {skipped} zero-range day(s)");
    }
    if values.is_empty() {
        return Err(MarketDataError::NoRecords("every day has high == low".into()));
    }
    Ok(DailyMagnitudeSeries {
        dates,
        values,
        proxy_kind: proxy,
        skipped,
    })
}

/// Settings for synthetic daily bars drawn from a multifractal random walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticOhlc {
    pub days: usize,
    pub lambda2: f64,
    /// Daily log-return variance scale.
    pub sigma2: f64,
    /// Brownian steps per day used to resolve the intraday high and low.
    pub intraday_steps: usize,
    /// Block length for the daily log-volatility field.
    pub block_len: usize,
    pub start_price: f64,
    pub start_date: NaiveDate,
}

impl Default for SyntheticOhlc {
    fn default() -> Self {
        SyntheticOhlc {
            days: 21_000,
            lambda2: 0.01,
            sigma2: 1e-4,
            intraday_steps: 64,
            block_len: 4096,
            start_price: 100.0,
            start_date: NaiveDate::from_ymd_opt(1920, 1, 2).expect("valid date"),
        }
    }
}

fn next_business_day(d: NaiveDate) -> NaiveDate {
    let mut n = d.succ_opt().expect("date in range");
    while matches!(n.weekday(), Weekday::Sat | Weekday::Sun) {
        n = n.succ_opt().expect("date in range");
    }
    n
}

/// Daily bars of `exp(X)` where `X` is a Brownian motion subordinated to the
/// aging cascade with cutoff one day: the daily log-volatility is drawn
/// block-wise from the non-stationary field and held constant within the day.
pub fn synthetic_ohlc(cfg: &SyntheticOhlc, seed: u64) -> crate::Result<Vec<OhlcRecord>> {
    if cfg.days == 0 || cfg.intraday_steps == 0 {
        return Err(crate::CascadeError::InvalidParameter(
            "days and intraday_steps must be positive".into(),
        ));
    }
    let params = CascadeParams::nonstationary(cfg.lambda2, 1.0)?.with_sigma2(cfg.sigma2)?;
    let grid = TimeGrid::new(1.0, 1.0, cfg.days)?;
    let omega = BlockSampler::new(ModelKind::Nonstationary, &grid, &params, cfg.block_len.min(cfg.days))?
        .sample_path(seed, 0)
        .values;
    let mut rng = replica_rng(seed, 1);
    let mut log_price = cfg.start_price.ln();
    let mut date = cfg.start_date;
    let mut out = Vec::with_capacity(cfg.days);
    for w in omega {
        let sd = (cfg.sigma2 * w.exp() / cfg.intraday_steps as f64).sqrt();
        let open = log_price;
        let (mut hi, mut lo) = (open, open);
        for _ in 0..cfg.intraday_steps {
            let z: f64 = rng.sample(StandardNormal);
            log_price += sd * z;
            hi = hi.max(log_price);
            lo = lo.min(log_price);
        }
        out.push(OhlcRecord {
            date,
            open: open.exp(),
            high: hi.exp(),
            low: lo.exp(),
            close: log_price.exp(),
        });
        date = next_business_day(date);
    }
    Ok(out)
}
