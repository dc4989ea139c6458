//! Flag and config-file handling. Values resolve as command defaults, then
//! the `--config` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use lognormal_cascade::market_data::ProxyKind;
use lognormal_cascade::{CascadeParams, ModelKind, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig4,
    Fig5,
    Fig6c,
    Fig8,
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6c => "fig6c",
            Figure::Fig8 => "fig8",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    Reproduce,
    Analyze,
    SynthOhlc,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Reproduce => "reproduce",
            CommandKind::Analyze => "analyze",
            CommandKind::SynthOhlc => "synth-ohlc",
        })
    }
}

/// Settings shared by every subcommand. The same fields are read from the
/// `--config` JSON file; flags given on the command line win.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    /// stationary or nonstationary
    #[arg(long)]
    pub model: Option<ModelKind>,
    /// Intermittency coefficient
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Integral scale (stationary model only)
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub integral_scale: Option<f64>,
    /// Cutoff scale
    #[arg(long)]
    pub ell: Option<f64>,
    /// Variance scale of the walk
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid step
    #[arg(long)]
    pub dt: Option<f64>,
    /// First grid time
    #[arg(long)]
    pub t0: Option<f64>,
    /// Monte-Carlo replicas
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Subsample window lengths, comma separated
    #[arg(long, value_delimiter = ',')]
    #[serde(alias = "delta-t")]
    pub delta_t: Option<Vec<f64>>,
    /// Moment orders, comma separated
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<f64>>,
    /// Lags in time units, comma separated
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<f64>>,
    /// log-range or relative-range
    #[arg(long)]
    pub proxy: Option<ProxyKind>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the settings above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Overrides {
    pub fn load(path: &Path) -> Result<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }

    /// Field-wise merge where values set in `self` win over `base`.
    pub fn or(self, base: Overrides) -> Overrides {
        Overrides {
            model: self.model.or(base.model),
            lambda2: self.lambda2.or(base.lambda2),
            integral_scale: self.integral_scale.or(base.integral_scale),
            ell: self.ell.or(base.ell),
            sigma2: self.sigma2.or(base.sigma2),
            n: self.n.or(base.n),
            dt: self.dt.or(base.dt),
            t0: self.t0.or(base.t0),
            reps: self.reps.or(base.reps),
            seed: self.seed.or(base.seed),
            delta_t: self.delta_t.or(base.delta_t),
            q: self.q.or(base.q),
            tau: self.tau.or(base.tau),
            proxy: self.proxy.or(base.proxy),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config.or(base.config),
        }
    }
}

/// Fully resolved settings of one run; written to `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: String,
    pub command: CommandKind,
    pub figure: Option<Figure>,
    pub input: Option<PathBuf>,
    pub model: ModelKind,
    /// Absent for `analyze` unless `--lambda2` fixes the overlay.
    pub params: Option<CascadeParams>,
    pub grid: TimeGrid,
    pub reps: usize,
    pub delta_t: Vec<f64>,
    pub q: Vec<f64>,
    pub tau: Vec<f64>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub proxy: ProxyKind,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn params(&self) -> Result<CascadeParams> {
        self.params
            .ok_or_else(|| CliError::Validation(format!("{} needs model parameters", self.command)))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| CliError::Validation(format!("--seed is required for {}", self.command)))
    }
}

pub const DEFAULT_DELTA_T: [f64; 6] = [16.0, 32.0, 64.0, 128.0, 256.0, 512.0];

struct Defaults {
    lambda2: Option<f64>,
    sigma2: f64,
    ell: f64,
    dt: f64,
    n: usize,
    /// First grid time in units of `dt`.
    t0_steps: f64,
    reps: usize,
}

fn defaults(command: CommandKind, figure: Option<Figure>) -> Defaults {
    let base = Defaults {
        lambda2: Some(1.0),
        sigma2: 1.0,
        ell: 1.0,
        dt: 1.0,
        n: 500,
        t0_steps: 0.0,
        reps: 1,
    };
    match (command, figure) {
        (CommandKind::Reproduce, Some(Figure::Fig4 | Figure::Fig5)) => Defaults {
            t0_steps: 1.0,
            reps: 500,
            ..base
        },
        (CommandKind::Reproduce, _) => Defaults {
            lambda2: Some(0.01),
            n: 20_000,
            t0_steps: 1.0,
            ..base
        },
        (CommandKind::Analyze, _) => Defaults {
            lambda2: None,
            n: 0,
            ..base
        },
        (CommandKind::SynthOhlc, _) => Defaults {
            lambda2: Some(0.01),
            sigma2: 1e-4,
            n: 21_000,
            ..base
        },
        (CommandKind::Simulate, _) => base,
    }
}

fn positive_list(name: &str, v: &[f64]) -> Result<()> {
    match v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        Some(bad) => Err(CliError::Validation(format!("--{name} values must be positive, got {bad}"))),
        None => Ok(()),
    }
}

/// Merge defaults, the optional config file and the flags, then validate.
pub fn resolve(
    command: CommandKind,
    figure: Option<Figure>,
    input: Option<PathBuf>,
    flags: Overrides,
) -> Result<ExperimentConfig> {
    let file = match &flags.config {
        Some(path) => Overrides::load(path)?,
        None => Overrides::default(),
    };
    let o = flags.or(file);
    let d = defaults(command, figure);

    let model = o.model.unwrap_or(if o.integral_scale.is_some() {
        ModelKind::Stationary
    } else {
        ModelKind::Nonstationary
    });
    match (model, o.integral_scale) {
        (ModelKind::Stationary, None) => {
            return Err(CliError::Validation("--model stationary requires --T".into()))
        }
        (ModelKind::Nonstationary, Some(_)) => {
            return Err(CliError::Validation(
                "--T only applies to the stationary model".into(),
            ))
        }
        _ => {}
    }
    let ell = o.ell.unwrap_or(d.ell);
    let sigma2 = o.sigma2.unwrap_or(d.sigma2);
    let params = match o.lambda2.or(d.lambda2) {
        Some(l2) => {
            let p = match o.integral_scale {
                Some(t) => CascadeParams::stationary(l2, t, ell)?,
                None => CascadeParams::nonstationary(l2, ell)?,
            };
            Some(p.with_sigma2(sigma2)?)
        }
        None => None,
    };

    let dt = o.dt.unwrap_or(d.dt);
    let n = o.n.unwrap_or(d.n);
    if command != CommandKind::Analyze && n == 0 {
        return Err(CliError::Validation("--n must be positive".into()));
    }
    let t0 = o.t0.unwrap_or(d.t0_steps * dt);
    let grid = TimeGrid::new(t0, dt, n.max(1))?;

    let reps = o.reps.unwrap_or(d.reps);
    let min_reps = match figure {
        Some(Figure::Fig4 | Figure::Fig5) => 2,
        _ => 1,
    };
    if reps < min_reps {
        return Err(CliError::Validation(format!("--reps must be at least {min_reps}")));
    }

    let delta_t = o.delta_t.unwrap_or_else(|| DEFAULT_DELTA_T.to_vec());
    positive_list("delta-t", &delta_t)?;
    if delta_t.is_empty() {
        return Err(CliError::Validation("--delta-t needs at least one value".into()));
    }
    let q = o.q.unwrap_or_else(|| vec![1.0, 2.0, 3.0, 4.0]);
    positive_list("q", &q)?;
    let tau = o
        .tau
        .unwrap_or_else(|| [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|k| k * dt).collect());
    positive_list("tau", &tau)?;

    let stochastic = match command {
        CommandKind::Simulate | CommandKind::SynthOhlc => true,
        // With lambda2 = 0 the field is identically zero and nothing is drawn.
        CommandKind::Reproduce => params.is_none_or(|p| p.lambda2 > 0.0),
        CommandKind::Analyze => false,
    };
    if stochastic && o.seed.is_none() {
        return Err(CliError::Validation(format!("--seed is required for {command}")));
    }

    Ok(ExperimentConfig {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        command,
        figure,
        input,
        model,
        params,
        grid,
        reps,
        delta_t,
        q,
        tau,
        seed: o.seed,
        out: o.out.unwrap_or_else(|| PathBuf::from("cascade-output")),
        proxy: o.proxy.unwrap_or_default(),
        format: o.format.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(f: impl FnOnce(&mut Overrides)) -> Overrides {
        let mut o = Overrides::default();
        f(&mut o);
        o
    }

    #[test]
    fn figure_defaults() {
        let c = resolve(CommandKind::Reproduce, Some(Figure::Fig5), None, flags(|o| o.seed = Some(1))).unwrap();
        let p = c.params.unwrap();
        assert_eq!((p.lambda2, p.cutoff, c.grid.n, c.reps), (1.0, 1.0, 500, 500));
        assert_eq!(c.grid.t0, 1.0);
        let c = resolve(CommandKind::Reproduce, Some(Figure::Fig6c), None, flags(|o| o.seed = Some(1))).unwrap();
        assert_eq!((c.params.unwrap().lambda2, c.grid.n), (0.01, 20_000));
        assert_eq!(c.delta_t, DEFAULT_DELTA_T);
    }

    #[test]
    fn stationary_needs_integral_scale() {
        let e = resolve(
            CommandKind::Simulate,
            None,
            None,
            flags(|o| {
                o.model = Some(ModelKind::Stationary);
                o.seed = Some(1);
            }),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn seed_is_mandatory_for_random_runs() {
        let e = resolve(CommandKind::Simulate, None, None, Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let flat = flags(|o| o.lambda2 = Some(0.0));
        assert!(resolve(CommandKind::Reproduce, Some(Figure::Fig6c), None, flat).is_ok());
    }

    #[test]
    fn flags_override_file_values() {
        let file = flags(|o| {
            o.lambda2 = Some(0.2);
            o.n = Some(64);
        });
        let merged = flags(|o| o.n = Some(128)).or(file);
        assert_eq!((merged.lambda2, merged.n), (Some(0.2), Some(128)));
    }

    #[test]
    fn file_keys_match_flag_names() {
        let o: Overrides =
            serde_json::from_str(r#"{"T": 50, "delta-t": [8, 16], "proxy": "relative-range", "format": "json"}"#).unwrap();
        assert_eq!(o.integral_scale, Some(50.0));
        assert_eq!(o.delta_t, Some(vec![8.0, 16.0]));
        assert_eq!(o.proxy, Some(ProxyKind::RelativeRange));
        assert!(serde_json::from_str::<Overrides>(r#"{"lamda2": 1}"#).is_err());
    }
}
