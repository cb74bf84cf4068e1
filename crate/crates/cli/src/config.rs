//! Run settings: a JSON configuration file merged with command-line overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sqzbpsk::{Alphabet, EnergyModel, ExperimentParams, Squeezing};

use crate::args::CommonArgs;
use crate::error::{usage, CliError};

/// Version of the configuration schema this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// A grid given as a list, a single value, or `points` evenly spaced values
/// from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Single(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            GridSpec::Single(v) => Ok(vec![*v]),
            GridSpec::List(v) => Ok(v.clone()),
            GridSpec::Range { start, stop, points } => linspace(*start, *stop, *points),
        }
    }
}

/// Squeezing fraction: a value, a list of values, or `"optimal"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GammaSpec {
    Value(f64),
    List(Vec<f64>),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

/// On-disk configuration. Every key is optional except `schema`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    pub format: Option<String>,
    pub n_mean: Option<GridSpec>,
    pub gamma: Option<GammaSpec>,
    pub loss: Option<GridSpec>,
    pub squeezing_db: Option<f64>,
    pub squeezing_r: Option<f64>,
    pub visibility: Option<f64>,
    pub v_th: Option<f64>,
    pub v_en: Option<f64>,
    pub energy_model: Option<String>,
    pub mc: Option<McConfig>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.schema != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {} (this build reads version {SCHEMA_VERSION})",
                file.schema
            ));
        }
        Ok(file)
    }
}

/// How the energy is split between displacement and squeezing at each point.
#[derive(Debug, Clone, PartialEq)]
pub enum Allocation {
    /// Fixed fractions `γ` of the energy spent on squeezing.
    Fractions(Vec<f64>),
    /// The fraction minimizing the error at each point.
    Optimal,
    /// Fixed squeezing; the displacement takes the remaining energy.
    Fixed(Squeezing),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub format: Alphabet,
    pub n_mean: Option<Vec<f64>>,
    pub allocation: Allocation,
    pub loss: Option<Vec<f64>>,
    /// Transmitter and receiver; `beta`, `r` and `loss` are set per point.
    pub params: ExperimentParams,
    pub mc: Option<McSettings>,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Merges `flags` over the file named by `--config`, if any.
    pub fn resolve(flags: &CommonArgs) -> Result<Self, CliError> {
        let file = flags.config.as_deref().map(ConfigFile::load).transpose()?;
        Self::merge(file.as_ref(), flags)
    }

    pub fn merge(file: Option<&ConfigFile>, flags: &CommonArgs) -> Result<Self, CliError> {
        let format = match (&flags.format, file.and_then(|f| f.format.as_ref())) {
            (Some(s), _) | (None, Some(s)) => s.parse::<Alphabet>().map_err(|e| usage(e.to_string()))?,
            (None, None) => Alphabet::Bpsk,
        };

        let n_mean = match (&flags.nbar, file.and_then(|f| f.n_mean.as_ref())) {
            (Some(s), _) => Some(parse_grid(s, "--nbar")?),
            (None, Some(g)) => Some(g.values().map_err(|m| usage(format!("n_mean: {m}")))?),
            (None, None) => None,
        };
        let loss = match (&flags.loss, file.and_then(|f| f.loss.as_ref())) {
            (Some(s), _) => Some(parse_grid(s, "--loss")?),
            (None, Some(g)) => Some(g.values().map_err(|m| usage(format!("loss: {m}")))?),
            (None, None) => None,
        };

        let from_flags = allocation(
            flags.gamma.as_deref().map(parse_gamma).transpose()?,
            flags.squeezing_db,
            flags.squeezing_r,
        )?;
        let allocation = match from_flags {
            Some(a) => a,
            None => match file {
                Some(f) => allocation(
                    f.gamma.as_ref().map(gamma_from_spec).transpose()?,
                    f.squeezing_db,
                    f.squeezing_r,
                )?
                .unwrap_or(Allocation::Fractions(vec![0.0])),
                None => Allocation::Fractions(vec![0.0]),
            },
        };

        let pick = |flag: Option<f64>, key: Option<f64>, default: f64| flag.or(key).unwrap_or(default);
        let energy_model = match (&flags.energy_model, file.and_then(|f| f.energy_model.as_ref())) {
            (Some(s), _) | (None, Some(s)) => parse_energy_model(s)?,
            (None, None) => EnergyModel::Published,
        };
        let params = ExperimentParams {
            visibility: pick(flags.visibility, file.and_then(|f| f.visibility), 1.0),
            v_th: pick(flags.vth, file.and_then(|f| f.v_th), 1.0),
            v_en: pick(flags.ven, file.and_then(|f| f.v_en), 0.0),
            energy_model,
            ..ExperimentParams::ideal()
        };
        params.validate().map_err(|e| usage(e.to_string()))?;

        let file_mc = file.and_then(|f| f.mc.clone());
        let mc = match (flags.samples, file_mc) {
            (Some(samples), m) => Some(McSettings {
                samples,
                seed: flags.seed.or(m.map(|m| m.seed)).unwrap_or(0),
            }),
            (None, Some(m)) => Some(McSettings {
                samples: m.samples,
                seed: flags.seed.unwrap_or(m.seed),
            }),
            (None, None) => None,
        };
        if mc.is_some_and(|m| m.samples == 0) {
            return Err(usage("Monte Carlo needs at least one sample per symbol"));
        }

        let settings = Settings {
            format,
            n_mean,
            allocation,
            loss,
            params,
            mc,
            out: flags.out.clone().or_else(|| file.and_then(|f| f.out.clone())),
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(n) = &self.n_mean {
            check_grid(n, "n_mean", |v| v >= 0.0, "must be ≥ 0")?;
        }
        if let Some(l) = &self.loss {
            check_grid(l, "loss", |v| (0.0..=1.0).contains(&v), "must lie in [0, 1]")?;
        }
        match &self.allocation {
            Allocation::Fractions(g) => check_grid(g, "gamma", |v| (0.0..1.0).contains(&v), "must lie in [0, 1)")?,
            Allocation::Optimal => {}
            Allocation::Fixed(s) => {
                if !(s.r().is_finite() && s.r() >= 0.0) {
                    return Err(usage(format!("squeezing must be finite and ≥ 0, got {s:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn require_n_mean(&self) -> Result<&[f64], CliError> {
        self.n_mean
            .as_deref()
            .ok_or_else(|| usage("no mean photon numbers given (use --nbar or the n_mean config key)"))
    }

    pub fn require_loss(&self) -> Result<&[f64], CliError> {
        self.loss
            .as_deref()
            .ok_or_else(|| usage("no channel loss given (use --loss or the loss config key; 0 for no loss)"))
    }

    pub fn loss_or_zero(&self) -> Vec<f64> {
        self.loss.clone().unwrap_or_else(|| vec![0.0])
    }
}

fn allocation(gamma: Option<Allocation>, db: Option<f64>, r: Option<f64>) -> Result<Option<Allocation>, CliError> {
    match (gamma, db, r) {
        (None, None, None) => Ok(None),
        (Some(g), None, None) => Ok(Some(g)),
        (None, Some(db), None) => Ok(Some(Allocation::Fixed(Squeezing::Decibels(db)))),
        (None, None, Some(r)) => Ok(Some(Allocation::Fixed(Squeezing::Parameter(r)))),
        (None, Some(_), Some(_)) => Err(usage("squeezing_db and squeezing_r are mutually exclusive")),
        (Some(_), _, _) => Err(usage("gamma and a fixed squeezing level are mutually exclusive")),
    }
}

fn gamma_from_spec(spec: &GammaSpec) -> Result<Allocation, CliError> {
    match spec {
        GammaSpec::Value(v) => Ok(Allocation::Fractions(vec![*v])),
        GammaSpec::List(v) => Ok(Allocation::Fractions(v.clone())),
        GammaSpec::Keyword(k) => parse_gamma(k),
    }
}

/// `optimal` or a grid of fractions.
pub fn parse_gamma(text: &str) -> Result<Allocation, CliError> {
    if text.trim().eq_ignore_ascii_case("optimal") {
        Ok(Allocation::Optimal)
    } else {
        parse_grid(text, "gamma").map(Allocation::Fractions)
    }
}

pub fn parse_energy_model(text: &str) -> Result<EnergyModel, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "published" => Ok(EnergyModel::Published),
        "exact" => Ok(EnergyModel::Exact),
        other => Err(usage(format!("unknown energy model {other:?} (expected published or exact)"))),
    }
}

/// Comma-separated values, each either a number or `start:stop:points`.
pub fn parse_grid(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{what}: cannot parse {s:?} as a number")))
        };
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(number(v)?),
            [a, b, n] => {
                let points = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("{what}: cannot parse {n:?} as a point count")))?;
                out.extend(linspace(number(a)?, number(b)?, points).map_err(|m| usage(format!("{what}: {m}")))?);
            }
            _ => return Err(usage(format!("{what}: expected a number or start:stop:points, got {item:?}"))),
        }
    }
    Ok(out)
}

fn linspace(start: f64, stop: f64, points: usize) -> Result<Vec<f64>, String> {
    match points {
        0 => Err("a range needs at least one point".into()),
        1 => Ok(vec![start]),
        n => {
            let step = (stop - start) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| if i == n - 1 { stop } else { start + i as f64 * step })
                .collect())
        }
    }
}

fn check_grid(values: &[f64], what: &str, ok: impl Fn(f64) -> bool, rule: &str) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(usage(format!("{what}: grid is empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || !ok(**v)) {
        return Err(usage(format!("{what}: {v} {rule}")));
    }
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let decreasing = values.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(usage(format!("{what}: grid must be strictly monotone")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1, 0.2,3", "x").unwrap(), vec![0.1, 0.2, 3.0]);
        assert_eq!(parse_grid("0:1:5", "x").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:2,2", "x").unwrap(), vec![0.0, 1.0, 2.0]);
        assert!(parse_grid("a", "x").is_err());
        assert!(parse_grid("0:1", "x").is_err());
        assert!(parse_grid("0:1:0", "x").is_err());
    }

    #[test]
    fn gamma_keyword() {
        assert_eq!(parse_gamma("optimal").unwrap(), Allocation::Optimal);
        assert_eq!(parse_gamma("0,0.5").unwrap(), Allocation::Fractions(vec![0.0, 0.5]));
    }

    #[test]
    fn config_schema() {
        let c = ConfigFile::parse(r#"{"schema": 1, "n_mean": {"start": 0, "stop": 1, "points": 3}, "gamma": "optimal"}"#)
            .unwrap();
        assert_eq!(c.n_mean.unwrap().values().unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(c.gamma, Some(GammaSpec::Keyword("optimal".into())));
        assert!(ConfigFile::parse(r#"{"schema": 2}"#).unwrap_err().contains("schema"));
        assert!(ConfigFile::parse(r#"{"n_mean": [1]}"#).is_err());
        assert!(ConfigFile::parse(r#"{"schema": 1, "nbar": [1]}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse(
            r#"{"schema": 1, "n_mean": [1, 2], "squeezing_db": 3.8, "visibility": 0.9, "mc": {"samples": 10, "seed": 4}}"#,
        )
        .unwrap();
        let flags = CommonArgs {
            gamma: Some("optimal".into()),
            visibility: Some(0.95),
            seed: Some(9),
            ..Default::default()
        };
        let s = Settings::merge(Some(&file), &flags).unwrap();
        assert_eq!(s.allocation, Allocation::Optimal);
        assert_eq!(s.params.visibility, 0.95);
        assert_eq!(s.n_mean, Some(vec![1.0, 2.0]));
        assert_eq!(s.mc, Some(McSettings { samples: 10, seed: 9 }));

        let s = Settings::merge(Some(&file), &CommonArgs::default()).unwrap();
        assert_eq!(s.allocation, Allocation::Fixed(Squeezing::Decibels(3.8)));
    }

    #[test]
    fn rejects_bad_settings() {
        let with = |f: CommonArgs| Settings::merge(None, &f);
        assert!(with(CommonArgs { nbar: Some("1,0.5,2".into()), ..Default::default() }).is_err());
        assert!(with(CommonArgs { nbar: Some("-1".into()), ..Default::default() }).is_err());
        assert!(with(CommonArgs { loss: Some("1.5".into()), ..Default::default() }).is_err());
        assert!(with(CommonArgs { gamma: Some("1".into()), ..Default::default() }).is_err());
        assert!(with(CommonArgs { vth: Some(0.5), ..Default::default() }).is_err());
        assert!(with(CommonArgs { samples: Some(0), ..Default::default() }).is_err());
        let both = ConfigFile::parse(r#"{"schema": 1, "gamma": 0.1, "squeezing_r": 0.2}"#).unwrap();
        assert!(Settings::merge(Some(&both), &CommonArgs::default()).is_err());
    }
}
