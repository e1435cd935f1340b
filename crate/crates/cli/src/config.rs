//! Sweep configuration: defaults, a flat key=value file format, and flag
//! overrides layered on top (flags beat file, file beats defaults).

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GridKind {
    Linear,
    Log,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::Linear => "linear",
            GridKind::Log => "log",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_mean: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub grid: GridKind,
    pub eps_tail: f64,
    /// Cut position. The negativity bound is only defined at 0; other values
    /// are carried through and rejected per evaluation point.
    pub split: f64,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_mean: 10.0,
            t_min: 0.1,
            t_max: 100.0,
            t_steps: 50,
            grid: GridKind::Log,
            eps_tail: 1e-8,
            split: 0.0,
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_mean.is_finite() && self.n_mean > 0.0) {
            bail!("n_mean must be finite and positive, got {}", self.n_mean);
        }
        if !(self.t_min.is_finite() && self.t_min > 0.0) {
            bail!("t_min must be finite and positive, got {}", self.t_min);
        }
        if !(self.t_max.is_finite() && self.t_max >= self.t_min) {
            bail!("t_max must be finite and >= t_min, got {}", self.t_max);
        }
        if self.t_steps < 1 {
            bail!("t_steps must be at least 1");
        }
        if !(self.eps_tail > 0.0 && self.eps_tail < 1.0) {
            bail!("eps_tail must lie in (0, 1), got {}", self.eps_tail);
        }
        if !self.split.is_finite() {
            bail!("split must be finite, got {}", self.split);
        }
        Ok(())
    }
}

fn parse(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {lineno}: expected key=value, got {raw:?}");
        };
        let (key, value) = (key.trim(), value.trim());
        let num = |field: &str| -> Result<f64> {
            value.parse().with_context(|| format!("line {lineno}: bad number for {field}"))
        };
        match key {
            "n_mean" => cfg.n_mean = num("n_mean")?,
            "t_min" => cfg.t_min = num("t_min")?,
            "t_max" => cfg.t_max = num("t_max")?,
            "eps_tail" => cfg.eps_tail = num("eps_tail")?,
            "split" => cfg.split = num("split")?,
            "t_steps" => {
                cfg.t_steps = value
                    .parse()
                    .with_context(|| format!("line {lineno}: bad count for t_steps"))?;
            }
            "grid" => {
                cfg.grid = match value {
                    "linear" => GridKind::Linear,
                    "log" => GridKind::Log,
                    other => bail!("line {lineno}: grid must be linear or log, got {other:?}"),
                }
            }
            "format" => {
                cfg.format = match value {
                    "csv" => OutputFormat::Csv,
                    "jsonl" => OutputFormat::Jsonl,
                    other => bail!("line {lineno}: format must be csv or jsonl, got {other:?}"),
                }
            }
            other => bail!("line {lineno}: unknown key {other:?}"),
        }
    }
    Ok(cfg)
}
