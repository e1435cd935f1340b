//! Temperature sweep of the negativity lower bound at fixed mean particle
//! number. Rows are computed by a worker pool and written in grid order as
//! soon as they become contiguous, so a long sweep can be resumed from
//! whatever already reached the output file.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;

use anyhow::{bail, Context, Result};
use bosonsplit_core::entanglement::{lambda_lower_bound_at, EntanglementError};
use bosonsplit_core::RegionSplit;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{GridKind, OutputFormat, SweepConfig};
use crate::fmt;

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    /// Key=value config file; any flag below overrides its file value
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Target mean particle number
    #[arg(long)]
    pub n_mean: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points between t_min and t_max inclusive
    #[arg(long)]
    pub t_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub grid: Option<GridKind>,
    /// Relative occupation mass allowed beyond the truncation
    #[arg(long)]
    pub eps_tail: Option<f64>,
    /// Cut position; the bound exists at 0 only, other values fail per row
    #[arg(long, allow_negative_numbers = true)]
    pub split: Option<f64>,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Append to an existing output file, skipping rows already written
    #[arg(long)]
    pub resume: bool,
}

pub const CSV_HEADER: &str = "T,mu,K_max,lambda,chi_norm_sq,condensate_fraction,tail_bound,status";

/// One sweep result. Numeric fields are absent when the point failed; the
/// status column then carries the error text.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    #[serde(rename = "T")]
    pub t: f64,
    pub mu: Option<f64>,
    #[serde(rename = "K_max")]
    pub k_max: Option<usize>,
    pub lambda: Option<f64>,
    pub chi_norm_sq: Option<f64>,
    pub condensate_fraction: Option<f64>,
    pub tail_bound: Option<f64>,
    pub status: String,
}

impl Row {
    fn failed(t: f64, status: String) -> Self {
        Row {
            t,
            mu: None,
            k_max: None,
            lambda: None,
            chi_norm_sq: None,
            condensate_fraction: None,
            tail_bound: None,
            status,
        }
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt::float17(self.t),
            fmt::opt_float17(self.mu),
            self.k_max.map(|k| k.to_string()).unwrap_or_default(),
            fmt::opt_float17(self.lambda),
            fmt::opt_float17(self.chi_norm_sq),
            fmt::opt_float17(self.condensate_fraction),
            fmt::opt_float17(self.tail_bound),
            fmt::csv_field(&self.status),
        )
    }
}

pub fn temperature_grid(cfg: &SweepConfig) -> Vec<f64> {
    let n = cfg.t_steps;
    if n == 1 {
        return vec![cfg.t_min];
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = i as f64 / (n - 1) as f64;
        out.push(match cfg.grid {
            GridKind::Linear => cfg.t_min + f * (cfg.t_max - cfg.t_min),
            GridKind::Log => (cfg.t_min.ln() + f * (cfg.t_max.ln() - cfg.t_min.ln())).exp(),
        });
    }
    // endpoints exactly as configured, free of roundoff from the ramp
    out[0] = cfg.t_min;
    out[n - 1] = cfg.t_max;
    out
}

fn compute_row(t: f64, cfg: &SweepConfig) -> Row {
    let outcome = RegionSplit::new(cfg.split)
        .map_err(EntanglementError::from)
        .and_then(|split| lambda_lower_bound_at(t, cfg.n_mean, cfg.eps_tail, &split));
    match outcome {
        Ok(r) => Row {
            t,
            mu: Some(r.mu),
            k_max: Some(r.k_max),
            lambda: Some(r.lambda),
            chi_norm_sq: Some(r.chi_norm_sq),
            condensate_fraction: Some(r.condensate_fraction),
            tail_bound: Some(r.tail_bound),
            status: String::from("ok"),
        },
        Err(e) => Row::failed(t, e.to_string()),
    }
}

fn merged_config(args: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(v) = args.n_mean {
        cfg.n_mean = v;
    }
    if let Some(v) = args.t_min {
        cfg.t_min = v;
    }
    if let Some(v) = args.t_max {
        cfg.t_max = v;
    }
    if let Some(v) = args.t_steps {
        cfg.t_steps = v;
    }
    if let Some(v) = args.grid {
        cfg.grid = v;
    }
    if let Some(v) = args.eps_tail {
        cfg.eps_tail = v;
    }
    if let Some(v) = args.split {
        cfg.split = v;
    }
    if let Some(v) = args.format {
        cfg.format = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn rows_already_written(path: &Path, format: OutputFormat) -> Result<usize> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {} to resume", path.display()))?;
    let lines = text.lines().count();
    Ok(match format {
        OutputFormat::Csv => lines.saturating_sub(1),
        OutputFormat::Jsonl => lines,
    })
}

struct Output {
    sink: Box<dyn Write>,
    skip: usize,
}

fn open_output(args: &SweepArgs, cfg: &SweepConfig, total: usize) -> Result<Output> {
    let Some(path) = &args.out else {
        if args.resume {
            bail!("--resume needs --out, cannot resume a stream");
        }
        let mut sink = Box::new(io::stdout()) as Box<dyn Write>;
        if cfg.format == OutputFormat::Csv {
            writeln!(sink, "{CSV_HEADER}")?;
        }
        return Ok(Output { sink, skip: 0 });
    };

    if args.resume && path.exists() {
        let skip = rows_already_written(path, cfg.format)?;
        if skip > total {
            bail!(
                "{} already holds {skip} rows but the grid has only {total} points; \
                 refusing to append",
                path.display()
            );
        }
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .with_context(|| format!("opening {} to append", path.display()))?;
        return Ok(Output { sink: Box::new(BufWriter::new(file)), skip });
    }

    let file =
        File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut sink = Box::new(BufWriter::new(file)) as Box<dyn Write>;
    if cfg.format == OutputFormat::Csv {
        writeln!(sink, "{CSV_HEADER}")?;
    }
    Ok(Output { sink, skip: 0 })
}

fn write_row(sink: &mut dyn Write, row: &Row, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => writeln!(sink, "{}", row.csv_line())?,
        OutputFormat::Jsonl => {
            let line = serde_json::to_string(row).context("encoding row")?;
            writeln!(sink, "{line}")?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn run_inner(args: &SweepArgs) -> Result<bool> {
    let cfg = merged_config(args)?;
    let temps = temperature_grid(&cfg);
    let mut out = open_output(args, &cfg, temps.len())?;

    let pending: Vec<(usize, f64)> =
        temps.iter().copied().enumerate().skip(out.skip).collect();
    let first = out.skip;

    let (tx, rx) = mpsc::channel::<(usize, Row)>();
    let worker_cfg = cfg.clone();
    let worker = std::thread::spawn(move || {
        pending.into_par_iter().for_each_with(tx, |tx, (i, t)| {
            // send fails only after the writer bailed; rows are then discarded
            let _ = tx.send((i, compute_row(t, &worker_cfg)));
        });
    });

    let mut any_failed = false;
    let mut buffer: BTreeMap<usize, Row> = BTreeMap::new();
    let mut next = first;
    for (i, row) in rx {
        buffer.insert(i, row);
        while let Some(row) = buffer.remove(&next) {
            if row.status != "ok" {
                any_failed = true;
            }
            write_row(out.sink.as_mut(), &row, cfg.format)?;
            next += 1;
        }
    }
    let _ = worker.join();
    Ok(any_failed)
}

pub fn run(args: SweepArgs) -> ExitCode {
    match run_inner(&args) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sweep: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_endpoints_and_are_monotone() {
        let mut cfg = SweepConfig { t_min: 0.1, t_max: 100.0, t_steps: 50, ..SweepConfig::default() };
        for kind in [GridKind::Linear, GridKind::Log] {
            cfg.grid = kind;
            let g = temperature_grid(&cfg);
            assert_eq!(g.len(), 50);
            assert_eq!(g[0], 0.1);
            assert_eq!(g[49], 100.0);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn log_grid_has_constant_ratio() {
        let cfg = SweepConfig {
            t_min: 1.0,
            t_max: 8.0,
            t_steps: 4,
            grid: GridKind::Log,
            ..SweepConfig::default()
        };
        let g = temperature_grid(&cfg);
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_step_grid_is_t_min() {
        let cfg = SweepConfig { t_steps: 1, ..SweepConfig::default() };
        assert_eq!(temperature_grid(&cfg), vec![cfg.t_min]);
    }

    #[test]
    fn failed_point_lands_in_status_column() {
        let cfg = SweepConfig { split: 0.7, ..SweepConfig::default() };
        let row = compute_row(1.0, &cfg);
        assert!(row.lambda.is_none());
        assert!(row.status.contains("balanced"));
        // the error text carries a comma, so the status field must be quoted
        let line = row.csv_line();
        assert!(line.ends_with(&format!("\"{}\"", row.status)), "line: {line}");
    }
}
