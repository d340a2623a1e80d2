//! Run configuration: defaults, TOML file, and command-line flags merged in
//! that order. Every file key has a same-named flag.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sliceflow_core::{ExpanderParams64, FlowConfig64, ProfileCurve64};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Grid of s values, inclusive at both ends.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub s_min: f64,
    pub s_max: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.s_max - self.s_min;
        let denom = (self.count - 1) as f64;
        (0..self.count).map(move |i| self.s_min + span * i as f64 / denom)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.count >= 2 && self.count <= 1_000_000) {
            return Err(CliError::config(format!(
                "grid count must lie in [2, 1000000], got {}",
                self.count
            )));
        }
        let ordered = self.s_min < self.s_max;
        if !ordered {
            return Err(CliError::config(format!(
                "grid needs s_min < s_max, got {}:{}",
                self.s_min, self.s_max
            )));
        }
        Ok(())
    }
}

pub fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "grid must be min:max:count, got `{text}`"
        )));
    }
    let s_min: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::config(format!("grid min: {e}")))?;
    let s_max: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::config(format!("grid max: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| CliError::config(format!("grid count: {e}")))?;
    Ok(Grid {
        s_min,
        s_max,
        count,
    })
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGrid {
    s_min: Option<f64>,
    s_max: Option<f64>,
    count: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileFlow {
    f0: Option<f64>,
    t_end: Option<f64>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    f_min: Option<f64>,
}

/// TOML schema; all keys optional so files can be partial.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    preset: Option<String>,
    table: Option<PathBuf>,
    a: Option<f64>,
    #[serde(rename = "E")]
    e: Option<f64>,
    alpha: Option<f64>,
    n: Option<u32>,
    s_max: Option<f64>,
    grid: Option<FileGrid>,
    flow: Option<FileFlow>,
    out: Option<PathBuf>,
    format: Option<String>,
    seed: Option<u64>,
    checks: Option<Vec<String>>,
}

/// Flag values collected by clap; `None` means "not given on the command
/// line", letting the file value (or default) through.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// TOML configuration file; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Profile preset: expander, line, circle, or table.
    #[arg(long)]
    pub preset: Option<String>,

    /// CSV file (header s,re_w,im_w) for the table preset.
    #[arg(long)]
    pub table: Option<PathBuf>,

    /// Expander neck scale a > 0.
    #[arg(long)]
    pub a: Option<f64>,

    /// Expander branch constant E >= 1.
    #[arg(long = "E")]
    pub e: Option<f64>,

    /// Expander exponent weight alpha >= 0.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Ambient complex dimension n >= 2.
    #[arg(long)]
    pub n: Option<u32>,

    /// Upper end of the expander domain.
    #[arg(long)]
    pub s_max: Option<f64>,

    /// Sweep grid as min:max:count.
    #[arg(long)]
    pub grid: Option<String>,

    /// Initial flow value f(0).
    #[arg(long)]
    pub f0: Option<f64>,

    /// Flow horizon t_end.
    #[arg(long)]
    pub t_end: Option<f64>,

    /// Relative tolerance of the flow integrator.
    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Absolute tolerance of the flow integrator.
    #[arg(long)]
    pub abs_tol: Option<f64>,

    /// Extinction threshold of the flow integrator.
    #[arg(long)]
    pub f_min: Option<f64>,

    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<String>,

    /// Seed for randomized sample points.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Comma-separated check names for `verify` (all when omitted).
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: ProfileCurve64,
    pub grid: Grid,
    pub flow: FlowConfig64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
    pub checks: Option<Vec<String>>,
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&body)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };

        let preset = args
            .preset
            .clone()
            .or(file.preset)
            .unwrap_or_else(|| "expander".to_string());
        let a = args.a.or(file.a).unwrap_or(1.0);
        let e = args.e.or(file.e).unwrap_or(1.0);
        let alpha = args.alpha.or(file.alpha).unwrap_or(0.0);
        let n = args.n.or(file.n).unwrap_or(2);
        let s_max = args.s_max.or(file.s_max);

        let profile = match preset.as_str() {
            "expander" => {
                let params = ExpanderParams64::new(a, e, alpha, n).map_err(CliError::from_core)?;
                match s_max {
                    Some(cap) if cap > 0.0 => ProfileCurve64::expander_with_domain(params, cap),
                    Some(cap) => {
                        return Err(CliError::config(format!("s_max must be > 0, got {cap}")))
                    }
                    None => ProfileCurve64::expander(params),
                }
            }
            "line" => ProfileCurve64::line(n),
            "circle" => ProfileCurve64::circle(n),
            "table" => {
                let path = args
                    .table
                    .clone()
                    .or(file.table)
                    .ok_or_else(|| CliError::config("preset `table` needs --table <csv>"))?;
                ProfileCurve64::from_table_csv(n, &path).map_err(CliError::from_core)?
            }
            other => {
                return Err(CliError::config(format!(
                    "unknown preset `{other}` (expected expander, line, circle, or table)"
                )))
            }
        };
        if n < 2 {
            return Err(CliError::config(format!("n must be >= 2, got {n}")));
        }

        let file_grid = file.grid.unwrap_or_default();
        let grid = match &args.grid {
            Some(text) => parse_grid(text)?,
            None => Grid {
                s_min: file_grid.s_min.unwrap_or(0.0),
                s_max: file_grid.s_max.unwrap_or(3.0),
                count: file_grid.count.unwrap_or(31),
            },
        };
        grid.validate()?;

        let file_flow = file.flow.unwrap_or_default();
        let mut flow = FlowConfig64::new(
            args.f0.or(file_flow.f0).unwrap_or(1.0),
            args.t_end.or(file_flow.t_end).unwrap_or(1.0),
        );
        flow = flow.with_tolerances(
            args.rel_tol.or(file_flow.rel_tol).unwrap_or(1e-10),
            args.abs_tol.or(file_flow.abs_tol).unwrap_or(1e-12),
        );
        flow = flow.with_f_min(args.f_min.or(file_flow.f_min).unwrap_or(1e-8));

        let format = args
            .format
            .clone()
            .or(file.format)
            .unwrap_or_else(|| "csv".to_string())
            .parse::<OutputFormat>()
            .map_err(CliError::config)?;

        Ok(Self {
            profile,
            grid,
            flow,
            out: args.out.clone().or(file.out),
            format,
            seed: args.seed.or(file.seed).unwrap_or(0),
            checks: args.checks.clone().or(file.checks),
        })
    }
}
