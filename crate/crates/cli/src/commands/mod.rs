use std::path::{Path, PathBuf};
use std::time::Instant;

use breather_lab::analytic::AkhmedievParams;
use breather_lab::{BreatherKind, BreatherSpec, GridSpec};
use clap::Args;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{self, Sweep};
use crate::error::{CliError, CliResult};
use crate::report::{self, emit, ExperimentReport, Outcome, PointReport, SweepInfo};

pub mod conserved;
pub mod eval;
pub mod evolve;
pub mod hessian;
pub mod instability;
pub mod mi;
pub mod residual;

/// Options shared by every subcommand; not part of the echoed config.
#[derive(Args, Debug, Clone, Default)]
#[group(skip)]
pub struct Common {
    /// JSON object of parameters; flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Path of the main artifact
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Run every value of one parameter: `key=v1,v2,…` or `key=start:stop:step`
    #[arg(long, value_name = "KEY=VALUES")]
    pub sweep: Option<String>,
    /// Add wall time to the report (breaks byte-for-byte reproducibility)
    #[arg(long)]
    pub timing: bool,
}

/// A subcommand whose parameters double as its config-file schema.
pub trait Experiment: Serialize + DeserializeOwned + Send + Sync {
    const NAME: &'static str;

    /// Fills defaults and validates. The result is the effective config.
    fn resolve(self) -> CliResult<Self>;

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome>;
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("parameters serialize")
}

fn point<E: Experiment>(map: Map<String, Value>, out: Option<&Path>) -> CliResult<(Value, Outcome)> {
    let params = config::parse::<E>(map)?.resolve()?;
    let outcome = params.execute(out)?;
    Ok((to_value(&params), outcome))
}

fn write_artifacts(outcome: &Outcome) -> CliResult<Vec<String>> {
    outcome
        .artifacts
        .iter()
        .map(|a| {
            report::write_file(&a.path, &a.contents)?;
            Ok(a.path.display().to_string())
        })
        .collect()
}

/// Merges config and flags, runs one point or a sweep, writes artifacts and
/// the report. Returns the overall pass flag.
pub fn run<E: Experiment>(flags: &E, common: &Common) -> CliResult<Option<bool>> {
    let start = Instant::now();
    let base = match &common.config {
        Some(path) => config::load(path)?,
        None => Map::new(),
    };
    let merged = config::overlay(base, flags)?;

    let mut report = match &common.sweep {
        None => {
            let (parameters, outcome) = point::<E>(merged, common.out.as_deref())?;
            let mut report = ExperimentReport::new(E::NAME, parameters);
            report.artifacts = write_artifacts(&outcome)?;
            report.outputs = outcome.outputs;
            report.pass = outcome.pass;
            report
        }
        Some(spec) => {
            let sweep: Sweep = spec.parse()?;
            let results: Vec<CliResult<(Value, Outcome)>> = (0..sweep.values.len())
                .into_par_iter()
                .map(|i| {
                    let out = common.out.as_ref().map(|o| report::suffixed(o, &format!("{}{i}", sweep.key)));
                    point::<E>(sweep.point(&merged, i), out.as_deref())
                })
                .collect();
            let mut report = ExperimentReport::new(E::NAME, Value::Object(merged));
            let mut pass = None;
            for r in results {
                let (parameters, outcome) = r?;
                let artifacts = write_artifacts(&outcome)?;
                report.artifacts.extend(artifacts.iter().cloned());
                if let Some(p) = outcome.pass {
                    pass = Some(pass.unwrap_or(true) && p);
                }
                report.points.push(PointReport {
                    parameters,
                    outputs: outcome.outputs,
                    artifacts,
                    pass: outcome.pass,
                });
            }
            report.pass = pass;
            report.outputs.insert("points".into(), Value::from(report.points.len()));
            report.sweep = Some(SweepInfo {
                key: sweep.key,
                values: sweep.values,
            });
            report
        }
    };
    if common.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    emit(&report, common.report.as_deref())?;
    Ok(report.pass)
}

pub fn parse_kind(kind: &Option<String>) -> CliResult<BreatherKind> {
    kind.as_deref()
        .ok_or_else(|| CliError::Usage("missing parameter `kind`".into()))?
        .parse()
        .map_err(CliError::from)
}

pub fn spec_of(kind: BreatherKind, a: Option<f64>) -> CliResult<BreatherSpec> {
    match kind {
        BreatherKind::KuznetsovMa | BreatherKind::Akhmediev => {
            let a = a.ok_or_else(|| CliError::Usage(format!("`{kind}` needs parameter `a`")))?;
            Ok(BreatherSpec::new(kind, a)?)
        }
        _ => Ok(BreatherSpec::new(kind, 0.0)?),
    }
}

/// Grid defaults: `line` for kinds on the whole line, one spatial period with
/// `periodic_points` nodes for Akhmediev.
#[derive(Debug, Clone, Copy)]
pub struct GridDefaults {
    pub line: (f64, usize),
    pub periodic_points: usize,
}

pub fn resolve_grid(
    spec: &BreatherSpec,
    length: Option<f64>,
    points: Option<usize>,
    defaults: GridDefaults,
) -> CliResult<(f64, usize)> {
    let (l, n) = if spec.kind == BreatherKind::Akhmediev {
        (AkhmedievParams::new(spec.a)?.period(), defaults.periodic_points)
    } else {
        defaults.line
    };
    let (l, n) = (length.unwrap_or(l), points.unwrap_or(n));
    GridSpec::new(l, n)?;
    Ok((l, n))
}

pub fn grid_of(length: Option<f64>, points: Option<usize>) -> CliResult<GridSpec> {
    match (length, points) {
        (Some(l), Some(n)) => Ok(GridSpec::new(l, n)?),
        _ => Err(CliError::Usage("grid was not resolved".into())),
    }
}

pub fn metadata_for<E: Experiment>(params: &E) -> Vec<(String, String)> {
    report::csv_metadata(E::NAME, &to_value(params))
}
